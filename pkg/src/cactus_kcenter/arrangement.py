"""Parametric pruning over weighted path embeddings.

Every pairwise cost on a weighted path shows up as the ordinate of a crossing
in a family of three lines per path point (rising, falling, vertical).  The
pruner maintains an interval (lo, hi] known to bracket the optimum and
repeatedly tests a uniformly random crossing ordinate strictly inside it with
the monotone feasibility oracle, until no crossing remains inside.  Crossing
counting and sampling use inversions between the left-to-right line orders at
heights lo+ and hi-.

Exact mode only; fast (float) solving uses the fixed-precision bisection in
``prune_bisect`` instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import InternalInvariantError
from .scalars import midpoint


@dataclass(frozen=True)
class Interval:
    lo: object  # strictly below the optimum (may be -1 when 0 is feasible)
    hi: object  # feasible

    def contains_open(self, x):
        return self.lo < x < self.hi

    def width(self):
        return self.hi - self.lo


class LineFamily:
    """Lines x(y) = x0 + s*y; vertical lines have s = 0 in this frame."""

    __slots__ = ("x0", "slope")

    def __init__(self):
        self.x0 = []
        self.slope = []

    def add(self, x0, slope):
        self.x0.append(x0)
        self.slope.append(slope)

    def __len__(self):
        return len(self.x0)

    def crossing(self, i, j):
        """Ordinate where lines i and j meet, or None for parallels."""
        si, sj = self.slope[i], self.slope[j]
        if si == sj:
            return None
        return (self.x0[j] - self.x0[i]) / (si - sj)


def lines_from_path(path) -> LineFamily:
    """Three lines per path point: rising/falling (weight > 0) and vertical.

    ``path`` is a sequence of (coordinate, weight) or (coordinate, weight,
    owner) tuples.  Zero-weight points keep only their vertical line; their
    slanted lines would be horizontal and cross everything at ordinate 0,
    which can never lie strictly inside a nonnegative interval.
    """
    fam = LineFamily()
    for item in path:
        coord, weight = item[0], item[1]
        fam.add(coord, 0)
        if weight > 0:
            inv = 1 / Fraction(weight) if not isinstance(weight, float) else 1.0 / weight
            fam.add(coord, inv)
            fam.add(coord, -inv)
    return fam


class _Fenwick:
    __slots__ = ("tree", "size")

    def __init__(self, size):
        self.size = size
        self.tree = [0] * (size + 1)

    def add(self, i):
        i += 1
        while i <= self.size:
            self.tree[i] += 1
            i += i & (-i)

    def prefix(self, i):
        # count of added indices <= i
        i += 1
        s = 0
        while i > 0:
            s += self.tree[i]
            i -= i & (-i)
        return s


def _orders(fam: LineFamily, lo, hi):
    """Ranks in the left-to-right orders just above lo and just below hi."""
    m = len(fam)
    key_lo = sorted(range(m), key=lambda i: (fam.x0[i] + fam.slope[i] * lo, fam.slope[i], i))
    key_hi = sorted(range(m), key=lambda i: (fam.x0[i] + fam.slope[i] * hi, -fam.slope[i], i))
    rank_hi = [0] * m
    for r, i in enumerate(key_hi):
        rank_hi[i] = r
    seq = [rank_hi[i] for i in key_lo]
    return key_lo, seq


def _inversion_counts(seq):
    """c[j] = number of i < j with seq[i] > seq[j]."""
    m = len(seq)
    fen = _Fenwick(m)
    counts = [0] * m
    for j, v in enumerate(seq):
        counts[j] = j - fen.prefix(v)
        fen.add(v)
    return counts


def prune_interval(fam: LineFamily, oracle, interval: Interval, rng) -> Interval:
    """Shrink the interval until no crossing ordinate lies strictly inside.

    ``oracle`` must be monotone (False up to the hidden threshold, then True)
    and the input interval must satisfy oracle(hi) implicitly true and lo
    strictly below the threshold.  Each tested ordinate moves one endpoint, so
    the endpoint feasibility signs are preserved.
    """
    lo, hi = interval.lo, interval.hi
    if len(fam) < 2 or not (lo < hi):
        return Interval(lo, hi)
    while True:
        key_lo, seq = _orders(fam, lo, hi)
        counts = _inversion_counts(seq)
        total = sum(counts)
        if total == 0:
            return Interval(lo, hi)
        r = rng.randrange(total)
        j = 0
        while r >= counts[j]:
            r -= counts[j]
            j += 1
        # r-th earlier element inverted with j
        partner = None
        seen = 0
        for i in range(j):
            if seq[i] > seq[j]:
                if seen == r:
                    partner = i
                    break
                seen += 1
        if partner is None:
            raise InternalInvariantError("inversion bookkeeping out of sync")
        y = fam.crossing(key_lo[partner], key_lo[j])
        if y is None or not (lo < y < hi):
            raise InternalInvariantError("sampled crossing outside the interval")
        if oracle(y):
            hi = y
        else:
            lo = y


def concatenate_paths(paths):
    """One embedding holding every path, separated by unit-length gaps.

    Cross-path crossings introduce extra candidate ordinates; by monotonicity
    of the oracle they can only tighten the pruned interval, never exclude the
    threshold.
    """
    combined = []
    cursor = 0
    first = True
    for path in paths:
        if not path:
            continue
        if not first:
            cursor = cursor + 1  # separator edge
        base = path[0][0]
        span = 0
        for item in path:
            rel = item[0] - base
            combined.append((cursor + rel, item[1]))
            if rel > span:
                span = rel
        cursor = cursor + span
        first = False
    return combined


def prune_over_paths(paths, oracle, interval: Interval, rng) -> Interval:
    combined = concatenate_paths(paths)
    fam = lines_from_path(combined)
    return prune_interval(fam, oracle, interval, rng)


def prune_bisect(oracle, interval: Interval, rel_tol=1e-9, max_iter=200) -> Interval:
    """Fast-mode pruning: plain value bisection to a relative tolerance."""
    lo, hi = interval.lo, interval.hi
    for _ in range(max_iter):
        if hi - lo <= rel_tol * max(abs(hi), 1.0):
            break
        mid = midpoint(lo, hi)
        if not (lo < mid < hi):
            break
        if oracle(mid):
            hi = mid
        else:
            lo = mid
    return Interval(lo, hi)
