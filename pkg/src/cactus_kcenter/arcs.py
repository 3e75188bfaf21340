"""Proper circular-arc machinery: super-arc removal, piercing, next links.

Arcs are closed, live on a circle of circumference ``total`` and are stored
sorted clockwise by midpoint.  Full-circle arcs (diameter >= circumference)
must be filtered out by callers before constructing an ArcSet; they are
pierced by any point and carry no structure.

The piercing primitives exploit two facts about proper (containment-free)
sets: start order, midpoint order and end order coincide cyclically, and any
arc intersecting ``c`` from behind contains ``c``'s start while any arc
intersecting it from ahead contains ``c``'s end.  The greedy chain that
starts with a point on some arc's start and then repeatedly stabs the end of
the next unpierced arc is therefore optimal for its starting choice.
"""

from __future__ import annotations

from .graph import InternalInvariantError


class Arc:
    __slots__ = ("owner", "mid", "half", "start", "length")

    def __init__(self, owner, mid, half, total):
        self.owner = owner
        self.mid = mid % total
        self.half = half
        self.start = (mid - half) % total
        self.length = half + half

    def __repr__(self):
        return f"Arc(owner={self.owner}, start={self.start}, len={self.length})"


class ArcSet:
    """Sorted closed arcs on a circle, with lazily computed link structure."""

    __slots__ = ("total", "arcs", "_cw_next", "_ccw_next")

    def __init__(self, total, arcs):
        self.total = total
        self.arcs = arcs
        self._cw_next = None
        self._ccw_next = None

    @staticmethod
    def build(total, items, dedupe=True):
        """items: (owner, midpoint, half_length) with 2*half < total.

        Equal (midpoint, half) duplicates keep the smallest owner; midpoint
        ties between distinct lengths survive here and die in super-arc
        removal.
        """
        arcs = []
        for owner, mid, half in items:
            if half < 0:
                raise InternalInvariantError("negative arc half-length")
            if half + half >= total:
                raise InternalInvariantError("full-circle arc in ArcSet")
            arcs.append(Arc(owner, mid, half, total))
        arcs.sort(key=lambda a: (a.mid, a.half, a.owner))
        if dedupe:
            out = []
            for a in arcs:
                if out and out[-1].mid == a.mid and out[-1].half == a.half:
                    continue
                out.append(a)
            arcs = out
        return ArcSet(total, arcs)

    def __len__(self):
        return len(self.arcs)

    # -- closed-arc geometry ------------------------------------------------

    def contains_point(self, i, p):
        a = self.arcs[i]
        return (p - a.start) % self.total <= a.length

    def contains_arc(self, i, j):
        a, b = self.arcs[i], self.arcs[j]
        return (b.start - a.start) % self.total + b.length <= a.length

    def intersects(self, i, j):
        a, b = self.arcs[i], self.arcs[j]
        return (
            (b.start - a.start) % self.total <= a.length
            or (a.start - b.start) % self.total <= b.length
        )

    def end_of(self, i):
        a = self.arcs[i]
        return (a.start + a.length) % self.total

    def circ_dist(self, p, q):
        d = (p - q) % self.total
        return min(d, self.total - d)

    # -- links ----------------------------------------------------------------

    def cw_next(self):
        if self._cw_next is None:
            self._cw_next = _next_links(self)
        return self._cw_next

    def ccw_next(self):
        """Counterclockwise next, by symmetry with the clockwise scan."""
        if self._ccw_next is None:
            m = len(self.arcs)
            links = [None] * m
            for i in range(m):
                for step in range(1, m):
                    j = (i - step) % m
                    if not self.intersects(i, j):
                        links[i] = j
                        break
            self._ccw_next = links
        return self._ccw_next


def _next_links(arcset: ArcSet):
    """Clockwise next per arc (None when every other arc intersects it).

    Shared-cursor scan; the cursor only restarts after an arc with no next,
    so sets where all links exist are processed in linear time.
    """
    m = len(arcset.arcs)
    links = [None] * m
    if m <= 1:
        return links
    j = 1  # absolute cursor, interpreted mod m
    for i in range(m):
        if j <= i:
            j = i + 1
        steps = j - i
        while steps < m and arcset.intersects(i, j % m):
            j += 1
            steps += 1
        if steps >= m:
            links[i] = None
            j = i + 1  # restart for the following arc
        else:
            links[i] = j % m
    return links


def remove_super_arcs(arcset: ArcSet) -> ArcSet:
    """Drop every arc that contains another arc; linear two-direction sweep."""
    m = len(arcset.arcs)
    if m <= 1:
        return ArcSet(arcset.total, list(arcset.arcs))
    alive_next = [(i + 1) % m for i in range(m)]
    alive_prev = [(i - 1) % m for i in range(m)]
    alive = [True] * m
    count = m

    def drop(i):
        nonlocal count
        alive[i] = False
        count -= 1
        p, nx = alive_prev[i], alive_next[i]
        alive_next[p] = nx
        alive_prev[nx] = p

    for direction in (1, -1):
        if count <= 1:
            break
        succ = alive_next if direction == 1 else alive_prev
        a = next(i for i in range(m) if alive[i])
        b = succ[a]
        visited = [False] * m
        while not visited[a] and count > 1:
            if a == b:
                break
            if arcset.contains_arc(b, a):
                nb = succ[b]
                drop(b)
                b = nb
            else:
                visited[a] = True
                a = b
                b = succ[b]
    kept = [arcset.arcs[i] for i in range(m) if alive[i]]
    return ArcSet(arcset.total, kept)


# ---------------------------------------------------------------------------
# Piercing


def common_cover_segments(arcset: ArcSet):
    """Cyclic segments covered by every arc of the set (may be empty or split).

    Unrolls all arcs in the frame of arc 0's start and sweeps interval
    endpoints; a position belongs to the result iff all arcs contain it.
    """
    m = len(arcset.arcs)
    total = arcset.total
    if m == 0:
        return []
    origin = arcset.arcs[0].start
    events = []  # (pos, kind): kind 0 start (+1 at pos), 1 end (-1 after pos)
    for a in arcset.arcs:
        u = (a.start - origin) % total
        e = u + a.length
        if e < total:
            events.append((u, 0))
            events.append((e, 1))
        else:
            events.append((u, 0))
            events.append((total, 1))
            events.append((0, 0))
            events.append((e - total, 1))
    events.sort()
    segments = []
    running = 0
    prev_pos = 0
    seg_start = None
    for pos, kind in events:
        if seg_start is not None and pos > seg_start:
            segments.append((seg_start, pos))
            seg_start = None
        if kind == 0:
            running += 1
            if running == m:
                seg_start = pos
        else:
            if running == m and seg_start is not None:
                # zero-length common point
                segments.append((seg_start, pos))
                seg_start = None
            running -= 1
        prev_pos = pos
    # Merge wrap-around and map back to circle coordinates.
    out = []
    for s, e in segments:
        if e >= s:
            out.append(((s + origin) % total, (e + origin) % total, e - s))
    merged = []
    for s, e, ln in out:
        if merged and merged[-1][1] == s:
            ps, pe, pl = merged[-1]
            merged[-1] = (ps, e, pl + ln)
        else:
            merged.append((s, e, ln))
    return [(s, e) for s, e, _ in merged]


def point_in_segments(segments, p, total):
    for s, e in segments:
        if (p - s) % total <= (e - s) % total:
            return True
    return False


def nearest_in_segments(segments, p, total):
    """Point of the segment union closest to p on the circle."""
    best = None
    for s, e in segments:
        if (p - s) % total <= (e - s) % total:
            return p
        for cand in (s, e):
            d = (p - cand) % total
            d = min(d, total - d)
            if best is None or d < best[0] or (d == best[0] and cand < best[1]):
                best = (d, cand)
    return None if best is None else best[1]


class ChainOracle:
    """Evaluates fixed-length piercing chains from any starting arc in O(1).

    A chain of ``npoints`` from arc ``c`` places its first point on the start
    of ``c`` and subsequent points on the ends of the neighbour/next sequence.
    Validity means every arc of the set is pierced.
    """

    def __init__(self, arcset: ArcSet, npoints: int):
        self.arcset = arcset
        self.npoints = npoints
        self.links = arcset.cw_next()
        m = len(arcset)
        if npoints >= 2:
            level = npoints - 2
            self.jump = q_next_all(arcset, level) if level > 0 else list(range(m))
        else:
            self.jump = None
        self.segments = common_cover_segments(arcset) if npoints == 1 else None

    def evaluate(self, c):
        """(valid, x1, xlast) for the chain starting at arc index c."""
        arcset = self.arcset
        x1 = arcset.arcs[c].start
        if self.npoints == 1:
            ok = point_in_segments(self.segments, x1, arcset.total)
            return ok, x1, x1
        m = len(arcset)
        nb = (c + 1) % m
        zlast = self.jump[nb]
        if zlast is None:
            # The chain closed early, contradicting minimality of npoints.
            return False, x1, None
        xlast = arcset.end_of(zlast)
        w = self.links[zlast]
        ok = w is None or arcset.contains_point(w, x1)
        return ok, x1, xlast

    def points(self, c):
        """Materialise the chain's piercing points (walk, O(npoints))."""
        arcset = self.arcset
        pts = [arcset.arcs[c].start]
        if self.npoints == 1:
            return pts
        m = len(arcset)
        z = (c + 1) % m
        pts.append(arcset.end_of(z))
        for _ in range(self.npoints - 2):
            z = self.links[z]
            if z is None:
                raise InternalInvariantError("piercing chain broke early")
            pts.append(arcset.end_of(z))
        return pts


def _chain_walk(arcset: ArcSet, c: int):
    """Greedy chain length from arc c, with wrap detection (O(m))."""
    m = len(arcset)
    if m == 1:
        return 1
    links = arcset.cw_next()
    x1 = arcset.arcs[c].start
    z = (c + 1) % m
    progress = 1  # cyclic index distance travelled from c
    npoints = 2
    while True:
        w = links[z]
        if w is None:
            return npoints
        progress += (w - z) % m
        if progress >= m or arcset.contains_point(w, x1):
            return npoints
        z = w
        npoints += 1
        if npoints > m + 1:
            raise InternalInvariantError("piercing chain does not close")


def piercing_number(arcset: ArcSet) -> int:
    m = len(arcset)
    if m == 0:
        return 0
    ell = _chain_walk(arcset, 0)
    if ell == 1:
        return 1
    if ell == 2:
        return 1 if common_cover_segments(arcset) else 2
    oracle = ChainOracle(arcset, ell - 1)
    for c in range(m):
        ok, _, _ = oracle.evaluate(c)
        if ok:
            return ell - 1
    return ell


def min_piercing_set(arcset: ArcSet):
    """A minimum-cardinality piercing point set (positions on the circle)."""
    m = len(arcset)
    if m == 0:
        return []
    ell = _chain_walk(arcset, 0)
    if ell >= 2:
        segments = common_cover_segments(arcset)
        if segments:
            return [segments[0][0]]
        if ell == 2:
            return ChainOracle(arcset, 2).points(0)
        oracle = ChainOracle(arcset, ell - 1)
        for c in range(m):
            ok, _, _ = oracle.evaluate(c)
            if ok:
                return oracle.points(c)
        return ChainOracle(arcset, ell).points(0)
    return [arcset.arcs[0].start]


def clockwise_next_all(arcset: ArcSet):
    """Public wrapper: fill and return the clockwise next links."""
    return arcset.cw_next()


def counterclockwise_next_all(arcset: ArcSet):
    return arcset.ccw_next()


def q_next_all(arcset: ArcSet, q: int):
    """q-fold composition of clockwise next for all arcs, None-saturating.

    Linear time: the next links form a functional graph whose components each
    hold at most one directed ring; ring members use modular arithmetic on the
    ring and tree members read the q-th ancestor off the traversal stack.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    links = arcset.cw_next()
    m = len(arcset)
    result = [None] * m
    ring_id = [-1] * m
    ring_pos = [0] * m
    rings = []
    stamp = [-1] * m
    for s in range(m):
        if stamp[s] != -1:
            continue
        path = []
        v = s
        while v is not None and stamp[v] == -1:
            stamp[v] = s
            path.append(v)
            v = links[v]
        if v is not None and stamp[v] == s and ring_id[v] == -1:
            # new ring discovered: the tail of `path` from v onward
            idx = path.index(v)
            ring = path[idx:]
            rid = len(rings)
            rings.append(ring)
            for p, node in enumerate(ring):
                ring_id[node] = rid
                ring_pos[node] = p

    children = [[] for _ in range(m)]
    roots = []
    for v in range(m):
        w = links[v]
        if w is None:
            roots.append((v, None))
        elif ring_id[v] == -1:
            children[w].append(v)
    for ring in rings:
        for node in ring:
            roots.append((node, ring))

    for root, ring in roots:
        if ring is not None:
            rl = len(ring)
            result[root] = ring[(ring_pos[root] + q) % rl]
        # Iterative DFS below the root; stack[d] is the depth-d node.
        stack = [root]
        iters = [iter(children[root])]
        while iters:
            child = next(iters[-1], None)
            if child is None:
                iters.pop()
                stack.pop()
                continue
            stack.append(child)
            iters.append(iter(children[child]))
            d = len(stack) - 1
            if q <= d:
                result[child] = stack[d - q]
            elif ring is not None:
                rl = len(ring)
                result[child] = ring[(ring_pos[root] + (q - d)) % rl]
            else:
                result[child] = None
    return result
