"""Independent ground truth for differential testing.

Everything here is deliberately brute force: exhaustive set cover over
critical points for small instances, full candidate-value enumeration, and
definitional implementations of the circular-arc routines.  None of it shares
code with the fast algorithms it checks.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import CactusGraph, distances_from_vertex
from .scalars import INF, div_or_inf

SMALL_LIMIT = 14
MEDIUM_LIMIT = 300


class SizeLimit(Exception):
    pass


def all_pairs(graph: CactusGraph):
    return [distances_from_vertex(graph, s) for s in range(graph.n)]


# ---------------------------------------------------------------------------
# Exhaustive feasibility via set cover over critical points


def _coverage_masks(graph, dist, lam):
    """Deduplicated, dominance-filtered coverage bitmasks of critical points.

    Critical points: every vertex, plus for every (vertex, edge) pair the
    boundary points where the weighted distance to that vertex equals lam.
    An optimal cover can always be normalised onto these points because each
    coverage region on an edge is delimited by them.
    """
    n = graph.n
    masks = set()
    for x in range(n):
        dx = dist[x]
        mask = 0
        for v in range(n):
            if graph.weights[v] * dx[v] <= lam:
                mask |= 1 << v
        masks.add(mask)
    for eid in range(graph.m):
        a, b = graph.edge_u[eid], graph.edge_v[eid]
        ln = graph.edge_len[eid]
        offs = set()
        for v in range(n):
            w = graph.weights[v]
            allow = div_or_inf(lam, w)
            if allow is INF:
                continue
            t1 = allow - dist[v][a]
            if 0 <= t1 <= ln:
                offs.add(t1)
            t2 = ln - (allow - dist[v][b])
            if 0 <= t2 <= ln:
                offs.add(t2)
        for t in offs:
            mask = 0
            for v in range(n):
                d = min(dist[v][a] + t, dist[v][b] + (ln - t))
                if graph.weights[v] * d <= lam:
                    mask |= 1 << v
            masks.add(mask)
    masks.discard(0)
    # Drop dominated masks.
    out = []
    sorted_masks = sorted(masks, key=lambda m: -bin(m).count("1"))
    for m in sorted_masks:
        if not any(m | kept == kept for kept in out):
            out.append(m)
    return out


def oracle_min_centers(graph: CactusGraph, lam, dist=None, cap=None, limit=SMALL_LIMIT):
    """Exact minimum number of centers covering every vertex within lam.

    Layered BFS over covered-vertex bitmasks; ``cap`` bounds the search depth
    (useful when only "<= k" is needed).
    """
    if graph.n > limit:
        raise SizeLimit(f"oracle_min_centers limited to n <= {limit}")
    if dist is None:
        dist = all_pairs(graph)
    full = (1 << graph.n) - 1
    # Zero-weight vertices are always covered.
    base = 0
    for v in range(graph.n):
        if graph.weights[v] == 0:
            base |= 1 << v
    if base == full:
        return 0
    masks = _coverage_masks(graph, dist, lam)
    if not masks:
        return None
    frontier = {base}
    seen = {base}
    depth = 0
    while frontier:
        depth += 1
        if cap is not None and depth > cap:
            return None
        nxt = set()
        for state in frontier:
            for m in masks:
                new = state | m
                if new == full:
                    return depth
                if new not in seen:
                    seen.add(new)
                    nxt.add(new)
        frontier = nxt
    return None


def oracle_feasible(graph: CactusGraph, k: int, lam, dist=None, limit=SMALL_LIMIT) -> bool:
    got = oracle_min_centers(graph, lam, dist=dist, cap=k, limit=limit)
    return got is not None and got <= k


# ---------------------------------------------------------------------------
# Candidate values


def candidate_set(graph: CactusGraph, dist=None):
    """Sorted distinct candidate cost values, guaranteed to contain the optimum.

    Includes every one-sided cost w(u)*d(u, v) and, for every edge and vertex
    pair, the equalisation ordinates of both same-direction and opposite
    direction center placements on that edge.
    """
    if dist is None:
        dist = all_pairs(graph)
    n = graph.n
    values = {Fraction(0)}
    for u in range(n):
        wu = graph.weights[u]
        for v in range(n):
            values.add(Fraction(wu * dist[u][v]))
    for eid in range(graph.m):
        a, b = graph.edge_u[eid], graph.edge_v[eid]
        ln = graph.edge_len[eid]
        for u in range(n):
            wu = graph.weights[u]
            if wu == 0:
                continue
            for v in range(u + 1, n):
                wv = graph.weights[v]
                if wv == 0:
                    continue
                dua, dub = dist[u][a], dist[u][b]
                dva, dvb = dist[v][a], dist[v][b]
                # centre x at offset t from a; four direction combinations
                # opposite directions: wu*(dua + t) = wv*(dvb + ln - t)
                s = wu + wv
                t = (wv * (dvb + ln) - wu * dua) / s
                if 0 <= t <= ln:
                    values.add(Fraction(wu * (dua + t)))
                t = (wu * (dub + ln) - wv * dva) / s
                if 0 <= t <= ln:
                    values.add(Fraction(wv * (dva + t)))
                # same direction: both reached through the same endpoint
                if wu != wv:
                    d = wu - wv
                    t = (wv * dva - wu * dua) / d
                    if 0 <= t <= ln:
                        values.add(Fraction(wu * (dua + t)))
                    s = (wv * dvb - wu * dub) / d
                    if 0 <= s <= ln:
                        values.add(Fraction(wu * (dub + s)))
    return sorted(values)


def oracle_solve_small(graph: CactusGraph, k: int, dist=None, limit=SMALL_LIMIT):
    """Exact optimum: smallest feasible candidate value (binary search)."""
    if graph.n > limit:
        raise SizeLimit(f"oracle_solve_small limited to n <= {limit}")
    if dist is None:
        dist = all_pairs(graph)
    cands = candidate_set(graph, dist)
    lo, hi = 0, len(cands) - 1
    # cands[hi] (max one-sided cost from any vertex) is always feasible for k>=1.
    while lo < hi:
        mid = (lo + hi) // 2
        if oracle_feasible(graph, k, cands[mid], dist=dist, limit=limit):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


# ---------------------------------------------------------------------------
# Circular-arc oracles (definitional, quadratic)


def _mod(x, total):
    return x % total


def arc_contains_point(arc, p, total):
    return _mod(p - arc[0], total) <= arc[1]


def arc_contains_arc(a, b, total):
    # a contains b (a, b are (start, length) pairs)
    return _mod(b[0] - a[0], total) + b[1] <= a[1]


def arcs_intersect(a, b, total):
    return arc_contains_point(a, b[0], total) or arc_contains_point(b, a[0], total)


def brute_proper_filter(arcs, total):
    """Indices of arcs not strictly containing any other arc (O(m^2))."""
    out = []
    for i, a in enumerate(arcs):
        is_super = False
        for j, b in enumerate(arcs):
            if i == j:
                continue
            if arc_contains_arc(a, b, total) and not arc_contains_arc(b, a, total):
                is_super = True
                break
            if a == b and j < i:
                is_super = True  # duplicate: keep the first only
                break
        if not is_super:
            out.append(i)
    return out


def brute_next(arcs, total, order):
    """Definitional clockwise next per arc, or None (O(m^2)).

    ``order`` maps rank -> arc index sorted by midpoint clockwise.
    """
    m = len(order)
    result = {}
    for ri, i in enumerate(order):
        found = None
        for step in range(1, m):
            j = order[(ri + step) % m]
            if not arcs_intersect(arcs[i], arcs[j], total):
                found = j
                break
        result[i] = found
    return result


def brute_q_next(next_map, start, q):
    cur = start
    for _ in range(q):
        if cur is None:
            return None
        cur = next_map[cur]
    return cur


def brute_min_piercing(arcs, total):
    """Exact minimum piercing set size via endpoint candidates (polynomial).

    For each candidate first point (an arc endpoint), arcs not containing it
    linearise to an interval stabbing instance solved greedily.
    """
    m = len(arcs)
    if m == 0:
        return 0
    candidates = set()
    for s, ln in arcs:
        candidates.add(_mod(s, total))
        candidates.add(_mod(s + ln, total))
    best = None
    for p in candidates:
        rest = [a for a in arcs if not arc_contains_point(a, p, total)]
        # Linearise: no remaining arc crosses p, so sort by right endpoint
        # and stab greedily.
        items = sorted(
            ((_mod(s - p, total), _mod(s - p, total) + ln) for s, ln in rest),
            key=lambda it: it[1],
        )
        count = 1
        last_stab = None
        for s, e in items:
            if last_stab is None or s > last_stab:
                count += 1
                last_stab = e
        if best is None or count < best:
            best = count
    return best
