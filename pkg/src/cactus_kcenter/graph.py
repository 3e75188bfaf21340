"""Cactus network data model: validation, cycle registry, points, distances.

A cactus is a connected graph in which no two simple cycles share an edge.
Validation doubles as the cycle extractor: an iterative DFS claims the edges
of each fundamental cycle, and any edge claimed twice proves the input is not
a cactus.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from fractions import Fraction

from .scalars import Scalar, decimal_str, parse_scalar


class CactusError(Exception):
    """Base class for input validation failures (CLI exit code 2)."""


class MalformedInput(CactusError):
    pass


class NotConnected(CactusError):
    pass


class SharedCycleEdge(CactusError):
    pass


class NonpositiveLength(CactusError):
    pass


class NegativeWeight(CactusError):
    pass


class InternalInvariantError(Exception):
    """Raised when a computed state violates a structural invariant (exit 3)."""


class Cycle:
    """A simple cycle stored in canonical orientation.

    ``vertices[i]`` connects to ``vertices[i+1]`` by ``edge_ids[i]`` of length
    ``lengths[i]``; the last edge closes back to ``vertices[0]``.  ``prefix[i]``
    is the clockwise position of ``vertices[i]``, with ``prefix[0] == 0``.
    Canonical form: rotation starts at the smallest vertex id and proceeds
    toward its smaller-id cycle neighbour.
    """

    __slots__ = ("vertices", "edge_ids", "lengths", "prefix", "total", "index")

    def __init__(self, vertices, edge_ids, lengths, index):
        self.vertices = vertices
        self.edge_ids = edge_ids
        self.lengths = lengths
        self.index = index
        prefix = [0]
        acc = 0
        for ln in lengths[:-1]:
            acc = acc + ln
            prefix.append(acc)
        self.prefix = prefix
        self.total = acc + lengths[-1]

    def __len__(self):
        return len(self.vertices)

    def position_of(self, local_idx):
        return self.prefix[local_idx]


class CactusGraph:
    """Immutable-by-convention weighted cactus.

    Vertices carry nonnegative weights, edges strictly positive lengths.
    ``adj[v]`` lists ``(edge_id, neighbour)`` pairs; ``edge_cycle[e]`` is the
    cycle index owning edge ``e`` or -1.
    """

    __slots__ = (
        "n",
        "weights",
        "edge_u",
        "edge_v",
        "edge_len",
        "adj",
        "cycles",
        "edge_cycle",
        "cycle_pos",
        "fast",
    )

    def __init__(self, n, weights, edge_u, edge_v, edge_len, adj, cycles, edge_cycle, fast):
        self.n = n
        self.weights = weights
        self.edge_u = edge_u
        self.edge_v = edge_v
        self.edge_len = edge_len
        self.adj = adj
        self.cycles = cycles
        self.edge_cycle = edge_cycle
        self.fast = fast
        # vertex -> (cycle index, local index) for vertices on cycles; a vertex
        # shared by several cycles keeps one entry per cycle.
        pos = {}
        for cyc in cycles:
            for i, v in enumerate(cyc.vertices):
                pos.setdefault(v, []).append((cyc.index, i))
        self.cycle_pos = pos

    @property
    def m(self):
        return len(self.edge_len)

    def degree(self, v):
        return len(self.adj[v])

    def edge_between(self, u, v):
        for eid, nbr in self.adj[u]:
            if nbr == v:
                return eid
        return None

    def other_end(self, eid, v):
        u = self.edge_u[eid]
        return self.edge_v[eid] if u == v else u

    def total_edge_length(self):
        total = 0
        for ln in self.edge_len:
            total = total + ln
        return total

    def max_weight(self):
        best = 0
        for w in self.weights:
            if w > best:
                best = w
        return best


def _canonical_cycle(vertices, edge_ids, lengths):
    """Rotate/flip a cycle so it starts at min id heading to its smaller neighbour."""
    k = len(vertices)
    start = min(range(k), key=lambda i: vertices[i])
    nxt = vertices[(start + 1) % k]
    prv = vertices[(start - 1) % k]
    if prv < nxt:
        # reverse orientation
        vs = [vertices[start]] + [vertices[(start - i) % k] for i in range(1, k)]
        es = [edge_ids[(start - 1 - i) % k] for i in range(k)]
        ls = [lengths[(start - 1 - i) % k] for i in range(k)]
    else:
        vs = [vertices[(start + i) % k] for i in range(k)]
        es = [edge_ids[(start + i) % k] for i in range(k)]
        ls = [lengths[(start + i) % k] for i in range(k)]
    return vs, es, ls


def validate_cactus(vertices, edges, fast: bool = False) -> CactusGraph:
    """Validate raw (id, weight) / (u, v, length) data and build the registry.

    Raises a CactusError subclass naming the violated invariant.
    """
    n = len(vertices)
    if n == 0:
        raise MalformedInput("graph has no vertices")
    weights = [None] * n
    for vid, w in vertices:
        if not isinstance(vid, int) or vid < 0 or vid >= n:
            raise MalformedInput(f"vertex ids must be dense 0..{n - 1}, got {vid}")
        if weights[vid] is not None:
            raise MalformedInput(f"duplicate vertex id {vid}")
        if w < 0:
            raise NegativeWeight(f"vertex {vid} has negative weight")
        weights[vid] = w
    edge_u, edge_v, edge_len = [], [], []
    adj = [[] for _ in range(n)]
    seen = set()
    for u, v, ln in edges:
        if not (isinstance(u, int) and isinstance(v, int)) or not (0 <= u < n and 0 <= v < n):
            raise MalformedInput(f"edge endpoint out of range: ({u}, {v})")
        if u == v:
            raise MalformedInput(f"self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise MalformedInput(f"duplicate edge {key}")
        seen.add(key)
        if ln <= 0:
            raise NonpositiveLength(f"edge {key} has non-positive length")
        eid = len(edge_len)
        edge_u.append(u)
        edge_v.append(v)
        edge_len.append(ln)
        adj[u].append((eid, v))
        adj[v].append((eid, u))

    # Iterative DFS: connectivity plus cycle extraction with edge claiming.
    m = len(edge_len)
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    parent_edge = [-1] * n
    parent = [-1] * n
    claimed = [-1] * m  # cycle index an edge belongs to
    raw_cycles = []
    stack = [(0, iter(adj[0]))]
    color[0] = 1
    visited_count = 1
    while stack:
        v, it = stack[-1]
        advanced = False
        for eid, nbr in it:
            if eid == parent_edge[v]:
                continue
            if color[nbr] == 0:
                color[nbr] = 1
                parent[nbr] = v
                parent_edge[nbr] = eid
                visited_count += 1
                stack.append((nbr, iter(adj[nbr])))
                advanced = True
                break
            if color[nbr] == 1:
                # Back edge: walk the tree path v .. nbr claiming its edges.
                cyc_index = len(raw_cycles)
                path_vertices = [v]
                path_edges = [eid]
                cur = v
                while cur != nbr:
                    pe = parent_edge[cur]
                    if pe == -1:
                        raise InternalInvariantError("back edge to non-ancestor")
                    if claimed[pe] != -1:
                        raise SharedCycleEdge(
                            f"edge ({edge_u[pe]}, {edge_v[pe]}) lies on two cycles"
                        )
                    claimed[pe] = cyc_index
                    path_edges.append(pe)
                    cur = parent[cur]
                    path_vertices.append(cur)
                if claimed[eid] != -1:
                    raise SharedCycleEdge(
                        f"edge ({edge_u[eid]}, {edge_v[eid]}) lies on two cycles"
                    )
                claimed[eid] = cyc_index
                # path_vertices = v, ..., nbr; closing edge nbr-v is path_edges[0].
                vs = path_vertices
                es = path_edges[1:] + [path_edges[0]]
                ls = [edge_len[e] for e in es]
                raw_cycles.append((vs, es, ls))
            # color 2 cannot occur for undirected DFS non-parent edges
        if not advanced:
            color[v] = 2
            stack.pop()
    if visited_count != n:
        raise NotConnected(f"graph is not connected ({visited_count} of {n} reachable)")

    cycles = []
    edge_cycle = claimed
    for idx, (vs, es, ls) in enumerate(raw_cycles):
        vs, es, ls = _canonical_cycle(vs, es, ls)
        cycles.append(Cycle(vs, es, ls, idx))
        for e in es:
            edge_cycle[e] = idx
    return CactusGraph(n, weights, edge_u, edge_v, edge_len, adj, cycles, edge_cycle, fast)


def graph_from_parts(weights, edges, cycles_data, fast=False) -> CactusGraph:
    """Trusted constructor used for stems/contractions built from a valid cactus.

    ``cycles_data`` is a list of vertex-id lists in cyclic order; edges must
    already respect the cactus property.  No re-validation is performed.
    """
    n = len(weights)
    edge_u, edge_v, edge_len = [], [], []
    adj = [[] for _ in range(n)]
    index = {}
    for u, v, ln in edges:
        eid = len(edge_len)
        edge_u.append(u)
        edge_v.append(v)
        edge_len.append(ln)
        adj[u].append((eid, v))
        adj[v].append((eid, u))
        index[(u, v) if u < v else (v, u)] = eid
    edge_cycle = [-1] * len(edge_len)
    cycles = []
    for ci, vs in enumerate(cycles_data):
        k = len(vs)
        es = []
        ls = []
        for i in range(k):
            a, b = vs[i], vs[(i + 1) % k]
            eid = index[(a, b) if a < b else (b, a)]
            es.append(eid)
            ls.append(edge_len[eid])
        vs2, es2, ls2 = _canonical_cycle(vs, es, ls)
        cycles.append(Cycle(vs2, es2, ls2, ci))
        for e in es2:
            edge_cycle[e] = ci
    return CactusGraph(n, weights, edge_u, edge_v, edge_len, adj, cycles, edge_cycle, fast)


@dataclass(frozen=True)
class NetPoint:
    """A point on the network: either a vertex or an interior edge point.

    Interior points store the offset from the lower-id endpoint of the edge;
    offsets 0 / full-length are canonicalised to the vertex form so equality
    and hashing are stable.
    """

    vertex: int | None
    edge: int | None
    offset: Scalar

    @staticmethod
    def at_vertex(v: int) -> "NetPoint":
        return NetPoint(v, None, 0)

    @staticmethod
    def on_edge(graph: CactusGraph, eid: int, offset_from_lower) -> "NetPoint":
        u, v = graph.edge_u[eid], graph.edge_v[eid]
        lo, hi = (u, v) if u < v else (v, u)
        ln = graph.edge_len[eid]
        if offset_from_lower < 0 or offset_from_lower > ln:
            raise InternalInvariantError("edge offset out of bounds")
        if offset_from_lower == 0:
            return NetPoint.at_vertex(lo)
        if offset_from_lower == ln:
            return NetPoint.at_vertex(hi)
        return NetPoint(None, eid, offset_from_lower)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self):
        if self.is_vertex:
            return (0, self.vertex, 0)
        return (1, self.edge, self.offset)


def point_on_edge_toward(graph, eid, from_vertex, dist) -> NetPoint:
    """The point at ``dist`` from ``from_vertex`` along edge ``eid``."""
    u, v = graph.edge_u[eid], graph.edge_v[eid]
    lo = u if u < v else v
    if from_vertex == lo:
        return NetPoint.on_edge(graph, eid, dist)
    return NetPoint.on_edge(graph, eid, graph.edge_len[eid] - dist)


# ---------------------------------------------------------------------------
# Distances


def distances_from_vertex(graph: CactusGraph, source: int):
    """Exact single-source shortest path lengths (Dijkstra)."""
    dist = [None] * graph.n
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if dist[v] is not None and d > dist[v]:
            continue
        for eid, nbr in graph.adj[v]:
            nd = d + graph.edge_len[eid]
            if dist[nbr] is None or nd < dist[nbr]:
                dist[nbr] = nd
                heapq.heappush(heap, (nd, nbr))
    return dist


def _point_seeds(graph, p: NetPoint):
    """(vertex, initial distance) seeds representing a network point."""
    if p.is_vertex:
        return [(p.vertex, 0)]
    u, v = graph.edge_u[p.edge], graph.edge_v[p.edge]
    lo, hi = (u, v) if u < v else (v, u)
    ln = graph.edge_len[p.edge]
    return [(lo, p.offset), (hi, ln - p.offset)]


def shortest_distance(graph: CactusGraph, x: NetPoint, y: NetPoint):
    """Exact shortest-path length between two network points."""
    if x == y:
        return 0
    direct = None
    if not x.is_vertex and not y.is_vertex and x.edge == y.edge:
        direct = abs(x.offset - y.offset)
    seeds = _point_seeds(graph, x)
    dist = [None] * graph.n
    heap = []
    for v, d in seeds:
        if dist[v] is None or d < dist[v]:
            dist[v] = d
            heapq.heappush(heap, (d, v))
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for eid, nbr in graph.adj[v]:
            nd = d + graph.edge_len[eid]
            if dist[nbr] is None or nd < dist[nbr]:
                dist[nbr] = nd
                heapq.heappush(heap, (nd, nbr))
    best = None
    for v, d in _point_seeds(graph, y):
        if dist[v] is None:
            continue
        cand = dist[v] + d
        if best is None or cand < best:
            best = cand
    if direct is not None and (best is None or direct < best):
        best = direct
    return best


def nearest_of(graph: CactusGraph, points):
    """Per-vertex (distance, point index) of the nearest point in ``points``.

    Multi-source Dijkstra; ties broken by the smaller point index so that the
    assignment is deterministic.
    """
    dist = [None] * graph.n
    owner = [-1] * graph.n
    heap = []
    for idx, p in enumerate(points):
        for v, d in _point_seeds(graph, p):
            if dist[v] is None or d < dist[v] or (d == dist[v] and idx < owner[v]):
                dist[v] = d
                owner[v] = idx
                heapq.heappush(heap, (d, idx, v))
    while heap:
        d, idx, v = heapq.heappop(heap)
        if dist[v] is not None and (d, idx) > (dist[v], owner[v]):
            continue
        for eid, nbr in graph.adj[v]:
            nd = d + graph.edge_len[eid]
            if dist[nbr] is None or nd < dist[nbr] or (nd == dist[nbr] and idx < owner[nbr]):
                dist[nbr] = nd
                owner[nbr] = idx
                heapq.heappush(heap, (nd, idx, nbr))
    return dist, owner


def covering_cost(graph: CactusGraph, points):
    """max over vertices of weighted distance to the nearest of ``points``."""
    dist, _ = nearest_of(graph, points)
    worst = 0
    for v in range(graph.n):
        if dist[v] is None:
            raise InternalInvariantError("uncovered vertex in covering_cost")
        c = graph.weights[v] * dist[v]
        if c > worst:
            worst = c
    return worst


# ---------------------------------------------------------------------------
# File format


def graph_to_dict(graph: CactusGraph) -> dict:
    return {
        "vertices": [
            {"id": i, "w": decimal_str(graph.weights[i])} for i in range(graph.n)
        ],
        "edges": [
            {
                "u": graph.edge_u[e],
                "v": graph.edge_v[e],
                "len": decimal_str(graph.edge_len[e]),
            }
            for e in range(graph.m)
        ],
    }


def graph_from_dict(data: dict, fast: bool = False) -> CactusGraph:
    try:
        vertices = [(item["id"], parse_scalar(item["w"], fast)) for item in data["vertices"]]
        edges = [
            (item["u"], item["v"], parse_scalar(item["len"], fast))
            for item in data["edges"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad graph description: {exc}") from exc
    return validate_cactus(vertices, edges, fast=fast)


def dump_graph(graph: CactusGraph) -> str:
    return json.dumps(graph_to_dict(graph), indent=None, separators=(",", ":"))


def load_graph(text: str, fast: bool = False) -> CactusGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    return graph_from_dict(data, fast=fast)
