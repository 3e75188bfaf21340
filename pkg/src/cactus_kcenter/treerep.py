"""Tree representation of a cactus: grafts, hinges and cycle nodes.

A graft is a vertex on no cycle; a hinge is a cycle vertex of degree >= 3.
Every cycle becomes one node adjacent to exactly the hinge nodes of that
cycle; two non-cycle nodes are adjacent iff their vertices share a non-cycle
edge.  The result is a tree, rooted at a leaf node.  Each node receives an
associate vertex which acts as the gateway for demand propagation.
"""

from __future__ import annotations

from .graph import CactusGraph, InternalInvariantError

GRAFT = 0
HINGE = 1
CYCLE = 2

_KIND_NAMES = {GRAFT: "graft", HINGE: "hinge", CYCLE: "cycle"}


class TreeRep:
    """Rooted tree over grafts/hinges/cycles with associate vertices."""

    __slots__ = (
        "graph",
        "kind",
        "ref",
        "parent",
        "parent_edge",
        "children",
        "associate",
        "root",
        "order",
        "vertex_node",
        "cycle_node",
        "neighbors",
    )

    def __init__(self, graph, kind, ref, neighbors):
        self.graph = graph
        self.kind = kind
        self.ref = ref  # vertex id (graft/hinge) or cycle index
        self.neighbors = neighbors  # list of (node, connecting edge id or -1)
        self.parent = []
        self.parent_edge = []
        self.children = []
        self.associate = []
        self.root = -1
        self.order = []
        self.vertex_node = {}
        self.cycle_node = {}
        for t, k in enumerate(kind):
            if k == CYCLE:
                self.cycle_node[ref[t]] = t
            else:
                self.vertex_node[ref[t]] = t

    def __len__(self):
        return len(self.kind)

    def degree(self, t):
        return len(self.neighbors[t])

    def kind_name(self, t):
        return _KIND_NAMES[self.kind[t]]

    def is_leaf(self, t):
        return len(self.neighbors[t]) <= 1


def _root_key(graph, kind, ref, t):
    """Deterministic root choice: smallest associate-candidate vertex id."""
    if kind[t] == CYCLE:
        return min(graph.cycles[ref[t]].vertices)
    return ref[t]


def build_tree_representation(
    graph: CactusGraph, root_at_vertex: int | None = None, root_at_cycle: int | None = None
) -> TreeRep:
    """Build the rooted tree representation in linear time.

    By default the root is the leaf node whose associate-candidate vertex has
    the smallest id.  ``root_at_vertex``/``root_at_cycle`` override this with
    the leaf node representing the given vertex or cycle (it must be a leaf).
    """
    n = graph.n
    on_cycle = [False] * n
    for cyc in graph.cycles:
        for v in cyc.vertices:
            on_cycle[v] = True

    kind = []
    ref = []
    vertex_node = [-1] * n
    for v in range(n):
        if not on_cycle[v]:
            vertex_node[v] = len(kind)
            kind.append(GRAFT)
            ref.append(v)
        elif graph.degree(v) >= 3:
            vertex_node[v] = len(kind)
            kind.append(HINGE)
            ref.append(v)
    cycle_node = {}
    for cyc in graph.cycles:
        cycle_node[cyc.index] = len(kind)
        kind.append(CYCLE)
        ref.append(cyc.index)

    nodes = len(kind)
    neighbors = [[] for _ in range(nodes)]
    for eid in range(graph.m):
        if graph.edge_cycle[eid] != -1:
            continue
        a, b = graph.edge_u[eid], graph.edge_v[eid]
        ta, tb = vertex_node[a], vertex_node[b]
        if ta == -1 or tb == -1:
            raise InternalInvariantError("non-cycle edge endpoint lacks a node")
        neighbors[ta].append((tb, eid))
        neighbors[tb].append((ta, eid))
    for cyc in graph.cycles:
        tc = cycle_node[cyc.index]
        for v in cyc.vertices:
            tv = vertex_node[v]
            if tv != -1 and kind[tv] == HINGE:
                neighbors[tc].append((tv, -1))
                neighbors[tv].append((tc, -1))

    tree = TreeRep(graph, kind, ref, neighbors)

    # Select the root leaf.
    if root_at_vertex is not None:
        root = vertex_node[root_at_vertex]
        if root == -1:
            raise InternalInvariantError(f"vertex {root_at_vertex} has no tree node")
    elif root_at_cycle is not None:
        root = cycle_node[root_at_cycle]
    else:
        root = -1
        best = None
        for t in range(nodes):
            if len(neighbors[t]) <= 1:
                key = _root_key(graph, kind, ref, t)
                if best is None or key < best:
                    best = key
                    root = t
    if root == -1:
        raise InternalInvariantError("tree representation has no leaf")
    if len(neighbors[root]) > 1:
        raise InternalInvariantError("requested root is not a leaf node")

    parent = [-1] * nodes
    parent_edge = [-1] * nodes
    children = [[] for _ in range(nodes)]
    associate = [-1] * nodes
    order = []
    stack = [root]
    seen = [False] * nodes
    seen[root] = True
    bfs = [root]
    while stack:
        t = stack.pop()
        order.append(t)
        for nbr, eid in neighbors[t]:
            if not seen[nbr]:
                seen[nbr] = True
                parent[nbr] = t
                parent_edge[nbr] = eid
                children[t].append(nbr)
                stack.append(nbr)
    if len(order) != nodes:
        raise InternalInvariantError("tree representation is disconnected")
    # Associates: top-down so cycle nodes can inherit from their parent hinge.
    for t in order:
        if kind[t] != CYCLE:
            associate[t] = ref[t]
        elif t == root:
            associate[t] = min(graph.cycles[ref[t]].vertices)
        else:
            p = parent[t]
            if kind[p] == CYCLE:
                raise InternalInvariantError("cycle node parented by a cycle node")
            associate[t] = associate[p]

    tree.parent = parent
    tree.parent_edge = parent_edge
    tree.children = children
    tree.associate = associate
    tree.root = root
    tree.order = list(reversed(order))  # children before parents
    tree.vertex_node = {v: vertex_node[v] for v in range(n) if vertex_node[v] != -1}
    tree.cycle_node = cycle_node
    return tree


def leaf_maxpaths(tree: TreeRep):
    """All maxpaths containing a non-root leaf, each listed leaf first.

    A maxpath is a maximal chain whose interior nodes have degree 2; its ends
    have degree 1 or >= 3.  Paths from distinct leaves stop at the first
    branch node (or the root), so they are node-disjoint except for shared
    branch endpoints.
    """
    paths = []
    for t in range(len(tree)):
        if t == tree.root or not tree.is_leaf(t):
            continue
        path = [t]
        prev = -1
        cur = t
        while True:
            nxts = [nbr for nbr, _ in tree.neighbors[cur] if nbr != prev]
            if cur != t and (len(nxts) != 1):
                break  # branch node or dead end: stop
            if not nxts:
                break  # isolated single node
            prev, cur = cur, nxts[0]
            path.append(cur)
            if tree.degree(cur) != 2:
                break
        paths.append(path)
    return paths


def validate_tree_representation(tree: TreeRep):
    """Re-derive structural rules from the graph; raise on any violation.

    Used by tests as an independent checker of node kinds and adjacency.
    """
    graph = tree.graph
    on_cycle = [False] * graph.n
    for cyc in graph.cycles:
        for v in cyc.vertices:
            on_cycle[v] = True
    if not tree.is_leaf(tree.root):
        raise InternalInvariantError("root is not a leaf")
    for t in range(len(tree)):
        k = tree.kind[t]
        if k == GRAFT and on_cycle[tree.ref[t]]:
            raise InternalInvariantError("graft node on a cycle")
        if k == HINGE and (not on_cycle[tree.ref[t]] or graph.degree(tree.ref[t]) < 3):
            raise InternalInvariantError("hinge node is not a hinge vertex")
        if k == CYCLE:
            hinges = {
                v
                for v in graph.cycles[tree.ref[t]].vertices
                if graph.degree(v) >= 3
            }
            nbr_vertices = set()
            for nbr, _ in tree.neighbors[t]:
                if tree.kind[nbr] == GRAFT:
                    raise InternalInvariantError("cycle node adjacent to a graft")
                if tree.kind[nbr] == CYCLE:
                    raise InternalInvariantError("cycle node adjacent to a cycle")
                nbr_vertices.add(tree.ref[nbr])
            if nbr_vertices != hinges:
                raise InternalInvariantError("cycle node neighbours are not its hinges")
        if tree.associate[t] == -1:
            raise InternalInvariantError("node without associate")
        if k == CYCLE and t != tree.root:
            if tree.associate[t] != tree.associate[tree.parent[t]]:
                raise InternalInvariantError("cycle associate differs from parent hinge")
