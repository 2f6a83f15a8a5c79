"""Nodes, chains, weights and the b-sequence of a chain.

A node is a vertex of degree greater than 2 (multi-edges count), a terminal
vertex has degree 1, and a chain is a maximal subpath whose interior vertices
have degree 2, closed up with its bounding node(s).  The weight of a chain is
the gcd of the multiplicities of all vertices on it, bounding nodes included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import ArithmeticalGraph, PreconditionError, VertexRef


@dataclass(frozen=True)
class VertexClassification:
    nodes: tuple[int, ...]
    terminals: tuple[int, ...]
    chain_vertices: tuple[int, ...]


def classify_vertices(graph: ArithmeticalGraph) -> VertexClassification:
    """Partition vertices by degree: nodes (> 2), terminals (= 1), the rest."""
    def build():
        nodes, terminals, rest = [], [], []
        for i in range(graph.num_vertices):
            d = graph.degree(i)
            if d > 2:
                nodes.append(i)
            elif d == 1:
                terminals.append(i)
            else:
                rest.append(i)
        return VertexClassification(tuple(nodes), tuple(terminals), tuple(rest))
    return graph._memo("vertex_classification", build)


@dataclass(frozen=True)
class Chain:
    """One chain of the graph.

    ``vertices`` is the full ordered list including bounding nodes; for a
    chain that leaves and re-enters the same node the node appears at both
    ends.  ``simple_edges`` records whether every consecutive edge count is 1
    (the b-sequence is only defined in that case).
    """

    vertices: tuple[int, ...]
    left_node: int | None
    right_node: int | None
    is_terminal: bool
    is_closed: bool
    weight: int
    simple_edges: bool

    @property
    def interior(self) -> tuple[int, ...]:
        start = 1 if self.left_node is not None else 0
        stop = -1 if self.right_node is not None else None
        return self.vertices[start:stop]


def enumerate_chains(graph: ArithmeticalGraph) -> tuple[Chain, ...]:
    """All chains: the closed-up components of the graph minus its nodes,
    plus one bare chain for every pair of adjacent nodes."""
    return graph._memo("chains", lambda: _enumerate_chains(graph))


def _enumerate_chains(graph: ArithmeticalGraph) -> tuple[Chain, ...]:
    cls = classify_vertices(graph)
    node_set = set(cls.nodes)
    r = graph.multiplicities
    chains: list[Chain] = []

    seen = [False] * graph.num_vertices
    for start in range(graph.num_vertices):
        if start in node_set or seen[start]:
            continue
        # component of non-node vertices containing start
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for w, _ in graph.neighbors(u):
                if w not in node_set and not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comp_set = set(comp)
        inner_edges = sum(c for u in comp for w, c in graph.neighbors(u)
                          if w in comp_set) // 2
        if inner_edges >= len(comp):
            # the component is a cycle; only possible when G itself is one
            order = _walk_cycle(graph, comp_set)
            weight = math.gcd(*(r[i] for i in order))
            chains.append(Chain(tuple(order), None, None, False, True, weight,
                                all(graph.edge_count(a, b) == 1
                                    for a, b in zip(order, order[1:] + order[:1]))))
            continue
        order = _walk_path(graph, comp_set)
        if len(order) == 1:
            x = order[0]
            node_edges = [(w, cnt) for w, cnt in graph.neighbors(x) if w in node_set]
            left = right = None
            if len(node_edges) == 2:
                left, right = node_edges[0][0], node_edges[1][0]
            elif len(node_edges) == 1:
                w, cnt = node_edges[0]
                left = w
                right = w if cnt > 1 else None
        else:
            left = _node_neighbor(graph, order[0], node_set)
            right = _node_neighbor(graph, order[-1], node_set)
        verts = list(order)
        if left is not None:
            verts.insert(0, left)
        if right is not None:
            verts.append(right)
        # orientation: a single bounding node goes first; two nodes by index
        if left is None and right is not None:
            verts.reverse()
            left, right = right, left
        elif left is not None and right is not None and right < left:
            verts.reverse()
            left, right = right, left
        elif left is None and right is None and verts[-1] < verts[0]:
            verts.reverse()
        is_terminal = any(graph.degree(i) == 1 for i in order)
        weight = math.gcd(*(r[i] for i in verts))
        simple = all(graph.edge_count(a, b) == 1 for a, b in zip(verts, verts[1:]))
        chains.append(Chain(tuple(verts), left, right, is_terminal, False,
                            weight, simple))

    for a_pos, a in enumerate(cls.nodes):
        for b in cls.nodes[a_pos + 1:]:
            c = graph.edge_count(a, b)
            if c:
                chains.append(Chain((a, b), a, b, False, False,
                                    math.gcd(r[a], r[b]), c == 1))
    chains.sort(key=lambda ch: ch.vertices)
    return tuple(chains)


def _node_neighbor(graph, vertex, node_set):
    for w, _ in graph.neighbors(vertex):
        if w in node_set:
            return w
    return None


def _walk_path(graph, comp_set):
    """Order a path component; endpoints have at most one neighbor inside."""
    ends = [u for u in comp_set
            if sum(1 for w, _ in graph.neighbors(u) if w in comp_set) <= 1]
    start = min(ends) if ends else min(comp_set)
    order = [start]
    prev = None
    cur = start
    while True:
        nxt = next((w for w, _ in graph.neighbors(cur)
                    if w in comp_set and w != prev and w not in order), None)
        if nxt is None:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def _walk_cycle(graph, comp_set):
    start = min(comp_set)
    if len(comp_set) <= 2:
        return sorted(comp_set)
    neighbors = sorted(w for w, _ in graph.neighbors(start) if w in comp_set)
    order = [start]
    prev, cur = start, neighbors[0]
    while cur != start:
        order.append(cur)
        nxt = next(w for w, _ in graph.neighbors(cur)
                   if w in comp_set and w != prev)
        prev, cur = cur, nxt
    return order


@dataclass(frozen=True)
class ChainData:
    """The tridiagonal matrix of a chain's interior and its b-sequence.

    ``(b_1, ..., b_n) . N = (0, ..., 0, -b)`` exactly, with ``b_1 = 1`` and
    all entries positive.  For a chain bounded by nodes of multiplicities r
    and r' the identity ``b r_n = r + b_n r'`` holds; on a terminal chain
    ``b r_n = r``.
    """

    chain: Chain
    n_rows: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    b_final: int


def b_sequence(graph: ArithmeticalGraph, chain: Chain) -> ChainData:
    """Solve ``(b_1, ..., b_n) N = (0, ..., 0, -b)`` left to right."""
    if chain.is_closed:
        raise PreconditionError("chain is a closed cycle, no b-sequence")
    if chain.left_node is None:
        raise PreconditionError("chain has no bounding node, no b-sequence")
    if not chain.simple_edges:
        raise PreconditionError("chain has a multiple edge, no b-sequence")
    interior = chain.interior
    n = len(interior)
    if n == 0:
        raise PreconditionError("bare two-node chain has no interior vertices")

    r = graph.multiplicities
    c = [-graph.diagonal[i] for i in interior]  # positive self-intersection sizes
    b = [1]
    for i in range(1, n):
        prev = b[i - 2] if i >= 2 else 0
        b.append(c[i - 1] * b[i - 1] - prev)
    b_final = c[n - 1] * b[n - 1] - (b[n - 2] if n >= 2 else 0)

    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = -c[i]
        if i + 1 < n:
            rows[i][i + 1] = 1
            rows[i + 1][i] = 1
    # (b_1, ..., b_n) . N == (0, ..., 0, -b) and Lemma 2.4, checked always
    prod = [sum(b[i] * rows[i][j] for i in range(n)) for j in range(n)]
    expected = [0] * (n - 1) + [-b_final]
    if prod != expected:
        raise AssertionError("b-sequence does not solve its defining relation")
    r_node = r[chain.left_node]
    r_last = r[interior[-1]]
    r_other = r[chain.right_node] if chain.right_node is not None else 0
    if b_final * r_last != r_node + b[n - 1] * r_other:
        raise AssertionError("b r_n != r + b_n r' on a chain")
    if any(x <= 0 for x in b) or b_final <= 0:
        raise AssertionError("b-sequence not positive")
    return ChainData(chain, tuple(tuple(row) for row in rows), tuple(b), b_final)


@dataclass(frozen=True)
class OrderRule:
    """A fast-path statement about the order of a pair element: either the
    exact order, or a positive integer the order divides."""

    kind: str  # "order" or "divides"
    value: int
    justification: str


def terminal_chains(graph: ArithmeticalGraph) -> tuple[Chain, ...]:
    """Terminal chains that are bounded by a node."""
    return tuple(ch for ch in enumerate_chains(graph)
                 if ch.is_terminal and ch.left_node is not None)


def fast_order_rules(graph: ArithmeticalGraph, c: VertexRef, c2: VertexRef) -> OrderRule | None:
    """Order facts that need no cokernel computation.

    Two vertices of one terminal chain give order 1, as does the bounding
    node paired with any vertex of its terminal chain.  A pair joined by a
    single bridge is killed by gcd(r, r')/s, where s is the multiplicity gcd
    over the bridge side of the first vertex.  Returns None when no rule
    applies.
    """
    i = graph.resolve(c)
    j = graph.resolve(c2)
    if i == j:
        return OrderRule("order", 1, "trivial pair")

    for ch in terminal_chains(graph):
        members = set(ch.vertices)
        if i in members and j in members:
            if ch.left_node in (i, j):
                return OrderRule("order", 1, "Prop 3.4")
            return OrderRule("order", 1, "Prop 2.7")

    if graph.edge_count(i, j) == 1:
        side = _side_without_edge(graph, i, j)
        if side is not None:
            r = graph.multiplicities
            s = math.gcd(*(r[x] for x in side))
            g = math.gcd(r[i], r[j])
            return OrderRule("divides", g // s, "Lemma 2.2")
    return None


def _side_without_edge(graph, i, j):
    """Vertices reachable from i without the single edge (i, j); None when
    the edge is not a bridge."""
    if graph.edge_count(i, j) != 1:
        return None  # multi-edges are never bridges
    seen = {i}
    stack = [i]
    while stack:
        u = stack.pop()
        for w, _ in graph.neighbors(u):
            if u == i and w == j:
                continue  # the bridge candidate itself
            if w == j:
                return None
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen
