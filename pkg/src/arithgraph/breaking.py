"""Weak connectivity, ell-breakability, and the graph-breaking construction.

A pair of vertices is weakly connected when a path of bridges joins them (the
path is then the unique shortest one); otherwise it is multiply connected.
Breaking the graph at a cut vertex produces one smaller arithmetical graph
per component, sometimes with an appended Euclid terminal chain, and the
ell-parts of the component groups multiply across the parts whenever the cut
multiplicity is prime to ell.  That splitting is what turns the local
quantity lambda(C, C') into the exact order of the ell-part of a pair class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chains import Chain, enumerate_chains, terminal_chains
from .graph import (ArithmeticalGraph, GraphValidationError, PreconditionError,
                    VertexRef, make_graph)


# -- bridges and cut vertices ------------------------------------------------

def bridges(graph: ArithmeticalGraph) -> frozenset[tuple[int, int]]:
    """All bridge edges as (i, j) with i < j.  Multi-edges are never bridges."""
    return graph._memo("bridges", lambda: _find_bridges(graph))


def _find_bridges(graph: ArithmeticalGraph) -> frozenset[tuple[int, int]]:
    n = graph.num_vertices
    visited = [False] * n
    pre = [0] * n
    low = [0] * n
    counter = 0
    out: set[tuple[int, int]] = set()
    for root in range(n):
        if visited[root]:
            continue
        stack = [(root, -1, iter(graph.neighbors(root)))]
        visited[root] = True
        counter += 1
        pre[root] = low[root] = counter
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w, cnt in it:
                if not visited[w]:
                    visited[w] = True
                    counter += 1
                    pre[w] = low[w] = counter
                    stack.append((w, u, iter(graph.neighbors(w))))
                    advanced = True
                    break
                elif w != parent:
                    low[u] = min(low[u], pre[w])
                elif cnt > 1:
                    low[u] = min(low[u], pre[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if low[u] == pre[u] and graph.edge_count(p, u) == 1:
                        out.add((p, u) if p < u else (u, p))
    return frozenset(out)


def cut_vertices(graph: ArithmeticalGraph) -> tuple[int, ...]:
    """Articulation points, i.e. the vertices the graph can be broken at."""
    return graph._memo("cut_vertices", lambda: _find_cut_vertices(graph))


def _find_cut_vertices(graph: ArithmeticalGraph) -> tuple[int, ...]:
    n = graph.num_vertices
    visited = [False] * n
    pre = [0] * n
    low = [0] * n
    counter = 0
    out: set[int] = set()
    for root in range(n):
        if visited[root]:
            continue
        root_children = 0
        stack = [(root, -1, iter(graph.neighbors(root)))]
        visited[root] = True
        counter += 1
        pre[root] = low[root] = counter
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w, _ in it:
                if not visited[w]:
                    visited[w] = True
                    counter += 1
                    pre[w] = low[w] = counter
                    if u == root:
                        root_children += 1
                    stack.append((w, u, iter(graph.neighbors(w))))
                    advanced = True
                    break
                elif w != parent:
                    low[u] = min(low[u], pre[w])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[u])
                    if p != root and low[u] >= pre[p]:
                        out.add(p)
        if root_children > 1:
            out.add(root)
    return tuple(sorted(out))


# -- weak paths ----------------------------------------------------------------

@dataclass(frozen=True)
class WeakPath:
    """The unique bridge path between a weakly connected pair.

    ``vertices`` runs from C to C'; ``interior_nodes`` are the nodes strictly
    between them, in walk order; ``chains`` are the subpaths between
    consecutive interior nodes (endpoints included in each subpath) and
    ``weights`` their multiplicity gcds.
    """

    vertices: tuple[int, ...]
    interior_nodes: tuple[int, ...]
    chains: tuple[tuple[int, ...], ...]
    weights: tuple[int, ...]

    @property
    def path_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((a, b) if a < b else (b, a)
                     for a, b in zip(self.vertices, self.vertices[1:]))


def weak_path(graph: ArithmeticalGraph, c: VertexRef, c2: VertexRef) -> WeakPath | None:
    """The bridge path from c to c2, or None when the pair is multiply
    connected.  The bridges of a graph form a forest, so the path is unique."""
    i = graph.resolve(c)
    j = graph.resolve(c2)
    if i == j:
        raise PreconditionError("weak_path needs two distinct vertices")
    forest: dict[int, list[int]] = {}
    for a, b in bridges(graph):
        forest.setdefault(a, []).append(b)
        forest.setdefault(b, []).append(a)
    prev = {i: None}
    queue = [i]
    while queue:
        nxt = []
        for u in queue:
            for w in forest.get(u, ()):
                if w not in prev:
                    prev[w] = u
                    nxt.append(w)
        queue = nxt
    if j not in prev:
        return None
    path = [j]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    path.reverse()

    mult = graph.multiplicities
    nodes = [v for v in path[1:-1] if graph.degree(v) > 2]
    cut_positions = [0] + [path.index(v) for v in nodes] + [len(path) - 1]
    chains = []
    weights = []
    for a, b in zip(cut_positions, cut_positions[1:]):
        sub = tuple(path[a:b + 1])
        chains.append(sub)
        weights.append(math.gcd(*(mult[v] for v in sub)))
    return WeakPath(tuple(path), tuple(nodes), tuple(chains), tuple(weights))


def is_ell_breakable(path: WeakPath, ell: int) -> bool:
    """Whether every chain weight along the path is prime to ell."""
    return all(w % ell != 0 for w in path.weights)


@dataclass(frozen=True)
class BreakabilityReport:
    """Per-node data behind lambda(C, C'): the multiplicity gcd m_i of the
    component hanging off each interior node once the path edges are gone."""

    path: WeakPath
    node_mults: tuple[int, ...]
    component_gcds: tuple[int, ...]

    def lambda_power(self, ell: int) -> int:
        exp = 0
        for r_i, m_i in zip(self.node_mults, self.component_gcds):
            q = r_i // m_i
            e = 0
            while q % ell == 0:
                q //= ell
                e += 1
            exp = max(exp, e)
        return ell ** exp


def breakability_report(graph: ArithmeticalGraph, path: WeakPath) -> BreakabilityReport:
    if not path.interior_nodes:
        return BreakabilityReport(path, (), ())
    removed = set(path.path_edges)
    comp = [-1] * graph.num_vertices
    cid = 0
    for start in range(graph.num_vertices):
        if comp[start] != -1:
            continue
        stack = [start]
        comp[start] = cid
        while stack:
            u = stack.pop()
            for w, _ in graph.neighbors(u):
                key = (u, w) if u < w else (w, u)
                if key in removed:
                    continue
                if comp[w] == -1:
                    comp[w] = cid
                    stack.append(w)
        cid += 1
    mult = graph.multiplicities
    gcds = [0] * cid
    for v in range(graph.num_vertices):
        gcds[comp[v]] = math.gcd(gcds[comp[v]], mult[v])
    node_mults = tuple(mult[v] for v in path.interior_nodes)
    comp_gcds = tuple(gcds[comp[v]] for v in path.interior_nodes)
    return BreakabilityReport(path, node_mults, comp_gcds)


def lambda_power(graph: ArithmeticalGraph, path: WeakPath, ell: int) -> int:
    """The ell-power lambda(C, C'): 1 when the open path has no nodes, else
    ell^(max ord_ell(r_i / m_i)) over the interior nodes."""
    if not is_ell_breakable(path, ell):
        raise PreconditionError("pair is not ell-breakable", "Thm 5.4")
    return breakability_report(graph, path).lambda_power(ell)


def order_via_structure(graph: ArithmeticalGraph, c: VertexRef, c2: VertexRef,
                        ell: int) -> int:
    """Order of the ell-part of the pair class, computed structurally.

    Hypotheses: ell prime to both multiplicities, pair weakly connected and
    ell-breakable.  Under them the answer is lambda(C, C'), which the oracle
    suite confirms on every generated graph.
    """
    i = graph.resolve(c)
    j = graph.resolve(c2)
    r = graph.multiplicities
    if (r[i] * r[j]) % ell == 0:
        raise PreconditionError("ell divides a pair multiplicity", "Thm 5.4")
    path = weak_path(graph, i, j)
    if path is None:
        raise PreconditionError("pair is not weakly connected", "Thm 5.4")
    if not is_ell_breakable(path, ell):
        raise PreconditionError("pair is not ell-breakable", "Thm 5.4")
    return breakability_report(graph, path).lambda_power(ell)


# -- Euclid chains and the breaking construction -------------------------------

def euclid_chain(a: int, b: int) -> list[int]:
    """Multiplicities of the terminal chain grown from (a, b) by the descent
    x_{k+1} = (-x_{k-1}) mod x_k, stopping before the first zero.

    Attached to a vertex of multiplicity ``a`` the chain satisfies the
    self-intersection constraints exactly, and its terminal entry is
    gcd(a, b).
    """
    if a <= 0 or b <= 0:
        raise ValueError("euclid_chain needs positive integers")
    if b > a:
        raise ValueError("euclid_chain needs b <= a")
    chain = []
    prev, cur = a, b
    while cur:
        chain.append(cur)
        prev, cur = cur, (-prev) % cur
    return chain


@dataclass(frozen=True)
class BrokenPart:
    """One component graph of the breaking construction.

    ``vertex_map`` sends original vertex indices (component vertices and the
    cut vertex) to indices of ``graph``; ``appended`` lists the indices of
    the Euclid chain added when the cut multiplicity does not divide the
    component's edge sum.
    """

    graph: ArithmeticalGraph
    vertex_map: dict[int, int]
    cut_index: int
    gcd_divisor: int
    least_multiple: int
    deficit_seed: int
    appended: tuple[int, ...]


@dataclass(frozen=True)
class BreakResult:
    cut_vertex: int
    parts: tuple[BrokenPart, ...]


def break_at(graph: ArithmeticalGraph, d: VertexRef) -> BreakResult:
    """Break the graph at a cut vertex D.

    Each component keeps its vertices with multiplicities divided by the
    component gcd g_i (gcd taken together with r = mult(D)); the copy of D
    gets multiplicity r/g_i.  When r does not divide the weighted edge sum
    into the component, the deficit is filled with a terminal Euclid chain
    from (r/g_i, deficit/g_i).  Every part is a valid arithmetical graph.
    """
    d = graph.resolve(d)
    return graph._memo(("break_at", d), lambda: _break_at(graph, d))


def _break_at(graph: ArithmeticalGraph, d: int) -> BreakResult:
    r = graph.multiplicities[d]
    n = graph.num_vertices
    comp = [-1] * n
    comp[d] = -2
    cid = 0
    for start in range(n):
        if comp[start] != -1:
            continue
        stack = [start]
        comp[start] = cid
        while stack:
            u = stack.pop()
            for w, _ in graph.neighbors(u):
                if comp[w] == -1:
                    comp[w] = cid
                    stack.append(w)
        cid += 1
    if cid < 2:
        raise PreconditionError(f"vertex {graph.names[d]!r} is not a cut vertex",
                                "Construction 5.1")

    parts = []
    for k in range(cid):
        members = [v for v in range(n) if comp[v] == k]
        g = r
        for v in members:
            g = math.gcd(g, graph.multiplicities[v])
        edge_sum = sum(cnt * graph.multiplicities[w] for w, cnt in graph.neighbors(d)
                       if comp[w] == k)
        c_least = -(-edge_sum // r)  # least c with c*r - edge_sum >= 0
        deficit = c_least * r - edge_sum

        names_used = set()
        vertices: list[tuple[str, int]] = []
        vmap: dict[int, int] = {}
        for v in members:
            vmap[v] = len(vertices)
            vertices.append((graph.names[v], graph.multiplicities[v] // g))
            names_used.add(graph.names[v])
        cut_index = len(vertices)
        vmap[d] = cut_index
        vertices.append((graph.names[d], r // g))
        names_used.add(graph.names[d])

        edges: dict[tuple[int, int], int] = {}
        for (i, j), cnt in graph.offdiag.items():
            if comp[i] == k and comp[j] == k:
                edges[(vmap[i], vmap[j])] = cnt
            elif i == d and comp[j] == k:
                edges[(vmap[j], cut_index)] = cnt
            elif j == d and comp[i] == k:
                edges[(vmap[i], cut_index)] = cnt

        appended = []
        r_hat = 0
        if deficit:
            r_hat = deficit // g
            prev = cut_index
            for step, mult in enumerate(euclid_chain(r // g, r_hat), start=1):
                name = f"eu{step}"
                while name in names_used:
                    name = "_" + name
                names_used.add(name)
                idx = len(vertices)
                vertices.append((name, mult))
                edges[(prev, idx)] = 1
                appended.append(idx)
                prev = idx
        try:
            part_graph = make_graph(vertices, edges)
        except GraphValidationError as exc:  # pragma: no cover - construction is total
            raise AssertionError(f"breaking produced an invalid part: {exc}") from exc
        parts.append(BrokenPart(part_graph, vmap, cut_index, g, c_least,
                                r_hat, tuple(appended)))
    return BreakResult(d, tuple(parts))


def is_breakable_at(graph: ArithmeticalGraph, d: VertexRef, ell: int) -> bool:
    """ell-breakable at (D, r): D is a cut vertex and ell does not divide r."""
    d = graph.resolve(d)
    return graph.multiplicities[d] % ell != 0 and d in cut_vertices(graph)


def _pair_vector(graph: ArithmeticalGraph, i: int, j: int) -> list[int]:
    r = graph.multiplicities
    g = math.gcd(r[i], r[j])
    vec = [0] * graph.num_vertices
    vec[i] = r[j] // g
    vec[j] = -r[i] // g
    return vec


def _ell_part_order(order: int, ell: int) -> int:
    out = 1
    while order % ell == 0:
        order //= ell
        out *= ell
    return out


@dataclass(frozen=True)
class SplitCheckRecord:
    """Verification data for one breaking: the multiset of ell-power
    invariant factors before and after, plus sampled pair orders."""

    ell: int
    factors_whole: tuple[int, ...]
    factors_parts: tuple[tuple[int, ...], ...]
    pair_checks: tuple[tuple[str, str, int, int], ...]  # names, whole, part

    @property
    def ok(self) -> bool:
        combined = sorted(f for fs in self.factors_parts for f in fs)
        if combined != sorted(self.factors_whole):
            return False
        return all(a == b for _, _, a, b in self.pair_checks)


def split_check(graph: ArithmeticalGraph, d: VertexRef, ell: int,
                pairs_per_part: int = 3) -> SplitCheckRecord:
    """Check the splitting isomorphism at an ell-breakable cut vertex: the
    ell-parts of the invariant factors multiply across the parts, and pair
    classes keep their ell-part order inside their own part."""
    from .component_group import phi_structure

    d = graph.resolve(d)
    if graph.multiplicities[d] % ell == 0:
        raise PreconditionError("ell divides the cut multiplicity", "Prop 5.3")
    result = break_at(graph, d)

    def ell_factors(structure):
        return tuple(sorted(_ell_part_order(f, ell)
                            for f in structure.invariant_factors
                            if f % ell == 0))

    whole = phi_structure(graph)
    factors_whole = ell_factors(whole)
    factors_parts = []
    pair_checks = []
    for part in result.parts:
        sub = phi_structure(part.graph)
        factors_parts.append(ell_factors(sub))
        members = sorted(v for v in part.vertex_map if v != result.cut_vertex)
        candidates = [(a, b) for pos, a in enumerate(members)
                      for b in members[pos + 1:] + [result.cut_vertex]]
        for a, b in candidates[:pairs_per_part]:
            whole_order = _ell_part_order(
                whole.order_of(_pair_vector(graph, a, b)), ell)
            part_order = _ell_part_order(
                sub.order_of(_pair_vector(part.graph, part.vertex_map[a],
                                          part.vertex_map[b])), ell)
            pair_checks.append((graph.names[a], graph.names[b],
                                whole_order, part_order))
    return SplitCheckRecord(ell, factors_whole, tuple(factors_parts),
                            tuple(pair_checks))


# -- elementary pairs -----------------------------------------------------------

def _terminal_chain_at(graph: ArithmeticalGraph, d: int, chain: Chain) -> None:
    if not (chain.is_terminal and chain.left_node == d):
        raise PreconditionError("chain is not a terminal chain at the node",
                                "Prop 4.3")
    if not chain.simple_edges:
        raise PreconditionError("terminal chain has a multiple edge", "Prop 4.3")


def _gcd_outside(graph: ArithmeticalGraph, d: int, t1: Chain, t2: Chain) -> int:
    """gcd of multiplicities over the component of D once the edges of the
    two chains are removed (the component always contains D)."""
    banned = set()
    for ch in (t1, t2):
        banned.update(zip(ch.vertices, ch.vertices[1:]))
        banned.update((b, a) for a, b in zip(ch.vertices, ch.vertices[1:]))
    seen = {d}
    stack = [d]
    g = 0
    while stack:
        u = stack.pop()
        g = math.gcd(g, graph.multiplicities[u])
        for w, _ in graph.neighbors(u):
            if (u, w) in banned or w in seen:
                continue
            seen.add(w)
            stack.append(w)
    return g


def _ord(n: int, ell: int) -> int:
    e = 0
    while n % ell == 0:
        n //= ell
        e += 1
    return e


def elementary_pair_order(graph: ArithmeticalGraph, d: VertexRef,
                          t1: Chain, t2: Chain, ell: int) -> int:
    """Order of the ell-part of the pair of terminal vertices of two terminal
    chains at a common node.

    With m the multiplicity gcd over the rest of the graph at D: the order is
    ell^ord_ell(r/m) when ell divides neither terminal multiplicity, and
    ell^ord_ell(r / lcm(r_n, r'_n)) when it divides exactly one.  Both
    terminal multiplicities divisible is outside the proven cases and raises.
    """
    d = graph.resolve(d)
    _terminal_chain_at(graph, d, t1)
    _terminal_chain_at(graph, d, t2)
    if t1 == t2:
        raise PreconditionError("the two terminal chains must be distinct", "Prop 4.3")
    r = graph.multiplicities[d]
    rn = graph.multiplicities[t1.vertices[-1]]
    rn2 = graph.multiplicities[t2.vertices[-1]]
    div1 = rn % ell == 0
    div2 = rn2 % ell == 0
    if div1 and div2:
        raise PreconditionError("both terminal multiplicities divisible by ell",
                                "Prop 4.3")
    if not div1 and not div2:
        m = _gcd_outside(graph, d, t1, t2)
        return ell ** _ord(r // m, ell)
    return ell ** (_ord(r, ell) - _ord(math.lcm(rn, rn2), ell))


@dataclass(frozen=True)
class SelfPairingResult:
    pairing_order: int        # order of the ell-part of <tau, tau> in Q/Z
    not_divisible: bool       # True only when non-divisibility is proven
    z: int                    # weighted contribution of D's other neighbors
    m: int


def self_pairing_order(graph: ArithmeticalGraph, d: VertexRef,
                       t1: Chain, t2: Chain, ell: int) -> SelfPairingResult:
    """The ell-part of the self-pairing of an elementary pair, plus the
    non-divisibility flag.

    z is read off the node relation |c_DD| r = r_1 + r'_1 + z.  When ell
    divides neither terminal multiplicity the pairing ell-order is
    ell^(ord_ell r - ord_ell z) (clamped at 0); with exactly one divisible it
    equals the order of the element itself.  The flag is set only when that
    forces non-divisibility: equal ord_ell(z) and ord_ell(m) in the first
    case, always in the second, and never when the ell-part is trivial.
    """
    d = graph.resolve(d)
    _terminal_chain_at(graph, d, t1)
    _terminal_chain_at(graph, d, t2)
    r = graph.multiplicities[d]
    rn = graph.multiplicities[t1.vertices[-1]]
    rn2 = graph.multiplicities[t2.vertices[-1]]
    r1 = graph.multiplicities[t1.vertices[1]]
    r12 = graph.multiplicities[t2.vertices[1]]
    z = -graph.diagonal[d] * r - r1 - r12
    m = _gcd_outside(graph, d, t1, t2)
    div1 = rn % ell == 0
    div2 = rn2 % ell == 0
    if div1 and div2:
        raise PreconditionError("both terminal multiplicities divisible by ell",
                                "Prop 4.5")
    if not div1 and not div2:
        pairing_order = ell ** max(0, _ord(r, ell) - _ord(z, ell))
        element_order = ell ** _ord(r // m, ell)
        flag = _ord(z, ell) == _ord(m, ell) and element_order > 1
    else:
        pairing_order = ell ** (_ord(r, ell) - _ord(math.lcm(rn, rn2), ell))
        flag = pairing_order > 1
    return SelfPairingResult(pairing_order, flag, z, m)
