"""Generators for the graph families used by the test suites and the CLI.

All generators return validated :class:`~arithgraph.graph.ArithmeticalGraph`
instances and are deterministic (``random_reduced`` takes an explicit seed).
"""

from __future__ import annotations

import random

from .breaking import euclid_chain
from .graph import ArithmeticalGraph, GraphError, make_graph


class FamilyError(GraphError):
    """The family descriptor cannot be satisfied."""


def cycle(n: int) -> ArithmeticalGraph:
    """Cycle on ``n >= 2`` vertices, all multiplicity 1.  ``cycle(2)`` is the
    double edge.  The component group is cyclic of order ``n``."""
    if n < 2:
        raise FamilyError("cycle needs at least 2 vertices")
    vertices = [(f"v{i}", 1) for i in range(n)]
    if n == 2:
        edges = {(0, 1): 2}
    else:
        edges = {(i, (i + 1) % n): 1 for i in range(n)}
    return make_graph(vertices, edges)


def kodaira_star(nu: int) -> ArithmeticalGraph:
    """The I_nu^* shape: a chain of ``nu + 1`` vertices of multiplicity 2 with
    two multiplicity-1 leaves at each end."""
    if nu < 0:
        raise FamilyError("kodaira_star needs nu >= 0")
    vertices = [(f"c{i}", 2) for i in range(nu + 1)]
    vertices += [("p1", 1), ("p2", 1), ("q1", 1), ("q2", 1)]
    edges: dict[tuple[int, int], int] = {}
    for i in range(nu):
        edges[(i, i + 1)] = 1
    first, last = 0, nu
    p1, p2, q1, q2 = nu + 1, nu + 2, nu + 3, nu + 4
    edges[(first, p1)] = 1
    edges[(first, p2)] = 1
    edges[(last, q1)] = 1
    edges[(last, q2)] = 1
    return make_graph(vertices, edges)


def euclid_tree(r: int, seeds: list[int]) -> ArithmeticalGraph:
    """A node of multiplicity ``r`` with one terminal chain per seed, each
    chain completed by :func:`~arithgraph.breaking.euclid_chain` from
    ``(r, seed)``.  Requires ``r | sum(seeds)`` and ``1 <= seed <= r``."""
    if r < 1:
        raise FamilyError("node multiplicity must be positive")
    if not seeds:
        raise FamilyError("euclid_tree needs at least one chain seed")
    for s in seeds:
        if not 1 <= s <= r:
            raise FamilyError(f"chain seed {s} not in 1..{r}")
    if sum(seeds) % r != 0:
        raise FamilyError(f"{r} does not divide sum of chain seeds {sum(seeds)}")
    vertices: list[tuple[str, int]] = [("D", r)]
    edges: dict[tuple[int, int], int] = {}
    for k, s in enumerate(seeds, start=1):
        prev = 0
        for i, mult in enumerate(euclid_chain(r, s), start=1):
            idx = len(vertices)
            vertices.append((f"c{k}_{i}", mult))
            edges[(prev, idx)] = 1
            prev = idx
    return make_graph(vertices, edges)


def lorenzini76(ell: int, a: int, b: int) -> ArithmeticalGraph:
    """Two-node family with node multiplicities ``ell^a`` and ``ell^(a+b)``.

    Shape: node R of multiplicity ``ell^a`` with two terminal chains seeded by
    ``1`` and ``ell^a - 1`` (terminal vertices A and B), a connecting vertex
    of multiplicity ``ell^a + ell^(a+b)``, and node S of multiplicity
    ``ell^(a+b)`` with two terminal chains seeded by ``1`` and
    ``ell^(a+b) - ell^a - 1`` (terminal vertices C and D).  Every terminal
    chain has first multiplicity prime to ``ell``, and the connecting chain
    multiplicities are divisible by ``ell^a``, so the ell-part of the
    component group is cyclic of order ``ell^(2a+b)``.
    """
    graph, _ = lorenzini76_labeled(ell, a, b)
    return graph


def lorenzini76_labeled(ell: int, a: int, b: int) -> tuple[ArithmeticalGraph, dict[str, str]]:
    """As :func:`lorenzini76`, also returning the vertex labels used by the
    family audit: terminals A, B (at node R) and C, D (at node S)."""
    if ell < 2 or a < 1 or b < 1:
        raise FamilyError("lorenzini76 needs a prime ell and a, b >= 1")
    r = ell ** a
    s = ell ** (a + b)
    t = r + s
    vertices: list[tuple[str, int]] = [("R", r), ("S", s), ("t1", t)]
    edges: dict[tuple[int, int], int] = {(0, 2): 1, (1, 2): 1}

    def attach(node_idx: int, seed: int, terminal_name: str, prefix: str) -> None:
        chain = euclid_chain(vertices[node_idx][1], seed)
        prev = node_idx
        for i, mult in enumerate(chain, start=1):
            name = terminal_name if i == len(chain) else f"{prefix}{i}"
            idx = len(vertices)
            vertices.append((name, mult))
            edges[(prev, idx)] = 1
            prev = idx

    attach(0, 1, "A", "a")
    attach(0, r - 1, "B", "b")
    attach(1, 1, "C", "c")
    attach(1, s - r - 1, "D", "d")
    labels = {"A": "A", "B": "B", "C": "C", "D": "D", "node_r": "R", "node_s": "S"}
    return make_graph(vertices, edges), labels


def random_reduced(n: int, density: float, seed: int) -> ArithmeticalGraph:
    """Random connected multigraph with all multiplicities 1.

    A random spanning tree guarantees connectivity; ``density`` controls how
    many extra edges are sampled (with replacement, so multi-edges occur).
    Deterministic for a fixed seed.
    """
    if n < 1:
        raise FamilyError("random_reduced needs n >= 1")
    if density < 0:
        raise FamilyError("density must be nonnegative")
    rng = random.Random(seed)
    vertices = [(f"v{i}", 1) for i in range(n)]
    edges: dict[tuple[int, int], int] = {}
    for i in range(1, n):
        p = rng.randrange(i)
        edges[(p, i)] = edges.get((p, i), 0) + 1
    extra = round(density * n * (n - 1) / 2)
    for _ in range(extra):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        key = (i, j) if i < j else (j, i)
        edges[key] = edges.get(key, 0) + 1
    return make_graph(vertices, edges)


def gen_family(family: str, params: list, seed: int | None = None) -> ArithmeticalGraph:
    """Dispatch a family descriptor: cycle(n), kodaira_star(nu),
    euclid_tree(r, seeds), lorenzini76(ell, a, b), random_reduced(n, density)."""
    if family == "cycle":
        (n,) = params
        return cycle(int(n))
    if family == "kodaira_star":
        (nu,) = params
        return kodaira_star(int(nu))
    if family == "euclid_tree":
        r, seeds = params[0], params[1]
        if isinstance(seeds, str):
            seeds = [int(x) for x in seeds.split(",")]
        return euclid_tree(int(r), [int(x) for x in seeds])
    if family == "lorenzini76":
        ell, a, b = params
        return lorenzini76(int(ell), int(a), int(b))
    if family == "random_reduced":
        n, density = params
        return random_reduced(int(n), float(density), 0 if seed is None else seed)
    raise FamilyError(f"unknown family {family!r}")
