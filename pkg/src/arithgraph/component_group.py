"""The component group of an arithmetical graph and its pairing.

Phi(G) = Ker(tR)/Im(M) is the torsion of the cokernel of the intersection
matrix; the Smith normal form of M is the oracle for everything here.  The
pairing sends two classes tau, tau' to (tS/n) M (S'/n') mod Z where
M S = n T; it is computed from the SNF transforms as tS0 T' with M S0 = T
solved over the rationals, which is the same bilinear form without the
arbitrary choice of n.  The closed form for weakly connected pairs telescopes
unit fractions along the bridge path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .breaking import weak_path
from .graph import ArithmeticalGraph, PreconditionError, VertexRef


class TrivialPairError(ValueError):
    """Raised by pair_element on identical vertices; the class is zero."""


@dataclass(frozen=True)
class RationalModZ:
    """A residue in Q/Z, stored reduced with 0 <= numerator < denominator."""

    numerator: int
    denominator: int

    @classmethod
    def from_fraction(cls, q: Fraction) -> "RationalModZ":
        q = q % 1
        return cls(q.numerator, q.denominator)

    @property
    def order(self) -> int:
        """Order of the residue in Q/Z (1 for the zero class)."""
        return self.denominator

    def ell_order(self, ell: int) -> int:
        """Order of the ell-part of the residue in Q_ell/Z_ell."""
        d = self.denominator
        out = 1
        while d % ell == 0:
            d //= ell
            out *= ell
        return out

    def is_zero(self) -> bool:
        return self.numerator == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __str__(self):
        return "0" if self.numerator == 0 else f"{self.numerator}/{self.denominator}"


class GroupElement:
    """An element of Ker(tR) regarded modulo Im(M).

    Carries an explicit representative vector; equality compares classes via
    the SNF coordinate map, never the vectors themselves.
    """

    __slots__ = ("graph", "vector")
    __hash__ = None

    def __init__(self, graph: ArithmeticalGraph, vector: Sequence[int]):
        vector = tuple(int(x) for x in vector)
        if len(vector) != graph.num_vertices:
            raise ValueError("representative has the wrong length")
        if sum(r * t for r, t in zip(graph.multiplicities, vector)):
            raise ValueError("representative is not in Ker(tR)")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "vector", vector)

    def __setattr__(self, *_):
        raise AttributeError("GroupElement is immutable")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._same_graph(other)
        return GroupElement(self.graph,
                            [a + b for a, b in zip(self.vector, other.vector)])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._same_graph(other)
        return GroupElement(self.graph,
                            [a - b for a, b in zip(self.vector, other.vector)])

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.graph, [-a for a in self.vector])

    def __rmul__(self, k: int) -> "GroupElement":
        return GroupElement(self.graph, [k * a for a in self.vector])

    def __eq__(self, other):
        if not isinstance(other, GroupElement) or other.graph is not self.graph:
            return NotImplemented
        return phi_structure(self.graph).same_class(self.vector, other.vector)

    def is_zero(self) -> bool:
        return element_order(self.graph, self) == 1

    def __repr__(self):
        return f"GroupElement({list(self.vector)})"

    def _same_graph(self, other):
        if other.graph is not self.graph:
            raise ValueError("elements live on different graphs")


class PhiStructure:
    """Invariant-factor presentation of Phi(G) with its coordinate map."""

    __slots__ = ("graph", "cokernel", "snf")

    def __init__(self, graph: ArithmeticalGraph):
        snf = linalg.smith_normal_form(graph.matrix_rows())
        cok = linalg.AbelianGroupStructure(snf)
        if cok.free_rank != 1:  # pragma: no cover - forced by the axioms
            raise AssertionError("cokernel of M must have free rank exactly 1")
        self.graph = graph
        self.cokernel = cok
        self.snf = snf

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.cokernel.invariant_factors

    @property
    def order(self) -> int:
        return self.cokernel.torsion_order

    def describe(self) -> str:
        factors = self.invariant_factors
        return " x ".join(f"Z/{d}" for d in factors) if factors else "trivial"

    def coordinates(self, vector: Sequence[int]) -> tuple[int, ...]:
        return self.cokernel.coordinates(vector)

    def order_of(self, vector: Sequence[int]) -> int:
        return self.cokernel.order_of(vector)

    def is_divisible(self, vector: Sequence[int], ell: int) -> bool:
        return self.cokernel.is_divisible(vector, ell)

    def same_class(self, v1: Sequence[int], v2: Sequence[int]) -> bool:
        return self.cokernel.same_class(v1, v2)

    def basis_elements(self) -> list[tuple[int, GroupElement]]:
        """Independent generators of Phi(G) with their exact orders."""
        return [(d, GroupElement(self.graph, vec))
                for d, vec in self.cokernel.basis_vectors()]


def phi_structure(graph: ArithmeticalGraph) -> PhiStructure:
    """The (cached) invariant-factor structure of Phi(G)."""
    return graph._memo("phi_structure", lambda: PhiStructure(graph))


def zero_element(graph: ArithmeticalGraph) -> GroupElement:
    return GroupElement(graph, [0] * graph.num_vertices)


def pair_element(graph: ArithmeticalGraph, c: VertexRef, c2: VertexRef) -> GroupElement:
    """The canonical class of a vertex pair: r'/gcd(r, r') at C and
    -r/gcd(r, r') at C'.  Identical vertices raise TrivialPairError (the
    class is zero)."""
    i = graph.resolve(c)
    j = graph.resolve(c2)
    if i == j:
        raise TrivialPairError(f"pair ({graph.names[i]}, {graph.names[j]}) is trivial")
    r = graph.multiplicities
    g = math.gcd(r[i], r[j])
    vec = [0] * graph.num_vertices
    vec[i] = r[j] // g
    vec[j] = -r[i] // g
    return GroupElement(graph, vec)


def element_order(graph: ArithmeticalGraph, tau: GroupElement) -> int:
    return phi_structure(graph).order_of(tau.vector)


def ell_part(graph: ArithmeticalGraph, tau: GroupElement, ell: int) -> GroupElement:
    """Projection of tau to its ell-Sylow component, as a class.

    With m the order of tau: the multiplier is a * m/ell^ord_ell(m) where a
    inverts m/ell^ord_ell(m) modulo ell^ord_ell(m); different choices of a
    give the same class.
    """
    m = element_order(graph, tau)
    if m % ell != 0:
        return zero_element(graph)
    q = 1
    while m % ell == 0:
        m //= ell
        q *= ell
    # here m is the prime-to-ell part, q the ell-part of the order
    a = pow(m, -1, q)
    return (a * m) * tau


def pairing(graph: ArithmeticalGraph, tau: GroupElement, tau2: GroupElement) -> RationalModZ:
    """The Q/Z pairing <tau, tau'>: solve M S0 = T over the rationals and
    return tS0 T' mod Z.

    The solution is read off the cached SNF of M; the elimination-based
    solver in :func:`arithgraph.linalg.solve_rational_singular` gives the
    same values and the tests keep both routes in agreement.
    """
    phi = phi_structure(graph)
    value = _pairing_value(phi, tau.vector, tau2.vector)
    return RationalModZ.from_fraction(value)


def _pairing_value(phi: PhiStructure, t: Sequence[int], t2: Sequence[int]) -> Fraction:
    snf = phi.snf
    m, n = snf.shape
    support = [r for r, x in enumerate(t2) if x]
    if not support:
        return Fraction(0)
    y = []
    for j in range(m):
        row = snf.u[j]
        y.append(sum(row[k] * tk for k, tk in enumerate(t) if tk))
    scaled = []
    for j in range(n):
        d = snf.diag[j] if j < len(snf.diag) else 0
        if d == 0:
            if y[j] != 0:  # pragma: no cover - impossible for Ker(tR) vectors
                raise AssertionError("no rational solution for a torsion class")
            scaled.append(None)
        else:
            scaled.append(Fraction(y[j], d))
    total = Fraction(0)
    for r in support:
        s0 = sum(snf.v[r][j] * scaled[j] for j in range(n)
                 if scaled[j] is not None and snf.v[r][j])
        total += s0 * t2[r]
    return total


def pairing_closed_form(graph: ArithmeticalGraph,
                        pair_cc: tuple[VertexRef, VertexRef],
                        pair_dd: tuple[VertexRef, VertexRef]) -> RationalModZ:
    """Telescoping closed form of the pairing for a weakly connected first
    pair: lcm(r, r') lcm(s, s') times the sum of 1/(r_k r_{k+1}) between the
    path vertices closest to D and to D'.

    Closest vertices are unique because every path edge is a bridge; the
    value is 0 whenever both projections coincide.
    """
    c, c2 = (graph.resolve(x) for x in pair_cc)
    d, d2 = (graph.resolve(x) for x in pair_dd)
    if d == d2:
        raise TrivialPairError("second pair is trivial")
    path = weak_path(graph, c, c2)
    if path is None:
        raise PreconditionError("(C, C') is not weakly connected", "Prop 3.2")
    return RationalModZ.from_fraction(_closed_form_value(graph, path, d, d2))


def _closed_form_value(graph: ArithmeticalGraph, path, d: int, d2: int) -> Fraction:
    r = graph.multiplicities
    verts = path.vertices
    prefix = [Fraction(0)]
    for a, b in zip(verts, verts[1:]):
        prefix.append(prefix[-1] + Fraction(1, r[a] * r[b]))
    alpha = _closest_path_index(graph, verts, d)
    beta = _closest_path_index(graph, verts, d2)
    c, c2 = verts[0], verts[-1]
    factor = math.lcm(r[c], r[c2]) * math.lcm(r[d], r[d2])
    return factor * (prefix[beta] - prefix[alpha])


def _closest_path_index(graph: ArithmeticalGraph, verts: tuple[int, ...], d: int) -> int:
    """Index on the path of the unique vertex closest to d in the graph."""
    positions = {v: k for k, v in enumerate(verts)}
    if d in positions:
        return positions[d]
    dist = {d: 0}
    frontier = [d]
    while frontier:
        hits = [u for u in frontier if u in positions]
        if hits:
            assert len(hits) == 1, "closest path vertex must be unique"
            return positions[hits[0]]
        nxt = []
        for u in frontier:
            for w, _ in graph.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    raise AssertionError("graph is connected; unreachable")  # pragma: no cover


def spanning_tree_count(graph: ArithmeticalGraph) -> int:
    """Number of spanning trees (multi-edges counted), by the matrix-tree
    theorem: the determinant of any principal minor of the Laplacian.

    Built from raw edge counts, independent of the SNF machinery, so it can
    serve as a cross-check of |Phi| on reduced graphs.
    """
    n = graph.num_vertices
    if n == 1:
        return 1
    lap = [[0] * n for _ in range(n)]
    for (i, j), c in graph.offdiag.items():
        lap[i][j] -= c
        lap[j][i] -= c
        lap[i][i] += c
        lap[j][j] += c
    minor = [row[1:] for row in lap[1:]]
    return linalg.determinant(minor)


def pairing_annihilator_order(graph: ArithmeticalGraph) -> int:
    """Order of {tau : <tau, sigma> = 0 for all sigma}; 1 means the pairing
    is non-degenerate on Phi(G)."""
    phi = phi_structure(graph)
    basis = phi.basis_elements()
    k = len(basis)
    if k == 0:
        return 1
    orders = [d for d, _ in basis]
    big = orders[-1]
    for d in orders:
        if big % d:  # pragma: no cover - the SNF chain guarantees this
            raise AssertionError("invariant factors out of order")
    rows = []
    for _, tau in basis:
        row = []
        for _, sigma in basis:
            q = _pairing_value(phi, tau.vector, sigma.vector) % 1
            scaled = q * big
            if scaled.denominator != 1:  # pragma: no cover - order divides big
                raise AssertionError("pairing value with unexpected denominator")
            row.append(int(scaled) % big)
        rows.append(row)
    for i in range(k):
        rows.append([big if j == i else 0 for j in range(k)])
    diag = linalg.smith_normal_form(rows).diag
    index = math.prod(diag)
    numerator = math.prod(orders) * index
    denominator = big ** k
    assert numerator % denominator == 0
    return numerator // denominator
