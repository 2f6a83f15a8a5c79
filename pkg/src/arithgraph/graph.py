"""Arithmetical graphs.

An arithmetical graph is a connected multigraph whose vertices carry positive
integer multiplicities ``r_i`` with ``gcd(r_1, ..., r_v) = 1``, together with
the symmetric integer matrix ``M = ((c_ij))`` whose off-diagonal entries are
the edge counts.  The diagonal is never supplied: it is forced by the relation
``M R = 0`` with ``R = (r_1, ..., r_v)``, and inputs where the forced division
fails are rejected.  All arithmetic is exact (Python integers).

This module owns the graph type, its validation, the line-oriented file
format, and the tilde construction.  Test-family generators live in
:mod:`arithgraph.families`.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Mapping, Union


class GraphError(Exception):
    """Base class for everything raised by the graph layer."""


class GraphSyntaxError(GraphError):
    """Malformed graph file.  Carries a 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "")
            loc = f" ({loc})"
        super().__init__(f"{message}{loc}")


class GraphValidationError(GraphError):
    """An axiom of arithmetical graphs fails (the message names which one)."""


class VertexResolutionError(GraphError):
    """A vertex reference does not resolve to a unique vertex."""


class PreconditionError(Exception):
    """A structural operation was called outside its hypotheses.

    Carries the failed hypothesis and the rule it belongs to, so callers
    (and the CLI, via exit code 3) can tell "inapplicable" apart from
    "invalid input".
    """

    def __init__(self, hypothesis: str, rule: str | None = None):
        self.hypothesis = hypothesis
        self.rule = rule
        msg = f"{hypothesis} (hypothesis of {rule})" if rule else hypothesis
        super().__init__(msg)


#: A vertex reference: either a 0-based index or a vertex name.
VertexRef = Union[int, str]

_NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class ArithmeticalGraph:
    """Immutable arithmetical graph.

    Construct through :func:`make_graph` or :func:`parse_graph`; the
    constructor validates every axiom and raises
    :class:`GraphValidationError` otherwise.  Instances are safe to share
    between threads; derived analyses are cached on the instance.
    """

    __slots__ = ("names", "multiplicities", "offdiag", "degrees", "diagonal",
                 "_index", "_neighbors", "_cache")

    def __init__(self, vertices: Iterable[tuple[str, int]],
                 edges: Mapping[tuple[int, int], int]):
        names = []
        mults = []
        index: dict[str, int] = {}
        for name, r in vertices:
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise GraphValidationError(f"invalid vertex name {name!r}")
            if name in index:
                raise GraphValidationError(f"duplicate vertex {name!r}")
            if not isinstance(r, int) or r <= 0:
                raise GraphValidationError(f"multiplicity of {name!r} must be a positive integer")
            index[name] = len(names)
            names.append(name)
            mults.append(r)
        v = len(names)
        if v == 0:
            raise GraphValidationError("graph has no vertices")

        offdiag: dict[tuple[int, int], int] = {}
        for (i, j), c in edges.items():
            if not (0 <= i < v and 0 <= j < v):
                raise GraphValidationError(f"edge endpoint out of range: ({i}, {j})")
            if i == j:
                raise GraphValidationError(f"self-loop at vertex {names[i]!r} not allowed")
            if not isinstance(c, int) or c <= 0:
                raise GraphValidationError(f"edge count for ({names[i]}, {names[j]}) must be positive")
            key = (i, j) if i < j else (j, i)
            offdiag[key] = offdiag.get(key, 0) + c

        neighbors: list[list[tuple[int, int]]] = [[] for _ in range(v)]
        for (i, j), c in offdiag.items():
            neighbors[i].append((j, c))
            neighbors[j].append((i, c))
        for lst in neighbors:
            lst.sort()

        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "multiplicities", tuple(mults))
        object.__setattr__(self, "offdiag", dict(offdiag))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_neighbors", tuple(tuple(lst) for lst in neighbors))
        object.__setattr__(self, "degrees",
                           tuple(sum(c for _, c in lst) for lst in neighbors))
        object.__setattr__(self, "_cache", {})

        # connectivity (edges with c_ij > 0 define adjacency)
        if v > 1:
            seen = [False] * v
            stack = [0]
            seen[0] = True
            count = 1
            while stack:
                u = stack.pop()
                for w, _ in self._neighbors[u]:
                    if not seen[w]:
                        seen[w] = True
                        count += 1
                        stack.append(w)
            if count != v:
                bad = names[seen.index(False)]
                raise GraphValidationError(f"graph not connected (vertex {bad!r} unreachable)")

        # M R = 0 forces the diagonal; r_i must divide the weighted neighbor sum
        diag = []
        for i in range(v):
            s = sum(c * mults[j] for j, c in self._neighbors[i])
            if s % mults[i] != 0:
                raise GraphValidationError(
                    f"MR != 0 at vertex {names[i]!r}: {mults[i]} does not divide {s}")
            diag.append(-(s // mults[i]))
        object.__setattr__(self, "diagonal", tuple(diag))

        g = math.gcd(*mults)
        if g != 1:
            raise GraphValidationError(f"gcd of multiplicities is {g}, expected 1")

    # -- basic accessors -------------------------------------------------

    def __setattr__(self, name, value):
        raise AttributeError("ArithmeticalGraph is immutable")

    @property
    def num_vertices(self) -> int:
        return len(self.names)

    def multiplicity(self, ref: VertexRef) -> int:
        return self.multiplicities[self.resolve(ref)]

    def edge_count(self, i: int, j: int) -> int:
        if i == j:
            return 0
        key = (i, j) if i < j else (j, i)
        return self.offdiag.get(key, 0)

    def neighbors(self, i: int) -> tuple[tuple[int, int], ...]:
        """Sorted ``(neighbor, edge count)`` pairs of vertex ``i``."""
        return self._neighbors[i]

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def is_reduced(self) -> bool:
        return all(r == 1 for r in self.multiplicities)

    def resolve(self, ref: VertexRef) -> int:
        """Resolve a name or 0-based index to a vertex index.

        Names win over numeric interpretation, so a vertex literally named
        ``"3"`` is found by name first.
        """
        if isinstance(ref, int):
            if 0 <= ref < self.num_vertices:
                return ref
            raise VertexResolutionError(f"vertex index {ref} out of range")
        if ref in self._index:
            return self._index[ref]
        if ref.isdigit():
            i = int(ref)
            if 0 <= i < self.num_vertices:
                return i
        raise VertexResolutionError(f"unknown vertex {ref!r}")

    def matrix_rows(self) -> list[list[int]]:
        """The intersection matrix M as a fresh list of rows."""
        v = self.num_vertices
        rows = [[0] * v for _ in range(v)]
        for i in range(v):
            rows[i][i] = self.diagonal[i]
        for (i, j), c in self.offdiag.items():
            rows[i][j] = c
            rows[j][i] = c
        return rows

    def __repr__(self):
        return (f"ArithmeticalGraph({self.num_vertices} vertices, "
                f"{sum(self.offdiag.values())} edges)")

    # cache hook used by the analysis modules
    def _memo(self, key, build):
        cache = self._cache
        if key not in cache:
            cache[key] = build()
        return cache[key]


def make_graph(vertices: Iterable[tuple[str, int]],
               edges: Mapping[tuple[int, int], int]) -> ArithmeticalGraph:
    """Build and validate an arithmetical graph from vertex and edge data."""
    return ArithmeticalGraph(vertices, edges)


def parse_graph(text: str) -> ArithmeticalGraph:
    """Parse the line-oriented graph file format.

    Grammar (UTF-8): ``# comment`` lines, ``vertex <name> <positive-int>``,
    ``edge <name> <name> [<positive-int count, default 1>]``.  Names match
    ``[A-Za-z0-9_]+``.  Vertices must be declared before the edges that use
    them; repeated edge lines sum their counts.
    """
    vertices: list[tuple[str, int]] = []
    index: dict[str, int] = {}
    edges: dict[tuple[int, int], int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        for f in fields:
            if f.startswith("#"):
                raise GraphSyntaxError("unexpected '#' inside a directive",
                                       lineno, raw.index(f) + 1)
        kind = fields[0]
        if kind == "vertex":
            if len(fields) != 3:
                raise GraphSyntaxError("expected: vertex <name> <positive-int>", lineno, 1)
            name = fields[1]
            if not _NAME_RE.match(name):
                raise GraphSyntaxError(f"invalid vertex name {name!r}", lineno,
                                       raw.index(name) + 1)
            if name in index:
                raise GraphSyntaxError(f"duplicate vertex {name!r}", lineno, 1)
            try:
                r = int(fields[2])
            except ValueError:
                raise GraphSyntaxError(f"multiplicity {fields[2]!r} is not an integer",
                                       lineno, raw.index(fields[2]) + 1) from None
            if r <= 0:
                raise GraphSyntaxError("multiplicity must be positive", lineno, 1)
            index[name] = len(vertices)
            vertices.append((name, r))
        elif kind == "edge":
            if len(fields) not in (3, 4):
                raise GraphSyntaxError("expected: edge <name> <name> [<count>]", lineno, 1)
            a, b = fields[1], fields[2]
            for endpoint in (a, b):
                if endpoint not in index:
                    raise GraphSyntaxError(f"unknown endpoint {endpoint!r}", lineno,
                                           raw.index(endpoint) + 1)
            if a == b:
                raise GraphSyntaxError(f"self-loop at {a!r} not allowed", lineno, 1)
            count = 1
            if len(fields) == 4:
                try:
                    count = int(fields[3])
                except ValueError:
                    raise GraphSyntaxError(f"edge count {fields[3]!r} is not an integer",
                                           lineno, raw.index(fields[3]) + 1) from None
                if count <= 0:
                    raise GraphSyntaxError("edge count must be positive", lineno, 1)
            i, j = index[a], index[b]
            key = (i, j) if i < j else (j, i)
            edges[key] = edges.get(key, 0) + count
        else:
            raise GraphSyntaxError(f"unknown directive {kind!r}", lineno, 1)

    if not vertices:
        raise GraphSyntaxError("file declares no vertices")
    return make_graph(vertices, edges)


def serialize_graph(graph: ArithmeticalGraph) -> str:
    """Serialize to the file format: vertices in stored order, then edges in
    lexicographic order with explicit counts.  ``parse_graph`` round-trips."""
    lines = [f"vertex {name} {r}" for name, r in zip(graph.names, graph.multiplicities)]
    edge_lines = []
    for (i, j), c in graph.offdiag.items():
        a, b = sorted((graph.names[i], graph.names[j]))
        edge_lines.append((a, b, c))
    for a, b, c in sorted(edge_lines):
        lines.append(f"edge {a} {b} {c}")
    return "\n".join(lines) + "\n"


def tilde_graph(graph: ArithmeticalGraph) -> ArithmeticalGraph:
    """The reduced companion graph: every multiplicity becomes 1 and the edge
    count of ``(i, j)`` becomes ``r_i * r_j * c_ij`` (the matrix R~ M R~).

    The torsion cokernel orders satisfy
    ``|Phi(tilde G)| = (r_1 ... r_v)^2 |Phi(G)|``.
    """
    r = graph.multiplicities
    vertices = [(name, 1) for name in graph.names]
    edges = {key: r[key[0]] * r[key[1]] * c for key, c in graph.offdiag.items()}
    return make_graph(vertices, edges)
