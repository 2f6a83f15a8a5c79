"""Exact integer and rational linear algebra.

Smith normal form with recorded unimodular transforms, singular rational
solves, Bareiss determinants, and the cokernel structure used as the oracle
for every structural formula in the package.  No floating point anywhere.

The SNF front-end picks a backend at import time: the compiled 64-bit kernel
(``arithgraph._snfcore``, built from Cython) when it is importable, otherwise
the pure-Python kernel.  The compiled kernel checks every arithmetic step for
overflow and the front-end transparently reruns the pure kernel when it
raises, so results are always exact.  Set ``ARITHGRAPH_PURE_PYTHON=1`` to
force the pure kernel, ``ARITHGRAPH_SNF_VERIFY=1`` to re-verify ``U A V = D``
by multiplication on every call.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _snf_pure

try:  # compiled hot kernel; optional
    from . import _snfcore
except ImportError:  # pragma: no cover - depends on the build
    _snfcore = None

_INT64_SAFE = 1 << 61


class NotTorsionError(ValueError):
    """The class of the given vector has a nonzero free coordinate."""


def backend_name() -> str:
    """Which SNF kernel the front-end will try first."""
    if _snfcore is not None and os.environ.get("ARITHGRAPH_PURE_PYTHON") != "1":
        return "compiled"
    return "pure-python"


class IntegerMatrix:
    """A rectangular matrix of arbitrary-precision integers."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = [list(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
        self.rows = rows

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, IntegerMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"IntegerMatrix({self.num_rows}x{self.num_cols})"


def _rows_of(A) -> list[list[int]]:
    if isinstance(A, IntegerMatrix):
        return A.rows
    return [list(r) for r in A]


@dataclass(frozen=True)
class SnfDecomposition:
    """U A V = D with U, V unimodular and D diagonal with a divisibility chain.

    ``u_inv`` is the inverse of ``u``, maintained during the reduction; it is
    what pulls invariant-factor basis vectors back to the original lattice.
    """

    diag: tuple[int, ...]
    u: tuple[tuple[int, ...], ...]
    u_inv: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]
    shape: tuple[int, int]

    def d_rows(self) -> list[list[int]]:
        m, n = self.shape
        rows = [[0] * n for _ in range(m)]
        for k, d in enumerate(self.diag):
            rows[k][k] = d
        return rows

    def verify(self, rows: Sequence[Sequence[int]]) -> bool:
        ua = _snf_pure.matmul([list(r) for r in self.u], _rows_of(rows))
        uav = _snf_pure.matmul(ua, [list(r) for r in self.v])
        return uav == self.d_rows()


def smith_normal_form(A, verify: bool | None = None, backend: str | None = None) -> SnfDecomposition:
    """Smith normal form with deterministic pivoting (smallest absolute value,
    ties broken by row then column).

    ``backend`` forces ``"pure"`` or ``"compiled"``; by default the compiled
    kernel is used when available and the entries fit comfortably in 64 bits,
    with an automatic rerun in pure Python on overflow.
    """
    rows = _rows_of(A)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if verify is None:
        verify = os.environ.get("ARITHGRAPH_SNF_VERIFY") == "1"

    use_compiled = (
        _snfcore is not None
        and os.environ.get("ARITHGRAPH_PURE_PYTHON") != "1"
        and backend != "pure"
        and m > 0
        and n > 0
        and all(-_INT64_SAFE < x < _INT64_SAFE for row in rows for x in row)
    )
    if backend == "compiled" and _snfcore is None:
        raise RuntimeError("compiled SNF kernel is not available")

    result = None
    if use_compiled:
        try:
            result = _snfcore.snf_int64(rows, m, n)
        except OverflowError:
            result = None
    if result is None:
        result = _snf_pure.snf_kernel(rows, m, n)
    diag, U, Uinv, V = result
    dec = SnfDecomposition(
        diag=tuple(diag),
        u=tuple(tuple(r) for r in U),
        u_inv=tuple(tuple(r) for r in Uinv),
        v=tuple(tuple(r) for r in V),
        shape=(m, n),
    )
    if verify and not dec.verify(rows):  # pragma: no cover - internal check
        raise AssertionError("SNF verification failed: U A V != D")
    return dec


class AbelianGroupStructure:
    """The cokernel ``Z^m / Im(A)`` as invariant factors plus a coordinate map.

    ``invariant_factors`` lists the factors greater than 1 in divisibility
    order; ``free_rank`` counts the Z summands.  ``coordinates`` maps an
    integer vector to its residue tuple and raises :class:`NotTorsionError`
    when a free coordinate is nonzero.
    """

    __slots__ = ("snf", "invariant_factors", "free_rank",
                 "_torsion_rows", "_free_rows")

    def __init__(self, snf: SnfDecomposition):
        m, n = snf.shape
        self.snf = snf
        torsion = []
        free = []
        for i in range(m):
            d = snf.diag[i] if i < len(snf.diag) else 0
            if d == 0:
                free.append(i)
            elif d > 1:
                torsion.append((i, d))
        self.invariant_factors = tuple(d for _, d in torsion)
        self.free_rank = len(free)
        self._torsion_rows = tuple(torsion)
        self._free_rows = tuple(free)

    @property
    def torsion_order(self) -> int:
        return math.prod(self.invariant_factors)

    def _row_dot(self, i: int, t: Sequence[int]) -> int:
        row = self.snf.u[i]
        return sum(row[k] * tk for k, tk in enumerate(t) if tk)

    def _check_torsion(self, t: Sequence[int]) -> None:
        for i in self._free_rows:
            if self._row_dot(i, t):
                raise NotTorsionError(
                    f"class is not torsion (free coordinate {i} is nonzero)")

    def coordinates(self, t: Sequence[int]) -> tuple[int, ...]:
        """Residues of the class of ``t`` against the invariant factors > 1."""
        self._check_torsion(t)
        return tuple(self._row_dot(i, t) % d for i, d in self._torsion_rows)

    def order_of(self, t: Sequence[int]) -> int:
        """Minimal ``d > 0`` with ``d t`` in the image of A."""
        self._check_torsion(t)
        order = 1
        for i, d in self._torsion_rows:
            y = self._row_dot(i, t) % d
            order = math.lcm(order, d // math.gcd(d, y))
        return order

    def is_divisible(self, t: Sequence[int], ell: int) -> bool:
        """Whether some torsion class ``x`` satisfies ``ell x = class(t)``."""
        self._check_torsion(t)
        for i, d in self._torsion_rows:
            if d % ell == 0 and self._row_dot(i, t) % ell != 0:
                return False
        return True

    def same_class(self, t1: Sequence[int], t2: Sequence[int]) -> bool:
        return self.coordinates(t1) == self.coordinates(t2)

    def basis_vectors(self) -> list[tuple[int, list[int]]]:
        """Pullbacks of the invariant-factor generators: pairs ``(d, vector)``
        where the class of the vector has order exactly ``d`` and together
        they generate the torsion subgroup independently."""
        out = []
        for i, d in self._torsion_rows:
            vec = [self.snf.u_inv[r][i] for r in range(self.snf.shape[0])]
            out.append((d, vec))
        return out

    def describe(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " x ".join(parts) if parts else "trivial"


def cokernel_structure(A) -> AbelianGroupStructure:
    return AbelianGroupStructure(smith_normal_form(A))


def cokernel_order_of(A, t: Sequence[int]) -> int:
    """Order of the class of ``t`` in the torsion of ``Z^m / Im(A)``."""
    return cokernel_structure(A).order_of(t)


def is_divisible_by(A, t: Sequence[int], ell: int) -> bool:
    """Whether the torsion class of ``t`` is divisible by the prime ``ell``."""
    return cokernel_structure(A).is_divisible(t, ell)


def solve_rational_singular(A, b: Sequence[int]):
    """Some rational solution ``x`` of ``A x = b``, or None if none exists.

    Straight Gaussian elimination over exact fractions; free variables are
    set to zero.  This is the trivially-trustworthy solver; the SNF-based
    solver in :func:`snf_solve` must agree with it wherever both apply.
    """
    rows = _rows_of(A)
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if len(b) != m:
        raise ValueError("dimension mismatch")
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(rows, b)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c] / pv
                rowi, rowr = aug[i], aug[r]
                for j in range(c, n + 1):
                    rowi[j] -= f * rowr[j]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for pr, pc in pivots:
        x[pc] = aug[pr][n] / aug[pr][pc]
    return x


def snf_solve(snf: SnfDecomposition, t: Sequence[int]):
    """Rational solution of ``A x = t`` from a precomputed SNF of A, or None.

    With ``U A V = D``: ``x = V D^+ U t`` works exactly when the coordinates
    of ``U t`` vanish against the zero diagonal entries.
    """
    m, n = snf.shape
    y = []
    for i in range(m):
        yi = sum(snf.u[i][k] * tk for k, tk in enumerate(t) if tk)
        y.append(yi)
    scaled = []
    for j in range(n):
        d = snf.diag[j] if j < len(snf.diag) else 0
        if d == 0:
            if j < m and y[j] != 0:
                return None
            scaled.append(Fraction(0))
        else:
            scaled.append(Fraction(y[j], d))
    for i in range(n, m):
        if y[i] != 0:
            return None
    return [sum(Fraction(snf.v[r][j]) * scaled[j] for j in range(n) if scaled[j])
            for r in range(n)]


def determinant(A) -> int:
    """Exact determinant by the Bareiss fraction-free algorithm."""
    rows = [list(r) for r in _rows_of(A)]
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if rows[i][k]), None)
            if pr is None:
                return 0
            rows[k], rows[pr] = rows[pr], rows[k]
            sign = -sign
        pkk = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            rowi, rowk = rows[i], rows[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * pkk - rik * rowk[j]) // prev
            rowi[k] = 0
        prev = pkk
    return sign * rows[n - 1][n - 1]
