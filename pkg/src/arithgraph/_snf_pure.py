"""Pure-Python Smith normal form kernel over arbitrary-precision integers.

Same pivot rule as the compiled kernel in ``_snfcore.pyx`` (smallest absolute
value, ties broken by row then column), so both backends produce identical
transforms.  This one never overflows and is the fallback the front-end uses
when the compiled kernel is unavailable or its 64-bit arithmetic would
overflow.
"""

from __future__ import annotations


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def snf_kernel(rows: list[list[int]], m: int, n: int):
    """Diagonalize a copy of ``rows`` returning ``(diag, U, Uinv, V)`` with
    ``U A V = diag(...)``, ``U Uinv = I``, divisibility chain along the
    diagonal and nonnegative diagonal entries."""
    A = [list(row) for row in rows]
    U = identity(m)
    Uinv = identity(m)
    V = identity(n)

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]
        for r in range(m):
            Uinv[r][i], Uinv[r][k] = Uinv[r][k], Uinv[r][i]

    def swap_cols(j, k):
        for r in range(m):
            A[r][j], A[r][k] = A[r][k], A[r][j]
        for r in range(n):
            V[r][j], V[r][k] = V[r][k], V[r][j]

    def addmul_row(i, k, q):
        # row_i -= q * row_k
        Ai, Ak = A[i], A[k]
        for j in range(n):
            Ai[j] -= q * Ak[j]
        Ui, Uk = U[i], U[k]
        for j in range(m):
            Ui[j] -= q * Uk[j]
        for r in range(m):
            Uinv[r][k] += q * Uinv[r][i]

    def addmul_col(j, k, q):
        # col_j -= q * col_k
        for r in range(m):
            A[r][j] -= q * A[r][k]
        for r in range(n):
            V[r][j] -= q * V[r][k]

    def negate_row(k):
        A[k] = [-x for x in A[k]]
        U[k] = [-x for x in U[k]]
        for r in range(m):
            Uinv[r][k] = -Uinv[r][k]

    size = min(m, n)
    t = 0
    while t < size:
        # smallest-absolute-value pivot, ties broken by row then column
        piv = None
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                a = row[j]
                if a:
                    a = -a if a < 0 else a
                    if best is None or a < best:
                        best = a
                        piv = (i, j)
                        if a == 1:
                            break
            if best == 1:
                break
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            swap_rows(pi, t)
        if pj != t:
            swap_cols(pj, t)

        p = A[t][t]
        dirty = False
        for i in range(t + 1, m):
            a = A[i][t]
            if a:
                q = a // p
                if q:
                    addmul_row(i, t, q)
                if A[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            a = A[t][j]
            if a:
                q = a // p
                if q:
                    addmul_col(j, t, q)
                if A[t][j]:
                    dirty = True
        if dirty:
            continue

        # the pivot must divide the remaining block for the invariant-factor chain
        p = A[t][t]
        culprit = None
        for i in range(t + 1, m):
            row = A[i]
            for j in range(t + 1, n):
                if row[j] % p:
                    culprit = i
                    break
            if culprit is not None:
                break
        if culprit is not None:
            addmul_row(t, culprit, -1)
            continue
        t += 1

    for k in range(size):
        if A[k][k] < 0:
            negate_row(k)
    diag = [A[k][k] for k in range(size)]
    return diag, U, Uinv, V


def matmul(A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    rows = len(A)
    inner = len(B)
    cols = len(B[0]) if inner else 0
    Bt = list(zip(*B)) if inner else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]
