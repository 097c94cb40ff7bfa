"""Integer lattice helpers: Smith decomposition and determinants.

Matrices here are plain lists of lists of Python ints so that entries never
overflow.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def bareiss_determinant(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer input."""
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def smith_decomposition(m: Sequence[Sequence[int]]) -> tuple[Matrix, list[int], Matrix]:
    """Return ``(U, diag, V)`` with ``U @ m @ V == diag(diag)``.

    ``U`` and ``V`` are unimodular and each diagonal entry divides the next.
    Only square nonsingular input is needed by this package, but rectangular
    input works too.
    """
    a = [list(map(int, row)) for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    u, v = identity(rows), identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row[dst] += c * row[src]
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for k in range(min(rows, cols)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(k, rows) for j in range(k, cols) if a[i][j]]
            if not nz:
                return u, [a[i][i] for i in range(min(rows, cols))], v
            _, pi, pj = min(nz)
            swap_rows(k, pi)
            swap_cols(k, pj)
            piv = a[k][k]
            dirty = False
            for i in range(k + 1, rows):
                q = a[i][k] // piv
                if q:
                    add_row(k, i, -q)
                dirty |= a[i][k] != 0
            for j in range(k + 1, cols):
                q = a[k][j] // piv
                if q:
                    add_col(k, j, -q)
                dirty |= a[k][j] != 0
            if dirty:
                continue
            # pivot must divide the whole trailing block
            bad = next(
                (i for i in range(k + 1, rows) for j in range(k + 1, cols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(bad, k, 1)
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            u[k] = [-x for x in u[k]]
    return u, [a[i][i] for i in range(min(rows, cols))], v


def unimodular_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Exact inverse of a unimodular integer matrix (Gauss-Jordan over Q)."""
    from fractions import Fraction

    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    out = [[x for x in row[n:]] for row in aug]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]
