"""Exact divisor-indexed matrices: the order matrix, its inverse, B_N and C_N.

Rows and columns are indexed by :func:`~etaforge.numtheory.divisor_basis`.
Every level-N matrix here is a Kronecker product of prime-power blocks; the
blocks are taken over descending primes so that the smallest prime is the
fastest-varying index, matching the divisor order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .lattice import bareiss_determinant, matmul
from .numtheory import (
    DivisorBasis,
    IntLike,
    divisor_basis,
    factorize,
    is_prime,
    phi,
    rad,
)


@dataclass(frozen=True)
class _DivisorMatrix:
    basis: DivisorBasis
    entries: tuple[tuple, ...]

    def __post_init__(self):
        n = len(self.basis)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValueError("matrix shape does not match its divisor basis")

    @property
    def level(self) -> int:
        return self.basis.modulus.value

    @property
    def size(self) -> int:
        return len(self.basis)

    def __getitem__(self, key: tuple[int, int]):
        t, d = key
        return self.entries[self.basis.position(t)][self.basis.position(d)]

    def column(self, t: int) -> tuple:
        j = self.basis.position(t)
        return tuple(row[j] for row in self.entries)

    def rows(self) -> list[list]:
        return [list(r) for r in self.entries]

    def to_json(self) -> str:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x) if x.denominator != 1 else int(x)
            return int(x)

        return json.dumps(
            {
                "level": self.level,
                "basis": list(self.basis.divisors),
                "rows": [[enc(x) for x in row] for row in self.entries],
            }
        )

    def pretty(self) -> str:
        labels = [str(d) for d in self.basis]
        cells = [[str(x) for x in row] for row in self.entries]
        width = max(len(c) for c in labels + [x for row in cells for x in row])
        lw = max(len(s) for s in labels)
        head = " " * (lw + 3) + " ".join(s.rjust(width) for s in labels)
        lines = [head]
        for lab, row in zip(labels, cells):
            lines.append(f"{lab.rjust(lw)} | " + " ".join(x.rjust(width) for x in row))
        return "\n".join(lines)


class IntegerMatrix(_DivisorMatrix):
    """Square integer matrix indexed by a divisor basis."""

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


class RationalMatrix(_DivisorMatrix):
    """Square matrix of reduced fractions indexed by a divisor basis."""

    def common_denominator(self) -> int:
        return math.lcm(*(x.denominator for row in self.entries for x in row))

    def scaled(self) -> tuple[list[list[int]], int]:
        """Integer numerators over the common denominator."""
        den = self.common_denominator()
        return [[int(x * den) for x in row] for row in self.entries], den


def kron(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def _kron_all(blocks: list[list[list]]) -> list[list]:
    out: list[list] = [[1]]
    for blk in reversed(blocks):  # largest prime is the outermost factor
        out = kron(out, blk)
    return out


def _check_prime_power(p: int, n: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError(f"exponent must be positive, got {n}")


def _cusp_order_entry(N: int, t: int, d: int) -> int:
    num = N * math.gcd(d, t) ** 2
    den = d * math.gcd(t * t, N)
    assert num % den == 0
    return num // den


def order_matrix_direct(N: IntLike) -> IntegerMatrix:
    """A_N built entrywise from the cusp-order formula (the cross-check path)."""
    basis = divisor_basis(N)
    Nv = basis.modulus.value
    return IntegerMatrix(
        basis, tuple(tuple(_cusp_order_entry(Nv, t, d) for d in basis) for t in basis)
    )


@lru_cache(maxsize=None)
def _order_block(p: int, n: int) -> tuple[tuple[int, ...], ...]:
    N = p**n
    return tuple(
        tuple(_cusp_order_entry(N, p**i, p**j) for j in range(n + 1)) for i in range(n + 1)
    )


def order_matrix_prime_power(p: int, n: int) -> IntegerMatrix:
    _check_prime_power(p, n)
    return IntegerMatrix(divisor_basis(p**n), _order_block(p, n))


@lru_cache(maxsize=256)
def _order_matrix(N: int) -> IntegerMatrix:
    fN = factorize(N)
    blocks = [[list(r) for r in _order_block(p, n)] for p, n in fN.factors]
    return IntegerMatrix(divisor_basis(fN), tuple(map(tuple, _kron_all(blocks))))


def order_matrix(N: IntLike) -> IntegerMatrix:
    """24 times the order of eta_d at the cusp 1/t, as entry (t, d)."""
    return _order_matrix(int(factorize(N)))


def _inverse_block(p: int, n: int) -> list[list[Fraction]]:
    """Tridiagonal closed form of the prime-power inverse."""
    scale = Fraction(1, p ** (n - 1) * (p * p - 1))
    out = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        for i in range(n + 1):
            if i == j and j in (0, n):
                v = p
            elif abs(i - j) == 1:
                v = -(p ** min(j, n - j))
            elif i == j:
                v = p ** min(j - 1, n - j - 1) * (p * p + 1)
            else:
                continue
            out[i][j] = v * scale
    return out


@lru_cache(maxsize=256)
def _order_matrix_inverse(N: int) -> RationalMatrix:
    fN = factorize(N)
    blocks = [_inverse_block(p, n) for p, n in fN.factors]
    inv = RationalMatrix(divisor_basis(fN), tuple(map(tuple, _kron_all(blocks))))
    prod = matmul(_order_matrix(N).entries, inv.entries)
    if any(prod[i][j] != (i == j) for i in range(len(prod)) for j in range(len(prod))):
        raise AssertionError(f"closed-form inverse failed the product check at N={N}")
    return inv


def order_matrix_inverse(N: IntLike) -> RationalMatrix:
    return _order_matrix_inverse(int(factorize(N)))


def denominator_clearer(N: IntLike, t: int) -> int:
    """Smallest m > 0 making m times column t of the inverse integral."""
    inv = order_matrix_inverse(N)
    return math.lcm(*(x.denominator for x in inv.column(t)))


@lru_cache(maxsize=256)
def _denominators(N: int) -> tuple[int, ...]:
    inv = order_matrix_inverse(N)
    return tuple(denominator_clearer(N, t) for t in inv.basis)


def denominators(N: IntLike) -> tuple[int, ...]:
    """All m_{t,N} in basis order."""
    return _denominators(int(factorize(N)))


@lru_cache(maxsize=256)
def _b_matrix(N: int) -> IntegerMatrix:
    inv = order_matrix_inverse(N)
    ms = _denominators(N)
    rows = tuple(
        tuple(int(x * m) for x, m in zip(row, ms)) for row in inv.entries
    )
    return IntegerMatrix(inv.basis, rows)


def b_matrix(N: IntLike) -> IntegerMatrix:
    """Columns are the exponent vectors of the eta quotients vanishing at one cusp class."""
    return _b_matrix(int(factorize(N)))


def b_inverse_prime_power(p: int, n: int) -> RationalMatrix:
    _check_prime_power(p, n)
    scale = Fraction(1, p ** (n - 1) * (p * p - 1))
    rows = []
    for i in range(n + 1):
        if i == 0:
            row = [p ** (n - j) for j in range(n + 1)]
        elif i == n:
            row = [p**j for j in range(n + 1)]
        else:
            row = [p ** (n - 1 - abs(i - j)) for j in range(n + 1)]
        rows.append(tuple(x * scale for x in row))
    return RationalMatrix(divisor_basis(p**n), tuple(rows))


def b_inverse(N: IntLike) -> RationalMatrix:
    fN = factorize(N)
    blocks = [[list(r) for r in b_inverse_prime_power(p, n).entries] for p, n in fN.factors]
    return RationalMatrix(divisor_basis(fN), tuple(map(tuple, _kron_all(blocks))))


def determinant(m: IntegerMatrix | Sequence[Sequence[int]]) -> int:
    entries = m.entries if isinstance(m, _DivisorMatrix) else m
    return bareiss_determinant(entries)


def b_determinant_kronecker(N: IntLike) -> int:
    """det(B_N) from the prime-power blocks via det(A (x) B) = det(A)^n det(B)^m."""
    fN = factorize(N)
    dN = len(divisor_basis(fN))
    out = 1
    for p, n in fN.factors:
        blk = b_matrix(p**n)
        out *= determinant(blk) ** (dN // (n + 1))
    return out


def c_matrix(N: IntLike) -> IntegerMatrix:
    fN = factorize(N)
    if fN.value < 2:
        raise ValueError("c_matrix needs N >= 2")
    blocks = []
    for p, n in fN.factors:
        diag = [p - 1] + [p * p - 1] * (n - 1) + [p - 1]
        blocks.append([[diag[i] if i == j else 0 for j in range(n + 1)] for i in range(n + 1)])
    return IntegerMatrix(divisor_basis(fN), tuple(map(tuple, _kron_all(blocks))))


def column_sum_formula(N: IntLike, t: int) -> int:
    """phi(rad(N)) * phi(rad(gcd(t, N/t)))."""
    Nv = int(factorize(N))
    return phi(rad(Nv)) * phi(rad(math.gcd(t, Nv // t)))


def rational_matmul(a: _DivisorMatrix, b: _DivisorMatrix) -> list[list]:
    return matmul(a.entries, b.entries)


def is_identity(m: Sequence[Sequence]) -> bool:
    return all(m[i][j] == (i == j) for i in range(len(m)) for j in range(len(m)))
