"""Multiplicative arithmetic on factored integers.

Everything downstream reads an integer through its prime factorization, so
the helpers here accept either a plain ``int`` or a :class:`FactoredInt`.
Bound functions return :class:`fractions.Fraction` values: several of them
are non-integral for small levels and are never rounded.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInt:
    """A positive integer together with its prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"FactoredInt needs a positive value, got {self.value}")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly ascending")
        if math.prod(p**e for p, e in self.factors) != self.value:
            raise ValueError("factorization does not multiply out to value")
        for p, e in self.factors:
            if e < 1 or not is_prime(p):
                raise ValueError(f"bad factor {p}^{e}")

    def __int__(self) -> int:
        return self.value

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


IntLike = Union[int, FactoredInt]


@lru_cache(maxsize=4096)
def _factorize(n: int) -> FactoredInt:
    factors = []
    m = n
    for p in itertools.chain((2, 3), itertools.count(5, 2)):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        factors.append((m, 1))
    return FactoredInt(n, tuple(factors))


def factorize(n: IntLike) -> FactoredInt:
    """Factor ``n`` by trial division; primality of every entry is re-checked."""
    if isinstance(n, FactoredInt):
        return n
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError(f"expected an int, got {type(n).__name__}")
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    return _factorize(n)


@dataclass(frozen=True)
class DivisorBasis:
    """The divisors of a modulus in mixed-radix order.

    Divisors are ordered lexicographically by their exponent vectors with the
    largest prime most significant, so the smallest prime varies fastest:
    ``12 -> (1, 2, 4, 3, 6, 12)``.  This is the order produced by Kronecker
    products taken over descending primes.
    """

    modulus: FactoredInt
    divisors: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.divisors)

    def __iter__(self) -> Iterator[int]:
        return iter(self.divisors)

    def __getitem__(self, i: int) -> int:
        return self.divisors[i]

    @property
    def index(self) -> dict[int, int]:
        return _basis_index(self)

    def position(self, d: int) -> int:
        try:
            return self.index[d]
        except KeyError:
            raise ValueError(f"{d} does not divide {self.modulus.value}") from None

    def exponent_vector(self, d: int) -> tuple[int, ...]:
        out = []
        for p, _ in self.modulus.factors:
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            out.append(e)
        return tuple(out)


@lru_cache(maxsize=None)
def _basis_index(basis: DivisorBasis) -> dict[int, int]:
    return {d: i for i, d in enumerate(basis.divisors)}


@lru_cache(maxsize=1024)
def _divisor_basis(N: int) -> DivisorBasis:
    fN = factorize(N)
    divs = [1]
    # appending each prime's powers as the slow index keeps earlier primes fastest
    for p, n in fN.factors:
        divs = [d * p**e for e in range(n + 1) for d in divs]
    return DivisorBasis(fN, tuple(divs))


def divisor_basis(N: IntLike) -> DivisorBasis:
    return _divisor_basis(int(factorize(N)))


def divisors(N: IntLike) -> tuple[int, ...]:
    return divisor_basis(N).divisors


def phi(N: IntLike) -> int:
    fN = factorize(N)
    return math.prod((p - 1) * p ** (e - 1) for p, e in fN.factors)


def rad(N: IntLike) -> int:
    return math.prod(factorize(N).primes)


def num_divisors(N: IntLike) -> int:
    return math.prod(e + 1 for _, e in factorize(N).factors)


def omega_count(N: IntLike) -> int:
    return len(factorize(N).factors)


def exactly_divides(d: int, N: IntLike) -> bool:
    """True when d | N and gcd(d, N/d) = 1."""
    N = int(factorize(N))
    if d < 1 or N % d:
        raise ValueError(f"{d} does not divide {N}")
    return math.gcd(d, N // d) == 1


def psi(N: IntLike) -> int:
    """Index of Gamma_0(N) in SL_2(Z)."""
    fN = factorize(N)
    out = fN.value
    for p in fN.primes:
        out = out // p * (p + 1)
    return out


def kappa(N: IntLike) -> int:
    fN = factorize(N)
    return phi(rad(fN)) * math.prod((n - 1) * (p - 1) + 2 for p, n in fN.factors)


def cusp_multiplicity(t: int, N: IntLike) -> int:
    """Number of inequivalent cusps a/t of Gamma_0(N)."""
    N = int(N)
    return phi(math.gcd(t, N // t))


def _complement_divisor_counts(fN: FactoredInt) -> list[tuple[int, int, int]]:
    """(p, n, d(N/p^n)) for every p^n || N."""
    return [(p, n, num_divisors(fN.value // p**n)) for p, n in fN.factors]


def omega_prime_bound(N: IntLike) -> Fraction:
    """Lattice-point count of the fundamental parallelepiped of B_N."""
    fN = factorize(N)
    if fN.value < 2:
        raise ValueError("omega_prime_bound needs N >= 2")
    dN = num_divisors(fN)
    out = Fraction(1)
    for p, _, dc in _complement_divisor_counts(fN):
        out *= Fraction(p) ** (2 * dN) * Fraction(p * p - 1, p**4) ** dc
    assert out.denominator == 1, f"non-integral parallelepiped count at N={fN.value}"
    return out


def simplex_volume_term(N: IntLike) -> Fraction:
    """det(C_N) / d(N)!, the volume term shared by the two bound formulas."""
    fN = factorize(N)
    dN = num_divisors(fN)
    det_c = Fraction(1)
    for p, _, dc in _complement_divisor_counts(fN):
        det_c *= Fraction((p * p - 1) ** dN, (p + 1) ** (2 * dc))
    return det_c / math.factorial(dN)


def omega_dprime_bound(N: IntLike) -> Fraction:
    fN = factorize(N)
    if fN.value < 2:
        raise ValueError("omega_dprime_bound needs N >= 2")
    w = omega_count(fN)
    comp = sum(dc for _, _, dc in _complement_divisor_counts(fN))
    return simplex_volume_term(fN) + 2 * comp - 2**w * (w - 1) - num_divisors(fN)


def omega_bound(N: IntLike) -> Fraction:
    """Upper bound on the number of holomorphic eta quotients on Gamma_0(N)
    that are not factorizable there (the value 1 at N = 1 is a convention).

    Evaluated as d(N) + Omega'(N) - Omega''(N).  Expanded, the divisor-count
    term enters with sign +2^w (w - 1).
    """
    fN = factorize(N)
    if fN.value == 1:
        return Fraction(1)
    return num_divisors(fN) + omega_prime_bound(fN) - omega_dprime_bound(fN)


def omega_zero_bound(N: IntLike) -> Fraction:
    fN = factorize(N)
    if fN.value == 1:
        return Fraction(1)
    return omega_bound(fN) - 2 * num_divisors(fN) + 2 ** omega_count(fN) + 1


def parse_level(text: str) -> int:
    """Parse ``"72"``, ``"2^3*3^2"`` or ``"2^3·3^2"`` into an int."""
    text = text.strip().replace("·", "*").replace(" ", "")
    out = 1
    for part in text.split("*"):
        base, _, exp = part.partition("^")
        out *= int(base) ** (int(exp) if exp else 1)
    return out
