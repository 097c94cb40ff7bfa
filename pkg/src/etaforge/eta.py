"""Eta quotients on Gamma_0(N) as exponent vectors over the divisors of N."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .matrices import b_matrix, denominators, order_matrix
from .numtheory import (
    DivisorBasis,
    IntLike,
    cusp_multiplicity,
    divisor_basis,
    factorize,
    psi,
)


@dataclass(frozen=True)
class EtaQuotient:
    """``prod eta(d z)^X_d`` over the divisors d of ``modulus``.

    Equality is equality of exponent vectors over the same modulus; use
    :meth:`embed` to compare quotients stored over different moduli.
    """

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != len(divisor_basis(self.modulus)):
            raise ValueError(
                f"expected {len(divisor_basis(self.modulus))} exponents for modulus {self.modulus}"
            )

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_mapping(cls, exps: Mapping[int, int], modulus: int | None = None) -> "EtaQuotient":
        support = [int(d) for d, e in exps.items() if e]
        if modulus is None:
            modulus = math.lcm(*support) if support else 1
        basis = divisor_basis(modulus)
        vec = [0] * len(basis)
        for d, e in exps.items():
            if e:
                vec[basis.position(int(d))] += int(e)
        return cls(modulus, tuple(vec))

    @classmethod
    def parse(cls, text: str, modulus: int | None = None) -> "EtaQuotient":
        """Read the ``"1^2 2^-1"`` syntax; a bare ``"6"`` means exponent 1."""
        exps: dict[int, int] = {}
        text = text.strip()
        if text and text != "1^0":
            for tok in text.split():
                m = re.fullmatch(r"(\d+)(?:\^(-?\d+))?", tok)
                if not m:
                    raise ValueError(f"cannot parse eta-quotient token {tok!r}")
                d, e = int(m.group(1)), int(m.group(2) or 1)
                if d < 1:
                    raise ValueError("divisors must be positive")
                exps[d] = exps.get(d, 0) + e
        return cls.from_mapping(exps, modulus)

    @classmethod
    def from_json(cls, obj: str | Mapping) -> "EtaQuotient":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_mapping({int(d): e for d, e in obj["exponents"].items()}, obj.get("modulus"))

    @classmethod
    def one(cls, modulus: int = 1) -> "EtaQuotient":
        return cls(modulus, (0,) * len(divisor_basis(modulus)))

    @classmethod
    def eta(cls, d: int = 1, power: int = 1, modulus: int | None = None) -> "EtaQuotient":
        return cls.from_mapping({d: power}, modulus or d)

    # -- basic views ---------------------------------------------------------
    @property
    def basis(self) -> DivisorBasis:
        return divisor_basis(self.modulus)

    def exponent(self, d: int) -> int:
        return self.exponents[self.basis.position(d)]

    def as_dict(self) -> dict[int, int]:
        return {d: e for d, e in zip(self.basis, self.exponents) if e}

    @property
    def support(self) -> list[int]:
        return [d for d, e in zip(self.basis, self.exponents) if e]

    def is_constant(self) -> bool:
        return not any(self.exponents)

    def format(self) -> str:
        items = sorted(self.as_dict().items())
        return " ".join(f"{d}^{e}" for d, e in items) if items else "1^0"

    def __str__(self) -> str:
        return self.format()

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "exponents": {str(d): e for d, e in sorted(self.as_dict().items())}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    # -- arithmetic -----------------------------------------------------------
    def embed(self, M: int) -> "EtaQuotient":
        """The same quotient written over D_M (zeros at new divisors)."""
        if M % (self.level() or 1):
            raise ValueError(f"level {self.level()} does not divide {M}")
        return EtaQuotient.from_mapping(self.as_dict(), M)

    def _common(self, other: "EtaQuotient") -> tuple["EtaQuotient", "EtaQuotient"]:
        M = math.lcm(self.modulus, other.modulus)
        return self.embed(M), other.embed(M)

    def __mul__(self, other: "EtaQuotient") -> "EtaQuotient":
        a, b = self._common(other)
        return EtaQuotient(a.modulus, tuple(x + y for x, y in zip(a.exponents, b.exponents)))

    def __truediv__(self, other: "EtaQuotient") -> "EtaQuotient":
        a, b = self._common(other)
        return EtaQuotient(a.modulus, tuple(x - y for x, y in zip(a.exponents, b.exponents)))

    def __pow__(self, k: int) -> "EtaQuotient":
        return EtaQuotient(self.modulus, tuple(k * x for x in self.exponents))

    # -- invariants -----------------------------------------------------------
    def weight_numerator(self) -> int:
        """k such that the weight is k/2."""
        return sum(self.exponents)

    @property
    def weight(self) -> Fraction:
        return Fraction(self.weight_numerator(), 2)

    def level(self) -> int | None:
        """lcm of the support, or ``None`` for the constant quotient."""
        sup = self.support
        return math.lcm(*sup) if sup else None

    def order_vector(self, modulus: int | None = None) -> "OrderVector":
        f = self if modulus is None else self.embed(modulus)
        return order_vector(f)


@dataclass(frozen=True)
class OrderVector:
    """24 times the orders at the cusps 1/t, in basis order."""

    basis: DivisorBasis
    scaled_orders: tuple[int, ...]

    def at(self, t: int) -> int:
        return self.scaled_orders[self.basis.position(t)]

    def orders(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, 24) for x in self.scaled_orders)


def order_vector(f: EtaQuotient) -> OrderVector:
    A = order_matrix(f.modulus)
    x = tuple(sum(a * e for a, e in zip(row, f.exponents)) for row in A.entries)
    return OrderVector(A.basis, x)


def is_holomorphic(f: EtaQuotient) -> bool:
    return all(x >= 0 for x in order_vector(f).scaled_orders)


def weight_numerator(f: EtaQuotient) -> int:
    return f.weight_numerator()


def level(f: EtaQuotient) -> int | None:
    return f.level()


def is_primitive(f: EtaQuotient) -> bool:
    if f.is_constant():
        raise ValueError("the constant quotient has no primitivity")
    return reduce(math.gcd, f.support) == 1


def rescale(f: EtaQuotient, nu: int, new_modulus: int | None = None) -> EtaQuotient:
    """z -> nu z: the exponent at nu*d becomes the old exponent at d."""
    if nu < 1:
        raise ValueError("rescaling factor must be positive")
    base = f.level() or 1
    if new_modulus is None:
        new_modulus = nu * f.modulus
    if new_modulus % (nu * base):
        raise ValueError(f"{nu} * level {base} does not divide {new_modulus}")
    return EtaQuotient.from_mapping({nu * d: e for d, e in f.as_dict().items()}, new_modulus)


def divides(g: EtaQuotient, f: EtaQuotient) -> bool:
    """True when f / g is holomorphic on the common modulus."""
    return is_holomorphic(f / g)


def extremal_quotient(N: IntLike) -> EtaQuotient:
    """Product of the eta quotients given by the columns of B_N."""
    B = b_matrix(N)
    return EtaQuotient(B.level, tuple(sum(row) for row in B.entries))


def cusp_classes(N: IntLike) -> list[tuple[int, int]]:
    Nv = int(factorize(N))
    return [(t, cusp_multiplicity(t, Nv)) for t in divisor_basis(Nv)]


def valence_check(f: EtaQuotient) -> bool:
    """Cusp-weighted sum of scaled orders equals k * psi(N)."""
    x = order_vector(f)
    lhs = sum(cusp_multiplicity(t, f.modulus) * o for t, o in zip(x.basis, x.scaled_orders))
    return lhs == f.weight_numerator() * psi(f.modulus)


def column_quotient(N: IntLike, t: int) -> EtaQuotient:
    B = b_matrix(N)
    return EtaQuotient(B.level, B.column(t))


def extremal_orders(N: IntLike) -> tuple[int, ...]:
    return denominators(N)


# -- q-series -----------------------------------------------------------------


@dataclass(frozen=True)
class QSeries:
    """``q^leading_exponent * sum_n coefficients[n] q^n``, truncated."""

    leading_exponent: Fraction
    coefficients: tuple[int, ...]

    def __post_init__(self):
        if (self.leading_exponent * 24).denominator != 1:
            raise ValueError("leading exponent must lie in (1/24)Z")
        if self.coefficients and self.coefficients[0] == 0:
            raise ValueError("series must be normalized with a nonzero leading coefficient")

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self.coefficients):
            if c:
                terms.append(f"{c:+d}q^{n}")
        return f"q^({self.leading_exponent}) * ({' '.join(terms)} + O(q^{len(self.coefficients)}))"


def series_mul(a: Sequence[int], b: Sequence[int], T: int) -> list[int]:
    out = [0] * T
    for i, x in enumerate(a[:T]):
        if x:
            for j, y in enumerate(b[: T - i]):
                out[i + j] += x * y
    return out


def series_inverse(a: Sequence[int], T: int) -> list[int]:
    """Inverse of an integer series with constant term +-1."""
    if a[0] not in (1, -1):
        raise ValueError("integer inverse needs a unit constant term")
    out = [0] * T
    out[0] = a[0]
    for n in range(1, T):
        s = sum(a[k] * out[n - k] for k in range(1, min(n, len(a) - 1) + 1))
        out[n] = -s * a[0]
    return out


def series_pow(a: Sequence[int], e: int, T: int) -> list[int]:
    if e < 0:
        a, e = series_inverse(a, T), -e
    out = [1] + [0] * (T - 1)
    base = list(a[:T]) + [0] * (T - len(a))
    while e:
        if e & 1:
            out = series_mul(out, base, T)
        e >>= 1
        if e:
            base = series_mul(base, base, T)
    return out


def euler_product(T: int, step: int = 1) -> list[int]:
    """Coefficients of prod_{n>=1} (1 - q^(step*n)) up to q^(T-1)."""
    out = [1] + [0] * (T - 1)
    for n in range(step, T, step):
        # multiply by (1 - q^n) in place, high degrees first
        for i in range(T - 1, n - 1, -1):
            out[i] -= out[i - n]
    return out


def q_expansion(f: EtaQuotient, T: int = 50) -> QSeries:
    if T < 1:
        raise ValueError("need at least one term")
    coeffs = [1] + [0] * (T - 1)
    for d, e in f.as_dict().items():
        coeffs = series_mul(coeffs, series_pow(euler_product(T, d), e, T), T)
    lead = Fraction(sum(d * e for d, e in f.as_dict().items()), 24)
    return QSeries(lead, tuple(coeffs))


def eta_quotients_from(vectors: Iterable[Sequence[int]], modulus: int) -> list[EtaQuotient]:
    return [EtaQuotient(modulus, tuple(int(v) for v in vec)) for vec in vectors]
