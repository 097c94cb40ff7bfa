"""Factorizability, quasi-irreducibility and the weight statistics k_min, k_max.

A holomorphic eta quotient f on Gamma_0(M) factors there exactly when some
nonzero lattice order vector y with y <= A_M X_f sits strictly below the
order vector of f.  All decisions below reduce to that box search or to the
minimal points of the fundamental parallelepiped of B_N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .config import DEFAULT_GUARDS, Guards
from .enumeration import (
    GuardError,
    dominated_mask,
    lattice_points_below,
    minimal_box_points,
    order_lattice,
    order_vectors_of_weight,
    parallelepiped_count,
)
from .eta import (
    EtaQuotient,
    column_quotient,
    extremal_quotient,
    is_holomorphic,
    order_vector,
)
from .matrices import b_matrix, column_sum_formula
from .numtheory import (
    IntLike,
    divisor_basis,
    factorize,
    kappa,
    num_divisors,
    omega_bound,
    omega_count,
    omega_zero_bound,
    rad,
)
from .tables import KMIN_REFERENCE


@dataclass(frozen=True)
class FactorizationWitness:
    """``target = left * right`` with both factors nonconstant and holomorphic
    on Gamma_0(modulus)."""

    left: EtaQuotient
    right: EtaQuotient
    modulus: int

    def validate(self, target: EtaQuotient) -> None:
        M = self.modulus
        left, right, tgt = self.left.embed(M), self.right.embed(M), target.embed(M)
        if left.is_constant() or right.is_constant():
            raise AssertionError("witness has a constant factor")
        if not (is_holomorphic(left) and is_holomorphic(right)):
            raise AssertionError("witness factor is not holomorphic")
        if tuple(a + b for a, b in zip(left.exponents, right.exponents)) != tgt.exponents:
            raise AssertionError("witness exponents do not add up to the target")

    def to_dict(self) -> dict:
        return {"left": self.left.to_dict(), "right": self.right.to_dict()}


def _ambient(f: EtaQuotient, M: int | None) -> EtaQuotient:
    if f.is_constant():
        raise ValueError("constant eta quotients have no factorizations")
    if M is None:
        M = f.level()
    g = f.embed(int(factorize(M)))
    if not is_holomorphic(g):
        raise ValueError(f"{f} is not holomorphic on Gamma_0({M})")
    return g


def factorizable_on(
    f: EtaQuotient, M: int | None = None, guards: Guards = DEFAULT_GUARDS
) -> FactorizationWitness | None:
    """A factorization of f on Gamma_0(M) (M defaults to the level), or None.

    The left factor is the eta quotient whose order vector is the
    lexicographically smallest admissible y, so witnesses are deterministic.
    """
    g = _ambient(f, M)
    Mv = g.modulus
    if num_divisors(Mv) > guards.max_divisors:
        raise GuardError(f"d({Mv}) exceeds the guard of {guards.max_divisors}")
    x = np.array(order_vector(g).scaled_orders, dtype=np.int64)
    zero = np.zeros_like(x)
    hit = lattice_points_below(Mv, x, exclude=[zero, x], first_only=True)
    if len(hit) == 0:
        return None
    lat = order_lattice(Mv)
    left = EtaQuotient(Mv, tuple(int(v) for v in lat.exponents(hit[0])[0]))
    w = FactorizationWitness(left, g / left, Mv)
    w.validate(g)
    return w


def is_quasi_irreducible(f: EtaQuotient, guards: Guards = DEFAULT_GUARDS) -> bool:
    return factorizable_on(f, None, guards) is None


# ---------------------------------------------------------------------------
# census of non-factorizable quotients


@dataclass(frozen=True)
class CensusEntry:
    quotient: EtaQuotient
    source: str  # "parallelepiped-point" or "B-column <t>"
    level: int
    k: int
    quasi_irreducible: bool

    def csv_row(self) -> list:
        return [self.quotient.format(), self.level, self.k, self.source, str(self.quasi_irreducible).lower()]


CENSUS_COLUMNS = ("exponents", "level", "k", "source", "quasi_irreducible")


def check_census_guards(N: int, guards: Guards) -> None:
    if num_divisors(N) > guards.max_divisors:
        raise GuardError(f"d({N}) = {num_divisors(N)} exceeds the guard of {guards.max_divisors}")
    if N > 1 and parallelepiped_count(N) > guards.max_det:
        raise GuardError(f"det(B_{N}) = {parallelepiped_count(N)} exceeds the guard of {guards.max_det}")


def nonfactorizable_census(N: IntLike, guards: Guards = DEFAULT_GUARDS) -> list[CensusEntry]:
    """Every nonconstant holomorphic eta quotient on Gamma_0(N) that does not
    factor there: the minimal nonzero parallelepiped points plus the columns
    of B_N.  Ordered by weight, then by scaled order vector.
    """
    Nv = int(factorize(N))
    check_census_guards(Nv, guards)
    lat = order_lattice(Nv)
    entries: list[CensusEntry] = []
    if Nv > 1:
        xs, ks = minimal_box_points(Nv)
        for X, k in zip(lat.exponents(xs) if len(xs) else [], ks):
            f = EtaQuotient(Nv, tuple(int(v) for v in X))
            # a split at the level would also be a split at N
            entries.append(CensusEntry(f, "parallelepiped-point", f.level(), int(k), True))
    for t in divisor_basis(Nv):
        f = column_quotient(Nv, t)
        entries.append(CensusEntry(f, f"B-column {t}", f.level(), f.weight_numerator(), True))
    entries.sort(key=lambda e: (e.k, order_vector(e.quotient).scaled_orders))
    if Nv > 1:
        assert len(entries) <= omega_bound(Nv), f"census exceeds its bound at N={Nv}"
        exact = sum(1 for e in entries if e.level == Nv)
        assert exact <= omega_zero_bound(Nv), f"level-{Nv} census exceeds its bound"
    return entries


def k_max(N: IntLike, guards: Guards = DEFAULT_GUARDS) -> int:
    """Largest weight numerator of a level-N quotient that does not factor on
    Gamma_0(N)."""
    Nv = int(factorize(N))
    ks = [e.k for e in nonfactorizable_census(Nv, guards) if e.level == Nv]
    out = max(ks)
    assert out < kappa(Nv) or Nv == 1, f"k_max({Nv}) = {out} is not below kappa"
    return out


# ---------------------------------------------------------------------------
# k_min


def _holomorphic_up_to(N: int, k: int, cache: dict[int, np.ndarray]) -> np.ndarray:
    rows = []
    for j in range(1, k + 1):
        if j not in cache:
            cache[j] = order_vectors_of_weight(N, j)
        rows.append(cache[j])
    D = order_lattice(N).dim
    return np.vstack(rows) if rows else np.zeros((0, D), np.int64)


def _exact_level_primitive(N: int, X: np.ndarray) -> np.ndarray:
    """Mask of exponent rows whose support has lcm N and gcd 1."""
    divs = np.array(divisor_basis(N).divisors)
    keep = np.zeros(len(X), dtype=bool)
    for i, row in enumerate(X):
        sup = divs[row != 0]
        if len(sup) and math.lcm(*map(int, sup)) == N and math.gcd(*map(int, sup)) == 1:
            keep[i] = True
    return keep


def level_candidates(N: IntLike, k: int, cache: dict | None = None) -> list[EtaQuotient]:
    """Primitive, quasi-irreducible holomorphic quotients of level N and
    weight k/2, sorted by scaled order vector."""
    Nv = int(factorize(N))
    cache = {} if cache is None else cache
    lat = order_lattice(Nv)
    if k not in cache:
        cache[k] = order_vectors_of_weight(Nv, k)
    xs = cache[k]
    if len(xs) == 0:
        return []
    X = lat.exponents(xs)
    keep = _exact_level_primitive(Nv, X)
    xs, X = xs[keep], X[keep]
    # a split f = g h has a factor of weight at most k/2
    smaller = _holomorphic_up_to(Nv, k // 2, cache)
    if len(xs) and len(smaller):
        xs_bad = dominated_mask(xs, smaller)
        X = X[~xs_bad]
    return [EtaQuotient(Nv, tuple(int(v) for v in row)) for row in X]


def k_min(N: IntLike, cap: int | None = None, guards: Guards = DEFAULT_GUARDS) -> int | None:
    """Least k with a primitive quasi-irreducible level-N quotient of weight
    k/2, or None when there is none with k <= cap (default kappa(N))."""
    Nv = int(factorize(N))
    if Nv < 2:
        raise ValueError("k_min needs N >= 2")
    if num_divisors(Nv) > guards.max_divisors:
        raise GuardError(f"d({Nv}) exceeds the guard of {guards.max_divisors}")
    if cap is None:
        cap = kappa(Nv)
    if cap < 1:
        raise ValueError("cap must be positive")
    cache: dict[int, np.ndarray] = {}
    for k in range(1, cap + 1):
        if k > guards.max_k:
            raise GuardError(f"k_min({Nv}) search passed the weight guard k <= {guards.max_k}")
        if level_candidates(Nv, k, cache):
            return k
    return None


# ---------------------------------------------------------------------------
# the extremal quotient F_N


def verify_extremal_divisibility(N: IntLike, guards: Guards = DEFAULT_GUARDS) -> bool:
    """Check that F_N has weight kappa(N)/2 and is divisible by every census
    quotient; for N <= 4 also check by exhaustion over all weights up to
    kappa(N) that a quotient divisible by every census entry is divisible by
    F_N, and that none of smaller weight exists."""
    Nv = int(factorize(N))
    F = extremal_quotient(Nv)
    if F.weight_numerator() != kappa(Nv):
        return False
    fx = np.array(order_vector(F).scaled_orders)
    census = nonfactorizable_census(Nv, guards)
    cx = np.array([order_vector(e.quotient.embed(Nv)).scaled_orders for e in census])
    if not np.all(cx <= fx):
        return False
    if Nv in (2, 3, 4):
        for k in range(0, kappa(Nv) + 1):
            xs = order_vectors_of_weight(Nv, k)
            by_all = np.all(xs[:, None, :] >= cx[None, :, :], axis=(1, 2))
            by_f = np.all(xs >= fx, axis=1)
            if np.any(by_all != by_f):
                return False
            if k < kappa(Nv) and np.any(by_all):
                return False
    return True


def column_quotients(N: IntLike) -> list[EtaQuotient]:
    Nv = int(factorize(N))
    return [column_quotient(Nv, t) for t in divisor_basis(Nv)]


def irreducible_family(N: IntLike) -> list[tuple[int, EtaQuotient, int]]:
    """(t, eta^{B_N(., t)}, k) for every t dividing N / rad(N)."""
    Nv = int(factorize(N))
    if Nv < 2:
        raise ValueError("irreducible_family needs N >= 2")
    top = Nv // rad(Nv)
    out = []
    for t in divisor_basis(Nv):
        if top % t:
            continue
        f = column_quotient(Nv, t)
        k = f.weight_numerator()
        assert k == column_sum_formula(Nv, t)
        out.append((t, f, k))
    return out


@dataclass(frozen=True)
class IrreducibilityVerdict:
    """Outcome of the bounded search; ``unrefuted`` is not a proof."""

    refuted: bool
    witness: FactorizationWitness | None
    moduli: tuple[int, ...] = field(default=())

    @property
    def label(self) -> str:
        return "refuted" if self.refuted else "unrefuted"


def is_irreducible_up_to(
    f: EtaQuotient, j_max: int = 2, guards: Guards = DEFAULT_GUARDS, base: int | None = None
) -> IrreducibilityVerdict:
    """Search for splits on Gamma_0(N rad(N)^j), j = 1..j_max.

    N is ``base`` when given (a multiple of the level sharing its radical,
    e.g. the modulus a column quotient came from), else the level of f.
    """
    if not is_quasi_irreducible(f, guards):
        raise ValueError(f"{f} is not quasi-irreducible")
    N = f.level() if base is None else int(base)
    if N % f.level() or rad(N) != rad(f.level()):
        raise ValueError(f"{N} is not a multiple of level {f.level()} with the same radical")
    tried = []
    for j in range(1, j_max + 1):
        M = N * rad(N) ** j
        tried.append(M)
        w = factorizable_on(f, M, guards)
        if w is not None:
            return IrreducibilityVerdict(True, w, tuple(tried))
    return IrreducibilityVerdict(False, None, tuple(tried))


# ---------------------------------------------------------------------------
# conjecture reports


@dataclass(frozen=True)
class Conjecture1Row:
    N: int
    k_min: int | None
    bound: int
    holds: bool | None


def conjecture1_bound(N: IntLike) -> int:
    return max(n * p for p, n in factorize(N).factors)


def check_conjecture_1(levels: Iterable[int], values: dict[int, int] | None = None) -> list[Conjecture1Row]:
    """Evaluate 4 k_min(N)^2 >= max n p over p^n || N for each level with a
    known k_min (reference values unless ``values`` is given)."""
    values = KMIN_REFERENCE if values is None else values
    out = []
    for N in levels:
        b = conjecture1_bound(N) if N > 1 else 0
        k = values.get(N)
        out.append(Conjecture1Row(N, k, b, None if k is None else 4 * k * k >= b))
    return out


@dataclass(frozen=True)
class Conjecture2Report:
    p: int
    n: int
    predicted: int
    computed: int

    @property
    def equal(self) -> bool:
        return self.predicted == self.computed


def conjecture2_value(p: int, n: int) -> int:
    return (n - 1) * (p - 1) ** 2 - 2 ** (n % 2) * ((n // 2) * (p - 1) - 1)


def check_conjecture_2(p: int, n: int, guards: Guards = DEFAULT_GUARDS) -> Conjecture2Report:
    fp = factorize(p)
    if omega_count(fp) != 1 or fp.factors[0][1] != 1 or p == 2:
        raise ValueError("p must be an odd prime")
    if n <= 3:
        raise ValueError("n must exceed 3")
    return Conjecture2Report(p, n, conjecture2_value(p, n), k_max(p**n, guards))


def b_column_levels(N: IntLike) -> list[int]:
    B = b_matrix(N)
    return [column_quotient(B.level, t).level() or 1 for t in B.basis]
