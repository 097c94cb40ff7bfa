"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line (visible with ``-s``
or when run as a script) and then asserts the criterion at its stated
tolerance, including the runtime limit.
"""

import itertools
import math
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from etaforge.enumeration import (
    enumerate_by_weight,
    in_parallelepiped,
    parallelepiped_points,
)
from etaforge.eta import EtaQuotient, extremal_quotient
from etaforge.factor import (
    check_conjecture_1,
    check_conjecture_2,
    factorizable_on,
    irreducible_family,
    is_irreducible_up_to,
    is_quasi_irreducible,
    k_max,
    k_min,
    nonfactorizable_census,
    verify_extremal_divisibility,
)
from etaforge.matrices import (
    b_inverse,
    b_matrix,
    determinant,
    is_identity,
    order_matrix,
    order_matrix_direct,
    order_matrix_inverse,
    rational_matmul,
)
from etaforge.numtheory import (
    divisors,
    kappa,
    num_divisors,
    omega_bound,
    omega_dprime_bound,
    omega_prime_bound,
    omega_zero_bound,
    phi,
    rad,
)
from etaforge.tables import KMAX_KAPPA_REFERENCE, KMIN_REFERENCE, kmax_reference


def report(number: int, title: str, ok: bool, detail: str, seconds: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"\n[{status}] criterion {number:2d} {title}: {detail} ({seconds:.2f}s)")
    sys.stdout.flush()


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# 1 -------------------------------------------------------------------------
def test_criterion_01_matrix_identities():
    def run():
        bad = []
        for N in range(1, 121):
            ok = order_matrix(N).entries == order_matrix_direct(N).entries
            ok = ok and is_identity(rational_matmul(order_matrix(N), order_matrix_inverse(N)))
            ok = ok and is_identity(rational_matmul(b_matrix(N), b_inverse(N)))
            if not ok:
                bad.append(N)
        return bad

    bad, dt = timed(run)
    ok = not bad and dt < 30
    report(1, "matrix identities N<=120", ok, f"failures={bad}", dt)
    assert ok


# 2 -------------------------------------------------------------------------
def test_criterion_02_kappa_table():
    rows, dt = timed(lambda: {N: (kappa(N), kk) for N, (_, kk) in KMAX_KAPPA_REFERENCE.items()})
    bad = [N for N, (a, b) in rows.items() if a != b]
    spot = (kappa(6), kappa(16), kappa(12), kappa(17 * 97)) == (8, 5, 12, 6144)
    ok = not bad and spot and dt < 1
    report(2, "kappa column", ok, f"{len(rows)} rows, mismatches={bad}", dt)
    assert ok


# 3 -------------------------------------------------------------------------
def test_criterion_03_parallelepiped_count():
    def run():
        return {N: (len(parallelepiped_points(N)), determinant(b_matrix(N)), omega_prime_bound(N))
                for N in (2, 3, 4, 5, 6, 8, 9, 12)}

    rows, dt = timed(run)
    bad = [N for N, (a, b, c) in rows.items() if not a == b == c]
    ok = not bad and dt < 120
    report(3, "parallelepiped count = det(B_N) = Omega'", ok, f"counts={ {N: r[0] for N, r in rows.items()} }", dt)
    assert ok


# 4 -------------------------------------------------------------------------
def test_criterion_04_prime_levels():
    def run():
        bad = []
        for p in (2, 3, 5, 7, 11, 13):
            got = {e.quotient.format() for e in nonfactorizable_census(p) if e.level == p}
            want = {f"{p}^1", f"1^{p} {p}^-1", f"1^-1 {p}^{p}"}
            lower = {e.quotient.format() for e in nonfactorizable_census(p) if e.level != p}
            if got != want or lower != {"1^1"}:
                bad.append(p)
        return bad

    bad, dt = timed(run)
    ok = not bad and dt < 60
    report(4, "prime-level classification", ok, f"failures={bad}", dt)
    assert ok


# 5 -------------------------------------------------------------------------
KMAX_SLICE = (6, 10, 12, 14, 15, 16, 18, 20, 24, 25, 27, 32)


def test_criterion_05_kmax_slice():
    def run():
        return {N: (k_max(N), kmax_reference(N)) for N in KMAX_SLICE}

    rows, dt = timed(run)
    bad = {N: v for N, v in rows.items() if v[0] != v[1]}
    ok = not bad and dt < 1800
    report(5, "k_max slice", ok, f"{ {N: v[0] for N, v in rows.items()} } mismatches={bad}", dt)
    assert ok


# 6 -------------------------------------------------------------------------
KMIN_SLICE = (6, 10, 12, 14, 15, 16, 18, 20, 21, 22, 24, 26, 28, 30)


def test_criterion_06_kmin_slice():
    def run():
        return {N: (k_min(N), KMIN_REFERENCE[N]) for N in KMIN_SLICE}

    rows, dt = timed(run)
    bad = {N: v for N, v in rows.items() if v[0] != v[1]}
    ok = not bad and dt < 1800
    report(6, "k_min slice", ok, f"{ {N: v[0] for N, v in rows.items()} } mismatches={bad}", dt)
    assert ok


# 7 -------------------------------------------------------------------------
def test_criterion_07_extremal_divisibility():
    def run():
        return {N: (verify_extremal_divisibility(N), extremal_quotient(N).weight == Fraction(kappa(N), 2))
                for N in (1, 2, 3, 4, 6)}

    rows, dt = timed(run)
    ok = all(a and b for a, b in rows.values()) and dt < 300
    report(7, "F_N divisibility and weight", ok, f"{rows}", dt)
    assert ok


# 8 -------------------------------------------------------------------------
def test_criterion_08_bounds():
    def run():
        census_bad = []
        for N in (2, 3, 4, 6, 8, 9):
            es = nonfactorizable_census(N)
            if len(es) > omega_bound(N) or sum(e.level == N for e in es) > omega_zero_bound(N):
                census_bad.append(N)
        rad_bad = [N for N in range(1, 1001) if omega_bound(N) > rad(N) ** (2 * num_divisors(N))]
        ident_bad = [N for N in range(2, 1001)
                     if omega_bound(N) != num_divisors(N) + omega_prime_bound(N) - omega_dprime_bound(N)]
        return census_bad, rad_bad, ident_bad

    (cb, rb, ib), dt = timed(run)
    ok = not (cb or rb or ib) and dt < 60
    report(8, "Omega bounds", ok, f"census={cb} rad={rb[:5]} identity={ib[:5]}", dt)
    assert ok


# 9 -------------------------------------------------------------------------
def test_criterion_09_irreducible_family():
    def run():
        bad = []
        for N in (4, 8, 9, 12, 16, 27):
            for t, f, k in irreducible_family(N):
                good = k == phi(rad(N)) * phi(rad(math.gcd(t, N // t)))
                good = good and is_quasi_irreducible(f)
                good = good and not is_irreducible_up_to(f, 1, base=N).refuted
                if not good:
                    bad.append((N, t))
        return bad

    bad, dt = timed(run)
    ok = not bad and dt < 600
    report(9, "irreducible family", ok, f"failures={bad}", dt)
    assert ok


# 10 ------------------------------------------------------------------------
def _box_oracle(N, k, span=24):
    A = order_matrix(N).to_numpy()
    D = A.shape[0]
    if D == 1:
        return {(k,)}
    rng = np.arange(-span, span + 1)
    grid = np.stack(np.meshgrid(*[rng] * (D - 1), indexing="ij"), -1).reshape(-1, D - 1)
    X = np.hstack([grid, (k - grid.sum(axis=1))[:, None]])
    X = X[(np.abs(X[:, -1]) <= span) & np.all(X @ A.T >= 0, axis=1)]
    return {tuple(int(v) for v in r) for r in X}


def _membership_oracle(N):
    inv = b_inverse(N).entries
    pts = parallelepiped_points(N)
    gen = {tuple(int(v) for v in r) for r in pts}
    ok = all(all(0 <= sum(a * int(x) for a, x in zip(row, X)) < 1 for row in inv) for X in pts)
    bound = int(np.abs(pts).max()) + 1
    D = num_divisors(N)
    if (2 * bound + 1) ** D <= 300_000:
        grid = np.array(list(itertools.product(range(-bound, bound + 1), repeat=D)))
        ok = ok and {tuple(int(v) for v in r) for r in grid[in_parallelepiped(N, grid)]} == gen
    return ok


def test_criterion_10_oracle_equivalence():
    def run():
        enum_bad = [(N, k) for N in (1, 2, 3, 4) for k in range(0, 5)
                    if {f.exponents for f in enumerate_by_weight(N, k)} != _box_oracle(N, k)]
        mem_bad = [N for N in range(2, 9) if not _membership_oracle(N)]
        return enum_bad, mem_bad

    (eb, mb), dt = timed(run)
    ok = not eb and not mb and dt < 300
    report(10, "oracle equivalence", ok, f"enumeration={eb} membership={mb}", dt)
    assert ok


# 11 ------------------------------------------------------------------------
def test_criterion_11_delta():
    def run():
        delta = EtaQuotient.eta(1, 24)
        w2 = factorizable_on(delta, 2)
        w1 = factorizable_on(delta, 1)
        for w in (w2, w1):
            assert w is not None
            w.validate(delta)
        return w2, w1

    (w2, w1), dt = timed(run)
    ok = dt < 1
    report(11, "Delta factorization", ok, f"on 2: {w2.left} x {w2.right}; on 1: {w1.left} x {w1.right}", dt)
    assert ok


# 12 ------------------------------------------------------------------------
def test_criterion_12_conjecture_reports():
    def run():
        rows = check_conjecture_1(sorted(KMIN_REFERENCE))
        c2 = check_conjecture_2(3, 4)
        return rows, c2

    (rows, c2), dt = timed(run)
    fails = [r.N for r in rows if not r.holds]
    detail = (f"conjecture 1 holds on {len(rows) - len(fails)}/{len(rows)} rows (mismatch={fails}); "
              f"conjecture 2 at 3^4: predicted {c2.predicted}, computed {c2.computed}, "
              f"{'equal' if c2.equal else 'mismatch'}")
    # reports are non-blocking: generating them is the criterion
    report(12, "conjecture reports", True, detail, dt)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-s", "-q"]))
