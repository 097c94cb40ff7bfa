import pytest
from hypothesis import given
from hypothesis import strategies as st

from etaforge.config import Guards
from etaforge.enumeration import GuardError, enumerate_by_weight
from etaforge.eta import EtaQuotient, is_holomorphic
from etaforge.factor import (
    FactorizationWitness,
    check_conjecture_1,
    check_conjecture_2,
    column_quotients,
    conjecture2_value,
    factorizable_on,
    irreducible_family,
    is_irreducible_up_to,
    is_quasi_irreducible,
    k_max,
    k_min,
    nonfactorizable_census,
    verify_extremal_divisibility,
)
from etaforge.numtheory import kappa, omega_bound, omega_zero_bound, phi, rad

q = EtaQuotient.parse


def test_delta_on_two():
    delta = EtaQuotient.eta(1, 24)
    w = factorizable_on(delta, 2)
    assert w is not None and w.modulus == 2
    w.validate(delta)
    # the classical split is also a valid witness
    FactorizationWitness(q("1^8 2^8"), q("1^16 2^-8"), 2).validate(delta)


def test_delta_on_one():
    w = factorizable_on(EtaQuotient.eta(1, 24))
    assert w is not None
    assert w.left.as_dict() == {1: 1} and w.right.as_dict() == {1: 23}


def test_unfactorizable_examples():
    assert factorizable_on(q("1^2 2^-1"), 2) is None
    assert factorizable_on(q("1^1"), 1) is None


def test_factorizable_rejects_bad_input():
    with pytest.raises(ValueError):
        factorizable_on(EtaQuotient.one(2))
    with pytest.raises(ValueError):
        factorizable_on(q("1^3 2^-2"))


def test_bad_witness_is_caught():
    with pytest.raises(AssertionError):
        FactorizationWitness(q("1^1"), q("1^1"), 1).validate(q("1^3"))
    with pytest.raises(AssertionError):
        FactorizationWitness(EtaQuotient.one(2), q("1^2"), 2).validate(q("1^2"))


def test_quasi_irreducible_examples():
    assert is_quasi_irreducible(q("1^5 5^-1"))
    assert is_quasi_irreducible(q("1^-1 5^5"))
    assert not is_quasi_irreducible(q("1^1 2^1"))
    assert is_quasi_irreducible(q("6^1"))


@st.composite
def holomorphic_pairs(draw):
    N = draw(st.sampled_from([2, 3, 4, 6, 8]))
    pool = enumerate_by_weight(N, draw(st.integers(1, 2)))
    g = draw(st.sampled_from(pool))
    h = draw(st.sampled_from(pool))
    return N, g, h


@given(holomorphic_pairs())
def test_products_factor(case):
    N, g, h = case
    f = g * h
    w = factorizable_on(f, N)
    assert w is not None
    w.validate(f)


def test_census_two():
    got = {e.quotient.format() for e in nonfactorizable_census(2)}
    assert got == {"1^1", "2^1", "1^2 2^-1", "1^-1 2^2"}


@pytest.mark.parametrize("p", [3, 5, 7])
def test_census_prime_level(p):
    got = {e.quotient.format() for e in nonfactorizable_census(p) if e.level == p}
    assert got == {f"{p}^1", f"1^{p} {p}^-1", f"1^-1 {p}^{p}"}


@pytest.mark.parametrize("N", [2, 3, 4])
def test_census_complete_by_exhaustion(N):
    census = {e.quotient.exponents for e in nonfactorizable_census(N)}
    found = set()
    for k in range(1, kappa(N) + 1):
        for f in enumerate_by_weight(N, k):
            if factorizable_on(f, N) is None:
                found.add(f.exponents)
    assert found == census


@pytest.mark.parametrize("N", [2, 3, 4, 6, 8, 9])
def test_census_sound_and_bounded(N):
    es = nonfactorizable_census(N)
    assert len(es) <= omega_bound(N)
    assert sum(1 for e in es if e.level == N) <= omega_zero_bound(N)
    for e in es:
        assert is_holomorphic(e.quotient)
        assert factorizable_on(e.quotient, N) is None
        assert e.quasi_irreducible == is_quasi_irreducible(e.quotient)


def test_census_guard():
    with pytest.raises(GuardError):
        nonfactorizable_census(28)
    with pytest.raises(GuardError):
        nonfactorizable_census(720, Guards(max_divisors=16))


@pytest.mark.parametrize("N,value", [(2, 1), (3, 2), (4, 1), (5, 4), (6, 2), (9, 4), (12, 3), (16, 2), (25, 16)])
def test_k_max_small(N, value):
    assert k_max(N) == value < kappa(N)


@pytest.mark.parametrize("N,value", [(2, 1), (3, 2), (5, 4), (7, 6), (9, 2), (25, 4), (6, 1), (10, 2), (14, 3)])
def test_k_min_small(N, value):
    assert k_min(N) == value


def test_k_min_none_up_to_cap():
    assert k_min(14, cap=2) is None
    with pytest.raises(ValueError):
        k_min(6, cap=0)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 6])
def test_extremal_divisibility(N):
    assert verify_extremal_divisibility(N)


@pytest.mark.parametrize("N", [2, 4, 12, 30])
def test_column_quotients(N):
    cols = column_quotients(N)
    assert len(cols) == len(set(c.exponents for c in cols))
    exact = sum(1 for c in cols if c.level() == N)
    assert exact == 2 ** len(__import__("etaforge").numtheory.factorize(N).factors)
    for c in cols:
        assert factorizable_on(c, N) is None


def test_column_quotients_two():
    assert [c.format() for c in column_quotients(2)] == ["1^2 2^-1", "1^-1 2^2"]


@pytest.mark.parametrize("N", [4, 8, 9, 12, 16, 27])
def test_irreducible_family(N):
    import math

    fam = irreducible_family(N)
    assert [t for t, _, _ in fam] == [t for t in range(1, N + 1) if (N // rad(N)) % t == 0]
    for t, f, k in fam:
        assert k == phi(rad(N)) * phi(rad(math.gcd(t, N // t)))
        assert is_quasi_irreducible(f)


def test_family_weights():
    assert [k for _, _, k in irreducible_family(4)] == [1, 1]
    assert dict((t, k) for t, _, k in irreducible_family(8))[2] == 1
    assert dict((t, k) for t, _, k in irreducible_family(9))[3] == 4
    for p in (3, 5, 7):
        assert max(k for _, _, k in irreducible_family(p * p)) == (p - 1) ** 2


def test_irreducible_up_to():
    v = is_irreducible_up_to(q("1^2 2^-1"), 2)
    assert not v.refuted and v.moduli == (4, 8) and v.label == "unrefuted"
    with pytest.raises(ValueError):
        is_irreducible_up_to(q("1^1 2^1"))
    f = dict((t, f) for t, f, _ in irreducible_family(8))[2]
    assert not is_irreducible_up_to(f, 1, base=8).refuted


def test_conjecture_1():
    rows = {r.N: r for r in check_conjecture_1([6, 16, 74, 7])}
    assert rows[6].holds and rows[6].bound == 3
    assert rows[16].holds and rows[16].bound == 8
    assert rows[74].holds and rows[74].bound == 37
    assert rows[7].holds is None


def test_conjecture_2():
    assert conjecture2_value(3, 4) == 9
    assert conjecture2_value(3, 5) == 4 * 4 - 2 * (2 * 2 - 1)
    r = check_conjecture_2(3, 4)
    assert r.predicted == 9 and r.computed == k_max(81)
    with pytest.raises(ValueError):
        check_conjecture_2(2, 4)
    with pytest.raises(ValueError):
        check_conjecture_2(3, 3)


def test_weight_zero_only_constant():
    for N in (2, 6, 12):
        assert [f.is_constant() for f in enumerate_by_weight(N, 0)] == [True]
