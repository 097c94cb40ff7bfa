import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from etaforge.matrices import (
    b_determinant_kronecker,
    b_inverse,
    b_inverse_prime_power,
    b_matrix,
    c_matrix,
    column_sum_formula,
    denominator_clearer,
    denominators,
    determinant,
    is_identity,
    order_matrix,
    order_matrix_direct,
    order_matrix_inverse,
    order_matrix_prime_power,
    rational_matmul,
)
from etaforge.numtheory import divisors, omega_prime_bound

small_levels = st.integers(1, 200)


def sympy_order_matrix(n):
    ds = divisors(n)
    return sympy.Matrix([[sympy.Rational(n * math.gcd(d, t) ** 2, d * math.gcd(t * t, n)) for d in ds] for t in ds])


def test_a2():
    assert order_matrix(2).rows() == [[2, 1], [1, 2]]
    assert order_matrix(1).rows() == [[1]]


def test_lookup_by_divisor_labels():
    A = order_matrix(12)
    assert A[1, 1] == 12 and A[1, 12] == 1 and A[12, 1] == 1 and A[2, 2] == 6


# B_N computed with sympy's exact inverse and column-wise lcm of denominators
B_ORACLE = {
    2: [[2, -1], [-1, 2]],
    4: [[2, -2, 0], [-1, 5, -1], [0, -2, 2]],
    6: [[6, -3, -2, 1], [-3, 6, 1, -2], [-2, 1, 6, -3], [1, -2, -3, 6]],
}
M_ORACLE = {2: [3, 3], 4: [6, 6, 6], 6: [24] * 4, 8: [12] * 4, 9: [24] * 3, 12: [48] * 6}
DET_ORACLE = {2: 3, 4: 12, 6: 576, 8: 48, 9: 72, 12: 73728}


@pytest.mark.parametrize("n", sorted(B_ORACLE))
def test_b_matrix_oracle(n):
    assert b_matrix(n).rows() == B_ORACLE[n]


@pytest.mark.parametrize("n", sorted(M_ORACLE))
def test_denominators_oracle(n):
    assert list(denominators(n)) == M_ORACLE[n]
    assert [denominator_clearer(n, t) for t in divisors(n)] == M_ORACLE[n]


@pytest.mark.parametrize("n", sorted(DET_ORACLE))
def test_determinant_oracle(n):
    assert determinant(b_matrix(n)) == DET_ORACLE[n]
    assert b_determinant_kronecker(n) == DET_ORACLE[n]
    assert omega_prime_bound(n) == DET_ORACLE[n]


@given(small_levels)
def test_kronecker_matches_direct(n):
    assert order_matrix(n).entries == order_matrix_direct(n).entries


@given(st.integers(1, 60))
def test_inverse_matches_sympy(n):
    inv = sympy_order_matrix(n).inv()
    ours = order_matrix_inverse(n)
    assert [[Fraction(int(x.p), int(x.q)) for x in row] for row in inv.tolist()] == ours.rows()


@given(small_levels)
def test_inverse_identities(n):
    assert is_identity(rational_matmul(order_matrix(n), order_matrix_inverse(n)))
    assert is_identity(rational_matmul(b_matrix(n), b_inverse(n)))


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 6))
def test_prime_power_blocks(p, n):
    A = order_matrix_prime_power(p, n)
    assert A.entries == order_matrix_direct(p**n).entries
    assert is_identity(rational_matmul(b_matrix(p**n), b_inverse_prime_power(p, n)))


def test_prime_power_rejects_bad_input():
    with pytest.raises(ValueError):
        order_matrix_prime_power(4, 2)
    with pytest.raises(ValueError):
        order_matrix_prime_power(2, 0)


@given(st.integers(2, 200))
def test_b_column_sums(n):
    B = b_matrix(n)
    for t in divisors(n):
        assert sum(B.column(t)) == column_sum_formula(n, t)


@given(st.integers(2, 200))
def test_c_matrix_is_diagonal_of_b_inverse_scaled(n):
    C = c_matrix(n)
    assert all(C.entries[i][j] == 0 for i in range(C.size) for j in range(C.size) if i != j)
    assert all(C.entries[i][i] > 0 for i in range(C.size))


def test_c_matrix_rejects_one():
    with pytest.raises(ValueError):
        c_matrix(1)


def test_serialisation():
    import json

    doc = json.loads(order_matrix_inverse(2).to_json())
    assert doc["rows"] == [["2/3", "-1/3"], ["-1/3", "2/3"]]
    assert "4 |" in b_matrix(4).pretty()
    assert isinstance(order_matrix(6).to_numpy(), np.ndarray)
