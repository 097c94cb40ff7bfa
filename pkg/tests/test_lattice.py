import sympy
from hypothesis import given
from hypothesis import strategies as st

from etaforge.lattice import bareiss_determinant, identity, matmul, smith_decomposition, unimodular_inverse

square = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(square)
def test_bareiss_matches_sympy(m):
    assert bareiss_determinant(m) == sympy.Matrix(m).det()


@given(square)
def test_smith_decomposition(m):
    u, diag, v = smith_decomposition(m)
    n = len(m)
    prod = matmul(matmul(u, m), v)
    assert prod == [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)]
    assert abs(bareiss_determinant(u)) == 1 and abs(bareiss_determinant(v)) == 1
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    for a, b in zip(diag, diag[1:]):
        assert (b % a == 0) if a else b == 0
    assert matmul(u, unimodular_inverse(u)) == identity(n)


def test_smith_invariants_of_order_matrices():
    from etaforge.matrices import order_matrix

    for n, inv in {4: [1, 3, 6], 6: [1, 1, 24, 24], 12: [1, 1, 6, 24, 24, 48]}.items():
        assert smith_decomposition(order_matrix(n).entries)[1] == inv
