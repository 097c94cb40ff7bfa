"""Exact computations with holomorphic eta quotients on Gamma_0(N)."""

from .config import DEFAULT_GUARDS, Guards, load_guards
from .enumeration import GuardError, enumerate_by_weight, parallelepiped_points
from .eta import EtaQuotient, is_holomorphic, order_vector, q_expansion
from .factor import (
    factorizable_on,
    is_quasi_irreducible,
    k_max,
    k_min,
    nonfactorizable_census,
)
from .matrices import b_matrix, order_matrix, order_matrix_inverse
from .numtheory import divisor_basis, factorize, kappa

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GUARDS",
    "EtaQuotient",
    "GuardError",
    "Guards",
    "b_matrix",
    "divisor_basis",
    "enumerate_by_weight",
    "factorizable_on",
    "factorize",
    "is_holomorphic",
    "is_quasi_irreducible",
    "k_max",
    "k_min",
    "kappa",
    "load_guards",
    "nonfactorizable_census",
    "order_matrix",
    "order_matrix_inverse",
    "order_vector",
    "parallelepiped_points",
    "q_expansion",
]
