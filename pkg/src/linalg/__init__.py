# Linear-algebra kernel
from .tolerance import DEFAULT_TOLERANCES, ToleranceProfile
from .kernel import (
    as_matrix,
    general_eigenvalues,
    geometric_mean,
    is_positive_definite,
    logdet_pd,
    min_eigenvalue,
    solve_checked,
    sym_eigen,
    sym_inv_sqrt,
    sym_sqrt,
    symmetrize,
)

__all__ = [
    "DEFAULT_TOLERANCES",
    "ToleranceProfile",
    "as_matrix",
    "general_eigenvalues",
    "geometric_mean",
    "is_positive_definite",
    "logdet_pd",
    "min_eigenvalue",
    "solve_checked",
    "sym_eigen",
    "sym_inv_sqrt",
    "sym_sqrt",
    "symmetrize",
]
