"""
Dense linear-algebra kernel for small matrices (dimension ≤ 2n, n ≤ 6)

- Symmetric eigenproblems: cyclic Jacobi rotations, deterministic sweep order
- General (complex) eigenvalues: Hessenberg reduction + Wilkinson-shifted QR
- PD tests with a strict margin, symmetric square roots, matrix geometric mean
"""

import logging
from typing import List, Tuple

import numpy as np
import scipy.linalg

from src.errors import ConditioningError, DomainError, NumericalFailureError, SymmetryViolationError
from src.linalg.tolerance import DEFAULT_TOLERANCES, ToleranceProfile

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps
_JACOBI_TARGET = 1e-14
_JACOBI_MAX_SWEEPS = 60
_QR_ITERATIONS_PER_EIGENVALUE = 60


def as_matrix(M, name: str = "matrix", dtype=float) -> np.ndarray:
    """Convert to a finite 2-D array or raise DomainError"""
    array = np.array(M, dtype=dtype)
    if array.ndim != 2:
        raise DomainError(f"{name} must be 2-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} has non-finite entries")
    return array


def _require_square(M: np.ndarray, name: str = "matrix"):
    if M.shape[0] != M.shape[1]:
        raise DomainError(f"{name} must be square, got shape {M.shape}")


def symmetrize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.T)


def check_symmetric(M: np.ndarray, tol: ToleranceProfile = DEFAULT_TOLERANCES):
    """Raise SymmetryViolationError when ‖M − Mᵀ‖ exceeds residual_abs (scaled by ‖M‖ ≥ 1)"""
    asymmetry = np.max(np.abs(M - M.T)) if M.size else 0.0
    if asymmetry > tol.residual_abs * max(1.0, np.max(np.abs(M))):
        raise SymmetryViolationError(f"Matrix is not symmetric (asymmetry {asymmetry:.3e})", matrix=M.tolist())


def sym_eigen(M, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps

    Args:
        M: Symmetric matrix
        tol: Tolerance profile

    Returns:
        (eigenvalues sorted descending, orthogonal matrix of eigenvectors as columns)
    """
    A = as_matrix(M, "symmetric matrix")
    _require_square(A)
    check_symmetric(A, tol)
    A = symmetrize(A)
    n = A.shape[0]
    V = np.eye(n)

    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V

    target = _JACOBI_TARGET * scale
    for sweep in range(_JACOBI_MAX_SWEEPS):
        off = np.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= _EPS * target:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 if theta == 0.0 else np.sign(theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rotation = np.array([[c, s], [-s, c]])
                pair = [p, q]
                A[:, pair] = A[:, pair] @ rotation
                A[pair, :] = rotation.T @ A[pair, :]
                A[p, q] = A[q, p] = 0.0
                V[:, pair] = V[:, pair] @ rotation

    off = np.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
    if off > tol.residual_abs * scale:
        raise NumericalFailureError(f"Jacobi sweeps did not converge (off-diagonal {off:.3e})", matrix=M)

    eigenvalues = np.diag(A).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    V = V[:, order]

    # deterministic sign: largest component of each eigenvector is positive
    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivots, np.arange(n)])
    signs[signs == 0] = 1.0
    return eigenvalues, V * signs


def is_positive_definite(M, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
    """True iff the smallest eigenvalue exceeds pd_margin"""
    A = as_matrix(M, "symmetric matrix")
    _require_square(A)
    check_symmetric(A, tol)
    if A.shape[0] == 0:
        return True
    try:
        np.linalg.cholesky(symmetrize(A) - tol.pd_margin * np.eye(A.shape[0]))
    except np.linalg.LinAlgError:
        return False
    return True


def min_eigenvalue(M, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    return float(sym_eigen(M, tol)[0][-1])


def sym_sqrt(M, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    """Symmetric positive definite square root"""
    if not is_positive_definite(M, tol):
        raise DomainError("Square root requires a positive definite matrix", matrix=np.asarray(M).tolist())
    eigenvalues, V = sym_eigen(M, tol)
    return symmetrize((V * np.sqrt(eigenvalues)) @ V.T)


def sym_inv_sqrt(M, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    if not is_positive_definite(M, tol):
        raise DomainError("Inverse square root requires a positive definite matrix", matrix=np.asarray(M).tolist())
    eigenvalues, V = sym_eigen(M, tol)
    return symmetrize((V / np.sqrt(eigenvalues)) @ V.T)


def geometric_mean(A, B, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    A # B = A^½ (A^-½ B A^-½)^½ A^½, the unique PD solution of Y A⁻¹ Y = B

    Congruence-equivariant: G(A # B)Gᵀ = (GAGᵀ) # (GBGᵀ).
    """
    root = sym_sqrt(A, tol)
    inv_root = sym_inv_sqrt(A, tol)
    middle = sym_sqrt(symmetrize(inv_root @ np.asarray(B, dtype=float) @ inv_root), tol)
    return symmetrize(root @ middle @ root)


def logdet_pd(M) -> float:
    """log det of a PD matrix through its Cholesky factor"""
    factor = np.linalg.cholesky(symmetrize(np.asarray(M, dtype=float)))
    return float(2.0 * np.sum(np.log(np.diag(factor))))


def solve_checked(A, B, tol: ToleranceProfile = DEFAULT_TOLERANCES, what: str = "system") -> np.ndarray:
    """np.linalg.solve guarded by condition_cap"""
    condition = np.linalg.cond(A)
    if not np.isfinite(condition) or condition > tol.condition_cap:
        raise ConditioningError(f"Ill-conditioned {what} (condition {condition:.3e})", matrix=A)
    return np.linalg.solve(A, B)


def _eigs_2x2(block: np.ndarray) -> List[complex]:
    a, b, c, d = block[0, 0], block[0, 1], block[1, 0], block[1, 1]
    half = 0.5 * (a + d)
    det = a * d - b * c
    root = np.sqrt(complex(half * half - det))
    first = half + root if abs(half + root) >= abs(half - root) else half - root
    second = det / first if first != 0 else half - root
    return [complex(first), complex(second)]


def _wilkinson_shift(window: np.ndarray) -> complex:
    first, second = _eigs_2x2(window[-2:, -2:])
    corner = window[-1, -1]
    return first if abs(first - corner) <= abs(second - corner) else second


def general_eigenvalues(M, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Eigenvalues of a real or complex square matrix

    Hessenberg reduction followed by shifted QR on the trailing unreduced
    block; 1×1 and 2×2 blocks are deflated in closed form.

    Returns:
        Complex array sorted by descending modulus (ties: real part, then imaginary part)
    """
    original = np.asarray(M)
    is_real = not np.iscomplexobj(original)
    A = as_matrix(original, "matrix", dtype=complex)
    _require_square(A)
    n = A.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)

    H = scipy.linalg.hessenberg(A)
    norm = np.linalg.norm(H) or 1.0
    eigenvalues: List[complex] = []
    limit = _QR_ITERATIONS_PER_EIGENVALUE * n
    iterations = 0
    stalled = 0
    hi = n
    while hi > 0:
        lo = hi - 1
        while lo > 0:
            local = abs(H[lo, lo]) + abs(H[lo - 1, lo - 1])
            if abs(H[lo, lo - 1]) <= _EPS * (local if local > 0 else norm):
                H[lo, lo - 1] = 0.0
                break
            lo -= 1

        size = hi - lo
        if size <= 2:
            eigenvalues.extend([complex(H[lo, lo])] if size == 1 else _eigs_2x2(H[lo:hi, lo:hi]))
            hi = lo
            stalled = 0
            continue

        if iterations >= limit:
            raise NumericalFailureError(
                f"Shifted QR did not converge after {iterations} iterations", matrix=original
            )
        window = H[lo:hi, lo:hi]
        if stalled and stalled % 10 == 0:
            shift = window[-1, -1] + abs(window[-1, -2]) * (0.75 + 0.5j)
        else:
            shift = _wilkinson_shift(window)
        identity = np.eye(size)
        q, r = scipy.linalg.qr(window - shift * identity)
        H[lo:hi, lo:hi] = r @ q + shift * identity
        iterations += 1
        stalled += 1

    values = np.array(eigenvalues, dtype=complex)
    if is_real:
        values.imag[np.abs(values.imag) <= 1e3 * _EPS * norm] = 0.0

    # residual sanity check: M − λ·Id must be (numerically) singular
    for value in values:
        sigma = np.linalg.svd(A - value * np.eye(n), compute_uv=False)[-1]
        if sigma > 1e-6 * norm:
            raise NumericalFailureError(f"Eigenvalue {value} fails the residual check ({sigma:.3e})", matrix=original)

    order = np.lexsort((-values.imag, -values.real, -np.abs(values)))
    logger.debug(f"general_eigenvalues: n={n}, {iterations} QR iterations")
    return values[order]
