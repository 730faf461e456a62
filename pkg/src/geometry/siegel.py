"""
Siegel-space operations: the action, cross-ratios, maximality, distances, normal forms

Key principles:
- Cross-ratios are computed from frames by two parallel projections, so l∞ is first-class
- Frames may be complex: a Siegel point Z is the complex Lagrangian (Z over Id)
- Every normalization goes through standardize_pair (a → 0, b → l∞)
"""

import logging
from itertools import combinations
from typing import List, Sequence, Tuple

import numpy as np

from src.errors import ConditioningError, NonMaximalError, NumericalFailureError
from src.geometry.lagrangian import (
    LagrangianFrame,
    SiegelPoint,
    SymplecticElement,
    WeylVector,
    require_same_rank,
    require_transverse,
    symplectic_form,
)
from src.linalg import (
    DEFAULT_TOLERANCES,
    ToleranceProfile,
    general_eigenvalues,
    is_positive_definite,
    solve_checked,
    sym_eigen,
    sym_inv_sqrt,
    symmetrize,
)

logger = logging.getLogger(__name__)

_IMAGINARY_RESIDUE = 1e-8


def act_on_siegel(g: SymplecticElement, Z: SiegelPoint, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> SiegelPoint:
    """(AZ+B)(CZ+D)⁻¹"""
    require_same_rank(g, Z)
    A, B, C, D = g.blocks
    numerator = A @ Z.Z + B
    denominator = C @ Z.Z + D
    # X·W = N  ⇔  Wᵀ·Xᵀ = Nᵀ
    image = solve_checked(denominator.T, numerator.T, tol, what="CZ+D").T
    image = 0.5 * (image + image.T)
    return SiegelPoint(image.real, image.imag, tol)


def act_on_lagrangian(g: SymplecticElement, l: LagrangianFrame) -> LagrangianFrame:
    require_same_rank(g, l)
    return LagrangianFrame(g.matrix @ l.frame, check=False)


def transverse(first: LagrangianFrame, second: LagrangianFrame, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
    """True iff [F₁ | F₂] has smallest singular value > pd_margin"""
    require_same_rank(first, second)
    return bool(np.linalg.svd(np.hstack([first.frame, second.frame]), compute_uv=False)[-1] > tol.pd_margin)


def frame_cross_ratio(F1, F2, F3, F4, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Cross-ratio of four (possibly complex, possibly stacked) frames

    Project each column of F1 onto span F4 parallel to span F3, then back onto
    span F1 parallel to span F2; the result is expressed in the basis F1.

    Args:
        F1, F2, F3, F4: Arrays of shape (..., 2n, n)
        tol: condition_cap guards both 2n×2n solves

    Returns:
        Array of shape (..., n, n)
    """
    F1, F2, F3, F4 = np.broadcast_arrays(*(np.asarray(F) for F in (F1, F2, F3, F4)))
    n = F1.shape[-1]
    first = np.concatenate([F4, F3], axis=-1)
    second = np.concatenate([F1, F2], axis=-1)
    for system, what in ((first, "[F4 | F3]"), (second, "[F1 | F2]")):
        condition = np.linalg.cond(system)
        if not np.all(np.isfinite(condition)) or np.max(condition) > tol.condition_cap:
            raise ConditioningError(f"Ill-conditioned cross-ratio system {what} (condition {np.max(condition):.3e})")
    along = np.linalg.solve(first, F1)
    projected = F4 @ along[..., :n, :]
    back = np.linalg.solve(second, projected)
    return back[..., :n, :]


def cross_ratio(l1: LagrangianFrame, l2: LagrangianFrame, l3: LagrangianFrame, l4: LagrangianFrame,
                tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Endomorphism R(l₁,l₂,l₃,l₄) of l₁, in the basis of l₁ (its chart frame when it has a chart)

    With all four charts it equals (X₁−X₂)⁻¹(X₄−X₂)(X₄−X₃)⁻¹(X₁−X₃).
    """
    require_transverse(l1, l2, tol, "l1, l2")
    require_transverse(l3, l4, tol, "l3, l4")
    return frame_cross_ratio(l1.basis, l2.basis, l3.basis, l4.basis, tol)


def chart_cross_ratio(X1, X2, X3, X4, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    """(X₁−X₂)⁻¹(X₄−X₂)(X₄−X₃)⁻¹(X₁−X₃) for charts (real or complex)"""
    X1, X2, X3, X4 = (np.atleast_2d(np.asarray(X)) for X in (X1, X2, X3, X4))
    left = solve_checked(X1 - X2, X4 - X2, tol, what="X1−X2")
    right = solve_checked(X4 - X3, X1 - X3, tol, what="X4−X3")
    return left @ right


def siegel_cross_ratio(F1, F2, F3, F4, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    """Complex cross-ratio of frames, arguments are LagrangianFrames or SiegelPoints (as Z) or raw frames"""
    return frame_cross_ratio(*(_complex_frame(F) for F in (F1, F2, F3, F4)), tol=tol)


def _complex_frame(item) -> np.ndarray:
    if isinstance(item, LagrangianFrame):
        return item.basis
    if isinstance(item, SiegelPoint):
        return item.frame()
    return np.asarray(item)


def real_spectrum(M: np.ndarray, tol: ToleranceProfile = DEFAULT_TOLERANCES, what: str = "cross-ratio") -> np.ndarray:
    """Eigenvalues of a matrix whose spectrum is known to be real, sorted descending"""
    values = general_eigenvalues(M, tol)
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    if values.size and np.max(np.abs(values.imag)) > _IMAGINARY_RESIDUE * scale:
        raise NumericalFailureError(f"{what} has non-real eigenvalues", matrix=M, eigenvalues=str(values.tolist()))
    return np.sort(values.real)[::-1]


def standardize_pair(a: LagrangianFrame, b: LagrangianFrame, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> SymplecticElement:
    """
    A symplectic element g with g·a = 0 and g·b = l∞

    Rescales b's frame so that Aᵀ J B′ = −Id; S = [B′ | A] is then symplectic
    and maps (0, l∞) to (a, b), so g = S⁻¹. The answer is unique up to the
    stabilizer of (0, l∞).
    """
    require_transverse(a, b, tol, "standardize_pair")
    n = a.n
    J = symplectic_form(n)
    A = a.frame
    pairing = A.T @ J @ b.frame
    B_scaled = b.frame @ (-solve_checked(pairing, np.eye(n), tol, what="symplectic pairing"))
    S = SymplecticElement(np.hstack([B_scaled, A]), check=False)
    return S.inverse()


def is_maximal_triple(l1: LagrangianFrame, l2: LagrangianFrame, l3: LagrangianFrame,
                      tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
    """Send l₁ to l∞ and l₂ to 0; maximal iff the chart of l₃ minus the chart of l₂ is PD"""
    for first, second in ((l1, l2), (l1, l3), (l2, l3)):
        require_transverse(first, second, tol, "maximality")
    g = standardize_pair(l2, l1, tol)
    image2 = act_on_lagrangian(g, l2)
    image3 = act_on_lagrangian(g, l3)
    if image2.chart is None or image3.chart is None:
        raise NumericalFailureError("Standardized Lagrangian lost its chart")
    return is_positive_definite(symmetrize(image3.chart - image2.chart), tol)


def is_maximal_tuple(lagrangians: Sequence[LagrangianFrame], tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
    """Every ordered triple i<j<k maximal"""
    for first, second in combinations(lagrangians, 2):
        require_transverse(first, second, tol, "maximal tuple")
    return all(is_maximal_triple(x, y, z, tol) for x, y, z in combinations(lagrangians, 3))


def vectorial_distance(Z1: SiegelPoint, Z2: SiegelPoint, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> WeylVector:
    """
    Weyl-chamber valued distance

    Components log((1+√r)/(1−√r)) for r the eigenvalues of R(Z₁, Z̄₂, Z₂, Z̄₁),
    which lie in [0, 1).
    """
    require_same_rank(Z1, Z2)
    R = frame_cross_ratio(Z1.frame(), Z2.conjugate_frame(), Z2.frame(), Z1.conjugate_frame(), tol)
    r = real_spectrum(R, tol, what="Siegel cross-ratio")
    slack = tol.slack(1.0)
    if np.any(r < -slack) or np.any(r > 1.0 - tol.pd_margin):
        raise NumericalFailureError(f"Siegel cross-ratio eigenvalues outside [0, 1): {r.tolist()}", matrix=R)
    r = np.clip(r, 0.0, None)
    return WeylVector.from_values(2.0 * np.arctanh(np.sqrt(r)), tol)


def riemannian_distance(Z1: SiegelPoint, Z2: SiegelPoint, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    return vectorial_distance(Z1, Z2, tol).riemannian


def finsler_distance(Z1: SiegelPoint, Z2: SiegelPoint, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    return vectorial_distance(Z1, Z2, tol).finsler


def normalize_maximal_4tuple(l1: LagrangianFrame, l2: LagrangianFrame, l3: LagrangianFrame, l4: LagrangianFrame,
                             tol: ToleranceProfile = DEFAULT_TOLERANCES) -> Tuple[SymplecticElement, np.ndarray]:
    """
    Normal form (−Id, −Λ, Λ, Id) of a maximal 4-tuple

    Returns:
        (g, Λ) with g·(l₁,l₂,l₃,l₄) = (−Id, −Λ, Λ, Id) and Λ diagonal, entries in (0, 1) descending
    """
    if not is_maximal_tuple([l1, l2, l3, l4], tol):
        raise NonMaximalError("normalize_maximal_4tuple requires a maximal 4-tuple")
    n = l1.n

    # (l₁, l₂, l₃, l₄) → (C, 0, D, l∞) with C negative definite and D positive definite
    g1 = standardize_pair(l2, l4, tol)
    C = act_on_lagrangian(g1, l1).chart
    D = act_on_lagrangian(g1, l3).chart

    # → (−Id, 0, D′, l∞)
    G = sym_inv_sqrt(-C, tol)
    h2 = SymplecticElement.block_diagonal(G)
    d, O = sym_eigen(symmetrize(G @ D @ G), tol)

    # → (−Id, 0, diag(d), l∞)
    h3 = SymplecticElement.block_diagonal(O.T)

    # per-coordinate Möbius map (−1, 0, dᵢ, ∞) → (−1, −λᵢ, λᵢ, 1)
    root = np.sqrt(1.0 + d)
    lam = (root - 1.0) / (root + 1.0)
    if np.any(lam <= tol.pd_margin) or np.any(lam >= 1.0 - tol.pd_margin):
        raise NumericalFailureError(f"Normal form eigenvalues outside (0, 1): {lam.tolist()}")
    alpha = (1.0 - lam) / 2.0
    scale = 1.0 / np.sqrt((1.0 - lam * lam) / 2.0)
    h4 = np.block([
        [np.diag(alpha * scale), np.diag(-lam * scale)],
        [np.diag(alpha * scale), np.diag(np.ones(n) * scale)],
    ])
    g = SymplecticElement(h4, check=False) @ h3 @ h2 @ g1
    logger.debug(f"normalize_maximal_4tuple: Λ = {lam.tolist()}")
    return g, np.diag(lam)


def positive_orientation(candidates: List[Tuple], tol: ToleranceProfile = DEFAULT_TOLERANCES):
    """First candidate tuple that is maximal, or None"""
    for candidate in candidates:
        if is_maximal_tuple(candidate, tol):
            return candidate
    return None
