"""
Orthotubes between peripheral tubes, their vectorial lengths, and the θ-coordinate

In the chart where δ⁺ = 0 and δ⁻ = l∞ the γ endpoints are charts P, Q of the same
sign; the orthotube is 𝒴_{−A, A} with A = |P| # |Q|.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from src.errors import DomainError, NonMaximalError, NumericalFailureError
from src.geometry.lagrangian import LagrangianFrame, WeylVector
from src.geometry.siegel import act_on_lagrangian, cross_ratio, is_maximal_tuple, real_spectrum, standardize_pair, vectorial_distance
from src.geometry.tubes import RTube, intersect_tubes, tubes_orthogonal
from src.linalg import DEFAULT_TOLERANCES, ToleranceProfile, geometric_mean, is_positive_definite, logdet_pd
from src.surfaces.representation import Representation, ShilovData, shilov_data
from src.surfaces.words import FreeWord

logger = logging.getLogger(__name__)

CROSS_CHECK_TOLERANCE = 1e-6


def logcoth(x):
    """log coth x for x > 0, stable for large x"""
    x = np.asarray(x, dtype=float)
    q = np.exp(-2.0 * x)
    return np.log1p(q) - np.log1p(-q)


def lengths_from_eigenvalues(mu, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> WeylVector:
    """ℓᵢ = 2 arccoth(√μᵢ) for cross-ratio eigenvalues μᵢ > 1"""
    mu = np.asarray(mu, dtype=float)
    if np.any(mu <= 1.0 + tol.pd_margin):
        raise NumericalFailureError(f"Degenerate orthotube: cross-ratio eigenvalues {mu.tolist()} not above 1")
    return WeylVector.from_values(2.0 * np.arctanh(1.0 / np.sqrt(mu)), tol)


def orthotube_from_lagrangians(gamma_minus: LagrangianFrame, gamma_plus: LagrangianFrame,
                               delta_plus: LagrangianFrame, delta_minus: LagrangianFrame,
                               tol: ToleranceProfile = DEFAULT_TOLERANCES) -> RTube:
    """The unique tube orthogonal to 𝒴_{γ⁻,γ⁺} and 𝒴_{δ⁻,δ⁺}"""
    g = standardize_pair(delta_plus, delta_minus, tol)
    P = act_on_lagrangian(g, gamma_minus).chart
    Q = act_on_lagrangian(g, gamma_plus).chart
    if P is None or Q is None:
        raise NonMaximalError("Peripheral tubes share an endpoint")
    if is_positive_definite(-P, tol) and is_positive_definite(-Q, tol):
        A = geometric_mean(-P, -Q, tol)
    elif is_positive_definite(P, tol) and is_positive_definite(Q, tol):
        A = geometric_mean(P, Q, tol)
    else:
        raise NonMaximalError("Peripheral endpoints are not in a maximal configuration")

    back = g.inverse()
    tube = RTube(act_on_lagrangian(back, LagrangianFrame.from_chart(-A, tol)),
                 act_on_lagrangian(back, LagrangianFrame.from_chart(A, tol)))
    if not (tubes_orthogonal(tube, RTube(gamma_minus, gamma_plus), tol)
            and tubes_orthogonal(tube, RTube(delta_minus, delta_plus), tol)):
        raise NumericalFailureError("Orthotube fails the orthogonality check")
    return tube


def orient_pair(gamma: ShilovData, delta: ShilovData,
                tol: ToleranceProfile = DEFAULT_TOLERANCES) -> Tuple[LagrangianFrame, LagrangianFrame, bool]:
    """
    (δ⁺, δ⁻, swapped) such that (γ⁻, δ⁺, δ⁻, γ⁺) is maximal

    Swapping realizes replacing δ by δ⁻¹.
    """
    if is_maximal_tuple((gamma.repel, delta.attract, delta.repel, gamma.attract), tol):
        return delta.attract, delta.repel, False
    if is_maximal_tuple((gamma.repel, delta.repel, delta.attract, gamma.attract), tol):
        return delta.repel, delta.attract, True
    raise NonMaximalError("Neither orientation of δ gives a maximal configuration with γ")


def _peripheral_pair(rho: Representation, gamma: FreeWord, delta: FreeWord, tol: ToleranceProfile):
    if gamma == delta:
        raise DomainError(f"Orthotube needs two distinct peripheral elements, got {gamma} twice")
    return shilov_data(rho.evaluate(gamma), tol), shilov_data(rho.evaluate(delta), tol)


def orthotube_for_pair(rho: Representation, gamma: FreeWord, delta: FreeWord,
                       tol: ToleranceProfile = DEFAULT_TOLERANCES) -> RTube:
    """Orthotube between the tubes of ρ(γ) and ρ(δ)"""
    gamma_data, delta_data = _peripheral_pair(rho, gamma, delta, tol)
    delta_plus, delta_minus, _ = orient_pair(gamma_data, delta_data, tol)
    return orthotube_from_lagrangians(gamma_data.repel, gamma_data.attract, delta_plus, delta_minus, tol)


def orthotube_lengths(rho: Representation, gamma: FreeWord, delta: FreeWord,
                      tol: ToleranceProfile = DEFAULT_TOLERANCES, cross_check: bool = True) -> WeylVector:
    """
    ℓ^ā of the orthotube from the eigenvalues μ of R(γ⁻, δ⁺, δ⁻, γ⁺)

    With cross_check, the result is compared with the vectorial distance between
    the feet of the orthotube on both peripheral tubes.
    """
    gamma_data, delta_data = _peripheral_pair(rho, gamma, delta, tol)
    delta_plus, delta_minus, _ = orient_pair(gamma_data, delta_data, tol)
    mu = real_spectrum(cross_ratio(gamma_data.repel, delta_plus, delta_minus, gamma_data.attract, tol), tol)
    lengths = lengths_from_eigenvalues(mu, tol)

    if cross_check:
        tube = orthotube_from_lagrangians(gamma_data.repel, gamma_data.attract, delta_plus, delta_minus, tol)
        foot_gamma = intersect_tubes(tube, RTube(gamma_data.repel, gamma_data.attract), tol)
        foot_delta = intersect_tubes(tube, RTube(delta_minus, delta_plus), tol)
        distance = vectorial_distance(foot_gamma, foot_delta, tol)
        gap = float(np.max(np.abs(distance.as_array() - lengths.as_array())))
        if gap > CROSS_CHECK_TOLERANCE * max(1.0, lengths[0]):
            raise NumericalFailureError(f"Orthotube length cross-check failed (gap {gap:.3e})",
                                        lengths=list(lengths), distance=list(distance))
    return lengths


def theta_in_frame(gamma: ShilovData, l: LagrangianFrame, basepoint: Optional[LagrangianFrame] = None,
                   tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    """½ log det of the chart of l in coordinates where (Λ⁻, Λ⁺, basepoint) = (0, l∞, Id)"""
    g = standardize_pair(gamma.repel, gamma.attract, tol)
    chart = act_on_lagrangian(g, l).chart
    if chart is None or not is_positive_definite(chart, tol):
        raise DomainError("Lagrangian does not lie in the interval ((Λ⁻, Λ⁺))")
    value = 0.5 * logdet_pd(chart)
    if basepoint is not None:
        base_chart = act_on_lagrangian(g, basepoint).chart
        if base_chart is None or not is_positive_definite(base_chart, tol):
            raise DomainError("Basepoint does not lie in the interval ((Λ⁻, Λ⁺))")
        value -= 0.5 * logdet_pd(base_chart)
    return float(value)


def theta_coordinate(rho: Representation, gamma: FreeWord, l: LagrangianFrame, basepoint: LagrangianFrame,
                     tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    """θ(l) relative to the basepoint along the tube of ρ(γ)"""
    return theta_in_frame(shilov_data(rho.evaluate(gamma), tol), l, basepoint, tol)
