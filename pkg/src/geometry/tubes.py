"""
ℝ-tube calculus

Every operation transports the tube to the standard tube 𝒴_{0,l∞} = {iY | Y PD}
with standardize_pair, works there, and transports back.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.errors import DisjointTubesError, DomainError, NonMaximalError, NumericalFailureError, TransversalityError
from src.geometry.lagrangian import (
    LagrangianFrame,
    SiegelPoint,
    SymplecticElement,
    WeylVector,
    require_same_rank,
    require_transverse,
)
from src.geometry.siegel import (
    act_on_lagrangian,
    act_on_siegel,
    cross_ratio,
    is_maximal_tuple,
    real_spectrum,
    siegel_cross_ratio,
    standardize_pair,
)
from src.linalg import (
    DEFAULT_TOLERANCES,
    ToleranceProfile,
    geometric_mean,
    is_positive_definite,
    logdet_pd,
    sym_eigen,
    sym_inv_sqrt,
    symmetrize,
)

logger = logging.getLogger(__name__)

MEMBERSHIP_TOLERANCE = 1e-7
ORTHOGONALITY_TOLERANCE = 1e-7


@dataclass(frozen=True)
class RTube:
    """The ℝ-tube 𝒴_{first, second}; endpoints unordered as a set, ordered for bookkeeping"""

    first: LagrangianFrame
    second: LagrangianFrame

    def __post_init__(self):
        require_transverse(self.first, self.second, what="tube endpoints")

    @property
    def n(self) -> int:
        return self.first.n

    @cached_property
    def transport(self) -> SymplecticElement:
        """g with g·first = 0 and g·second = l∞"""
        return standardize_pair(self.first, self.second)

    def reversed(self) -> "RTube":
        return RTube(self.second, self.first)

    def same_as(self, other: "RTube", tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
        """Equal as unordered pairs"""
        return ((self.first.same_as(other.first, tol) and self.second.same_as(other.second, tol))
                or (self.first.same_as(other.second, tol) and self.second.same_as(other.first, tol)))

    @classmethod
    def standard(cls, n: int) -> "RTube":
        return cls(LagrangianFrame.from_chart(np.zeros((n, n))), LagrangianFrame.infinity(n))


@dataclass(frozen=True, eq=False)
class TubeSplitCoords:
    """ℝ × SL(n,ℝ)/SO(n) coordinates of a point of the standard tube"""

    euclid: float
    sl_part: np.ndarray

    def __post_init__(self):
        det = float(np.linalg.det(self.sl_part))
        if abs(det - 1.0) > DEFAULT_TOLERANCES.slack(1.0):
            raise DomainError(f"SL part must have determinant 1, got {det}")


def contains_point(tube: RTube, Z: SiegelPoint, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
    """R(a, Z, Z̄, b) = −Id"""
    require_same_rank(tube.first, Z)
    R = siegel_cross_ratio(tube.first, Z.frame(), Z.conjugate_frame(), tube.second, tol)
    return bool(np.max(np.abs(R + np.eye(Z.n))) < MEMBERSHIP_TOLERANCE)


def tubes_orthogonal(t1: RTube, t2: RTube, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
    """Orient the endpoints so that (a, c, b, d) is maximal, then test R(a, c, b, d) = 2·Id"""
    a, b, c, d = t1.first, t1.second, t2.first, t2.second
    for tuple_ in ((a, c, b, d), (a, d, b, c), (b, c, a, d), (b, d, a, c)):
        try:
            maximal = is_maximal_tuple(tuple_, tol)
        except TransversalityError:
            return False
        if maximal:
            R = cross_ratio(*tuple_, tol=tol)
            return bool(np.max(np.abs(R - 2.0 * np.eye(t1.n))) < ORTHOGONALITY_TOLERANCE)
    return False


def orthogonality_residual(t1: RTube, t2: RTube, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    """‖R(a, c, b, d) − 2Id‖ for the maximal orientation (inf if none exists)"""
    a, b, c, d = t1.first, t1.second, t2.first, t2.second
    for tuple_ in ((a, c, b, d), (a, d, b, c), (b, c, a, d), (b, d, a, c)):
        if is_maximal_tuple(tuple_, tol):
            return float(np.linalg.norm(cross_ratio(*tuple_, tol=tol) - 2.0 * np.eye(t1.n)))
    return float("inf")


def intersect_tubes(t1: RTube, t2: RTube, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> SiegelPoint:
    """
    The unique common point of two tubes with interleaving endpoints

    In the chart where t1 = 𝒴_{0,l∞} the endpoints of t2 are P > 0 > Q (or the
    reverse) and the intersection is i·(P # −Q).
    """
    g = t1.transport
    P = act_on_lagrangian(g, t2.first).chart
    Q = act_on_lagrangian(g, t2.second).chart
    if P is None or Q is None:
        raise DisjointTubesError("Tubes share an endpoint")
    if is_positive_definite(P, tol) and is_positive_definite(-Q, tol):
        Y = geometric_mean(P, -Q, tol)
    elif is_positive_definite(-P, tol) and is_positive_definite(Q, tol):
        Y = geometric_mean(Q, -P, tol)
    else:
        raise DisjointTubesError("Tube endpoints do not interleave")

    point = act_on_siegel(g.inverse(), SiegelPoint.imaginary(Y, tol), tol)
    if not (contains_point(t1, point, tol) and contains_point(t2, point, tol)):
        raise NumericalFailureError("Intersection point fails the membership check", Y=Y.tolist())
    return point


def involution_matrix(tube: RTube) -> np.ndarray:
    """
    σ_{a,b}: −1 on the first endpoint, +1 on the second

    Conjugate of diag(Id, −Id) by the transport; independent of the
    stabilizer choice since diag(A, A^-T) commutes with diag(Id, −Id).
    """
    g = tube.transport
    n = tube.n
    reflection = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    return g.inverse().matrix @ reflection @ g.matrix


def reflect_lagrangian(tube: RTube, l: LagrangianFrame) -> LagrangianFrame:
    """σ_{a,b} applied to a Lagrangian"""
    return LagrangianFrame(involution_matrix(tube) @ l.frame, check=False)


def _oriented_chart(tube: RTube, l: LagrangianFrame, tol: ToleranceProfile):
    """Transport g sending one endpoint to 0 and the other to l∞ so that the chart of g·l is PD"""
    a, b = tube.first, tube.second
    if is_maximal_tuple((a, l, b), tol):
        g = tube.transport
    elif is_maximal_tuple((b, l, a), tol):
        g = standardize_pair(b, a, tol)
    else:
        raise NonMaximalError("Lagrangian does not lie between the tube endpoints")
    return g, act_on_lagrangian(g, l).chart


def project_lagrangian(tube: RTube, l: LagrangianFrame, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> SiegelPoint:
    """Orthogonal projection p_{a,b}(l) of a Lagrangian in ((a, b)) onto the tube"""
    g, A = _oriented_chart(tube, l, tol)
    return act_on_siegel(g.inverse(), SiegelPoint.imaginary(A, tol), tol)


def projected_vectorial_distance(tube: RTube, x: LagrangianFrame, y: LagrangianFrame,
                                 tol: ToleranceProfile = DEFAULT_TOLERANCES) -> WeylVector:
    """(log μ₁, …, log μ_n) for μ the eigenvalues of R(a, x, y, b)"""
    if x.same_as(y, tol):
        return WeylVector.zero(x.n)
    a, b = tube.first, tube.second
    for tuple_ in ((a, x, y, b), (a, y, x, b), (b, x, y, a), (b, y, x, a)):
        if is_maximal_tuple(tuple_, tol):
            mu = real_spectrum(cross_ratio(*tuple_, tol=tol), tol)
            if np.any(mu <= 0):
                raise NumericalFailureError(f"Non-positive cross-ratio eigenvalues {mu.tolist()}")
            return WeylVector.from_values(np.log(mu), tol)
    raise NonMaximalError("Lagrangians do not lie between the tube endpoints")


def product_split(Z: SiegelPoint, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> TubeSplitCoords:
    """iY ↦ (log det Y / √n, Y / det(Y)^{1/n})"""
    if not Z.on_standard_tube(tol):
        raise DomainError("product_split requires a point of the standard tube 𝒴_{0,l∞}")
    n = Z.n
    logdet = logdet_pd(Z.Y)
    return TubeSplitCoords(euclid=logdet / np.sqrt(n), sl_part=symmetrize(Z.Y * np.exp(-logdet / n)))


def is_causal_pair(Z1: SiegelPoint, Z2: SiegelPoint, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
    """iA → iB is causal iff B − A is PD"""
    if not (Z1.on_standard_tube(tol) and Z2.on_standard_tube(tol)):
        raise DomainError("is_causal_pair requires points of the standard tube 𝒴_{0,l∞}")
    return is_positive_definite(symmetrize(Z2.Y - Z1.Y), tol)


def sl_distance(X: np.ndarray, Y: np.ndarray, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    """Riemannian distance on SL(n,ℝ)/SO(n): √Σ log² of the eigenvalues of Y^-½ X Y^-½"""
    root = sym_inv_sqrt(Y, tol)
    eigenvalues, _ = sym_eigen(symmetrize(root @ np.asarray(X, dtype=float) @ root), tol)
    return float(np.sqrt(np.sum(np.log(eigenvalues) ** 2)))
