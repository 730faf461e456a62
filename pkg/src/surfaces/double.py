"""
Holomorphic double of a representation along one boundary component

The doubled group is generated by two copies j₀(Γ), j₁(Γ) glued along the base
boundary c and by one element xᵢ per remaining boundary; relations
j₀(c)j₁(c)⁻¹ and j₀(γᵢ)⁻¹ xᵢ j₁(γᵢ) xᵢ⁻¹.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from src.errors import RelationResidualError
from src.geometry.lagrangian import LagrangianFrame, SymplecticElement
from src.geometry.tubes import RTube, involution_matrix
from src.linalg import DEFAULT_TOLERANCES, ToleranceProfile
from src.surfaces.representation import Representation
from src.surfaces.words import FreeWord

logger = logging.getLogger(__name__)

RELATION_TOLERANCE = 1e-7


def peripheral_tube(rho: Representation, boundary, conjugator: FreeWord = None) -> RTube:
    """The tube 𝒴_{Λ⁻, Λ⁺} of a peripheral image"""
    data = rho.shilov(boundary, conjugator)
    return RTube(data.repel, data.attract)


@dataclass(frozen=True, eq=False)
class DoubleRepresentation:
    """Images of the doubled presentation; `images` maps generator names to matrices"""

    base: Representation
    boundary: int
    sigma: np.ndarray
    images: Dict[str, np.ndarray]
    relation_residuals: Dict[str, float]

    def j0(self, word: FreeWord) -> np.ndarray:
        """Dρ(j₀(w)) = ρ(w)"""
        return self.base.evaluate(word).matrix

    def j1(self, word: FreeWord) -> np.ndarray:
        """Dρ(j₁(w)) = σ_ρ ρ(w) σ_ρ"""
        return self.sigma @ self.base.evaluate(word).matrix @ self.sigma

    @property
    def worst_relation(self) -> Tuple[str, float]:
        return max(self.relation_residuals.items(), key=lambda item: item[1])


def double_representation(rho: Representation, boundary=0,
                          tol: ToleranceProfile = DEFAULT_TOLERANCES) -> DoubleRepresentation:
    """
    Build Dρ with σ_ρ the involution of the tube of ρ(c), c the base boundary

    Raises:
        RelationResidualError: some presentation relation misses Id by more than 1e-7
    """
    spec = rho.spec
    base_index = spec.boundary_index(boundary)
    sigma = involution_matrix(peripheral_tube(rho, base_index))
    identity = np.eye(2 * rho.n)

    images: Dict[str, np.ndarray] = {}
    for index, image in enumerate(rho.images, start=1):
        images[f"j0(g{index})"] = image.matrix
        images[f"j1(g{index})"] = sigma @ image.matrix @ sigma

    residuals: Dict[str, float] = {}
    c = rho.peripheral(base_index).matrix
    j1_c = sigma @ c @ sigma
    residuals[f"j0(c)j1(c)^-1 [{spec.boundary_names[base_index]}]"] = float(
        np.max(np.abs(c @ np.linalg.inv(j1_c) - identity)))

    for index in range(len(spec.peripherals)):
        if index == base_index:
            continue
        name = spec.boundary_names[index]
        gamma = rho.peripheral(index)
        x = involution_matrix(peripheral_tube(rho, index)) @ sigma
        images[f"x[{name}]"] = x
        relation = gamma.inverse().matrix @ x @ (sigma @ gamma.matrix @ sigma) @ np.linalg.inv(x)
        residuals[f"j0(g)^-1 x j1(g) x^-1 [{name}]"] = float(np.max(np.abs(relation - identity)))

    double = DoubleRepresentation(rho, base_index, sigma, images, residuals)
    worst_name, worst = double.worst_relation
    if worst > RELATION_TOLERANCE:
        raise RelationResidualError(f"Doubled relation {worst_name} has residual {worst:.3e}",
                                    relation=worst_name, residual=worst)
    logger.info(f"Double of {rho.label} along {spec.boundary_names[base_index]}: worst relation residual {worst:.3e}")
    return double


def doubled_ortho_element(double: DoubleRepresentation, delta_pair: Tuple[LagrangianFrame, LagrangianFrame]) -> SymplecticElement:
    """
    Dρ(Dα) = σ_δ σ_ρ for the orthotube α from the base boundary to the peripheral δ

    Args:
        double: Double along the boundary that α starts from
        delta_pair: (Λ⁺_δ, Λ⁻_δ) of the peripheral conjugate δ
    """
    attract, repel = delta_pair
    sigma_delta = involution_matrix(RTube(repel, attract))
    return SymplecticElement(sigma_delta @ double.sigma, check=False)
