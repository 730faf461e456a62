"""
Surface-group representations into Sp(2n,ℝ) and Shilov-hyperbolic data

Key principles:
- A representation is fixed by its generator images; words are evaluated left to right
- Every peripheral image must be Shilov hyperbolic (checked at construction)
- Λ± come from an ordered real Schur decomposition split at modulus 1
"""

import logging
from dataclasses import dataclass
from typing import Dict, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.errors import DomainError, NotShilovHyperbolicError
from src.geometry.lagrangian import LagrangianFrame, SymplecticElement, WeylVector, symplectic_form
from src.geometry.siegel import act_on_lagrangian, cross_ratio, transverse
from src.linalg import DEFAULT_TOLERANCES, ToleranceProfile, general_eigenvalues
from src.surfaces.words import PAIR_OF_PANTS, FreeWord, SurfaceSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ShilovData:
    """Attracting and repelling fixed Lagrangians of a Shilov-hyperbolic element"""

    attract: LagrangianFrame
    repel: LagrangianFrame
    top_moduli: Tuple[float, ...]


class TranslationLengths(NamedTuple):
    vectorial: WeylVector
    finsler: float
    riemannian: float


def _invariant_subspace(matrix: np.ndarray, sort: str, n: int) -> np.ndarray:
    T, Z, sdim = scipy.linalg.schur(matrix, output="real", sort=sort)
    if sdim != n:
        raise NotShilovHyperbolicError(
            f"Invariant subspace for '{sort}' has dimension {sdim}, expected {n}", matrix=matrix.tolist()
        )
    return Z[:, :n]


def shilov_data(g: SymplecticElement, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> ShilovData:
    """
    Λ⁺ (generalized eigenspaces with |λ| > 1) and Λ⁻ (|λ| < 1) of g

    Raises:
        NotShilovHyperbolicError: some |λ| lies within tolerance of 1, or Λ± are not transverse
    """
    n = g.n
    moduli = np.sort(np.abs(general_eigenvalues(g.matrix, tol)))[::-1]
    threshold = tol.slack(1.0)
    if np.any(np.abs(moduli - 1.0) <= threshold):
        raise NotShilovHyperbolicError("Element has eigenvalues on the unit circle",
                                       moduli=moduli.tolist())

    scale = max(1.0, float(np.linalg.norm(g.matrix)))
    J = symplectic_form(n)
    frames = []
    for sort in ("ouc", "iuc"):
        F = _invariant_subspace(g.matrix, sort, n)
        isotropy = np.linalg.norm(F.T @ J @ F)
        image = g.matrix @ F
        invariance = np.linalg.norm(image - F @ (F.T @ image)) / scale
        if isotropy > tol.slack(scale) or invariance > tol.slack(1.0):
            raise NotShilovHyperbolicError(
                f"Fixed subspace check failed (isotropy {isotropy:.3e}, invariance {invariance:.3e})"
            )
        frames.append(LagrangianFrame(F, check=False))

    attract, repel = frames
    if not transverse(attract, repel, tol):
        raise NotShilovHyperbolicError("Attracting and repelling Lagrangians are not transverse")
    return ShilovData(attract=attract, repel=repel, top_moduli=tuple(float(m) for m in moduli[:n]))


def translation_lengths(g: SymplecticElement, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> TranslationLengths:
    """ℓ^ā = (2 log aᵢ), ℓ^F = Σ log aᵢ, ℓ^R = 2√Σ log² aᵢ for the top moduli aᵢ"""
    logs = np.log(np.array(shilov_data(g, tol).top_moduli))
    return TranslationLengths(
        vectorial=WeylVector.from_values(2.0 * logs, tol),
        finsler=float(np.sum(logs)),
        riemannian=float(2.0 * np.sqrt(np.sum(logs ** 2))),
    )


def corollary_width(ell_R: float, n: int) -> float:
    """w = √n · arccoth(exp(ℓ^R / 2√n))"""
    if not ell_R > 0:
        raise DomainError(f"Width requires a positive Riemannian length, got {ell_R}")
    if n < 1:
        raise DomainError(f"Rank must be positive, got {n}")
    root = np.sqrt(n)
    return float(root * np.arctanh(np.exp(-ell_R / (2.0 * root))))


def labourie_cross_ratio(x: LagrangianFrame, y: LagrangianFrame, z: LagrangianFrame, t: LagrangianFrame,
                         tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    """B(x, y, z, t) = det R(x, t, y, z)"""
    return float(np.linalg.det(cross_ratio(x, t, y, z, tol)))


def period(g: SymplecticElement, y: LagrangianFrame, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> float:
    """ℓ_B(g) = log |B(Λ⁻, g·y, Λ⁺, y)|, equal to 2ℓ^F(g)"""
    data = shilov_data(g, tol)
    return float(np.log(abs(labourie_cross_ratio(data.repel, act_on_lagrangian(g, y), data.attract, y, tol))))


class Representation:
    """
    Representation of a marked surface group into Sp(2n,ℝ)

    Args:
        images: One symplectic element per free generator
        spec: Surface spec (pair of pants)
        tol: Tolerance profile
        label: Human-readable builder description
    """

    def __init__(
        self,
        images: Sequence[SymplecticElement],
        spec: SurfaceSpec = PAIR_OF_PANTS,
        tol: ToleranceProfile = DEFAULT_TOLERANCES,
        label: str = "explicit"
    ):
        images = tuple(images)
        if len(images) != spec.rank:
            raise DomainError(f"Expected {spec.rank} generator images, got {len(images)}")
        ranks = {image.n for image in images}
        if len(ranks) != 1:
            raise DomainError(f"Generator images have different ranks: {sorted(ranks)}")

        self.images = images
        self.inverses = tuple(image.inverse() for image in images)
        self.spec = spec
        self.tol = tol
        self.label = label
        self.n = ranks.pop()
        self._shilov: Dict[Tuple, ShilovData] = {}

        for index in range(len(spec.peripherals)):
            self.shilov(index)

        logger.debug(f"Representation '{label}' built: n={self.n}, generators={len(images)}")

    def letter(self, generator: int, exponent: int) -> SymplecticElement:
        if not 1 <= generator <= len(self.images):
            raise DomainError(f"Generator g{generator} out of range")
        return self.images[generator - 1] if exponent == 1 else self.inverses[generator - 1]

    def evaluate(self, word: FreeWord) -> SymplecticElement:
        """Ordered product of images and inverses"""
        result = np.eye(2 * self.n)
        for generator, exponent in word.letters:
            result = result @ self.letter(generator, exponent).matrix
        return SymplecticElement(result, check=False)

    def peripheral(self, boundary) -> SymplecticElement:
        return self.evaluate(self.spec.peripheral(boundary))

    def boundary_word(self, boundary, conjugator: Optional[FreeWord] = None) -> FreeWord:
        word = self.spec.peripheral(boundary)
        return word.conjugate(conjugator) if conjugator is not None else word

    def shilov(self, boundary, conjugator: Optional[FreeWord] = None) -> ShilovData:
        """Shilov data of (conjugator · γ_b · conjugator⁻¹), cached per word"""
        index = self.spec.boundary_index(boundary)
        key = (index, conjugator.letters if conjugator is not None else ())
        if key not in self._shilov:
            try:
                self._shilov[key] = shilov_data(self.evaluate(self.boundary_word(index, conjugator)), self.tol)
            except NotShilovHyperbolicError as error:
                error.context["boundary"] = self.spec.boundary_names[index]
                raise
        return self._shilov[key]

    def translation_lengths(self, boundary, conjugator: Optional[FreeWord] = None) -> TranslationLengths:
        return translation_lengths(self.evaluate(self.boundary_word(boundary, conjugator)), self.tol)

    def __repr__(self):
        return f"Representation(label={self.label!r}, n={self.n})"
