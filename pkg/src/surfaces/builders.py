"""
Representation builders

- Fuchsian pair of pants with prescribed cuff lengths (n = 1)
- Diagonal embedding SL(2,ℝ) → Sp(2n,ℝ), optionally twisted by O(n) per generator
- Block products of n Fuchsian factors
- Explicit generator matrices
- Right-angled hexagon relations used to design cuffs with a prescribed orthogeodesic
"""

import logging
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from src.errors import BuilderError, DomainError, NotShilovHyperbolicError
from src.geometry.lagrangian import SymplecticElement
from src.geometry.siegel import is_maximal_tuple
from src.linalg import DEFAULT_TOLERANCES, ToleranceProfile
from src.surfaces.representation import Representation
from src.surfaces.words import PAIR_OF_PANTS, SurfaceSpec

logger = logging.getLogger(__name__)

_BRACKET_LIMIT = 60.0


def peripherals_positively_oriented(rho: Representation, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
    """(Λ⁻_c, Λ⁺_d, Λ⁻_d, Λ⁺_c) maximal for every ordered pair of distinct peripherals"""
    count = len(rho.spec.peripherals)
    for c in range(count):
        for d in range(count):
            if c == d:
                continue
            own, other = rho.shilov(c), rho.shilov(d)
            if not is_maximal_tuple((own.repel, other.attract, other.repel, own.attract), tol):
                return False
    return True


def _validate_cuffs(cuffs: Sequence[float]) -> Tuple[float, float, float]:
    if len(cuffs) != 3:
        raise BuilderError(f"A pair of pants needs 3 cuff lengths, got {len(cuffs)}")
    values = tuple(float(c) for c in cuffs)
    if not all(np.isfinite(c) and c > 0 for c in values):
        raise BuilderError(f"Cuff lengths must be positive and finite, got {values}", cuffs=list(values))
    return values


def build_pair_of_pants_fuchsian(cuffs: Sequence[float], tol: ToleranceProfile = DEFAULT_TOLERANCES) -> Representation:
    """
    Fuchsian pair of pants with cuff lengths (ℓ₀, ℓ₁, ℓ₂)

    A = [[m, 1], [0, 1/m]] (m = e^{ℓ₁/2}), B = [[p, 0], [q, 1/p]] (p = e^{ℓ₂/2}),
    q fixed by tr(AB) = ∓2cosh(ℓ₀/2); the sign whose peripherals are
    positively oriented is kept.
    """
    l0, l1, l2 = _validate_cuffs(cuffs)
    m = np.exp(l1 / 2.0)
    p = np.exp(l2 / 2.0)
    A = np.array([[m, 1.0], [0.0, 1.0 / m]])

    for sign in (1.0, -1.0):
        q = -2.0 * sign * np.cosh(l0 / 2.0) - m * p - 1.0 / (m * p)
        B = np.array([[p, 0.0], [q, 1.0 / p]])
        try:
            rho = Representation([SymplecticElement(A, tol), SymplecticElement(B, tol)], PAIR_OF_PANTS, tol,
                                 label=f"fuchsian{(l0, l1, l2)}")
        except NotShilovHyperbolicError:
            continue
        if peripherals_positively_oriented(rho, tol):
            logger.info(f"Fuchsian pair of pants built: cuffs=({l0}, {l1}, {l2}), tr(AB) sign={-sign:+.0f}")
            return rho

    raise BuilderError(f"No trace sign gives a positively oriented pair of pants for cuffs {(l0, l1, l2)}",
                       cuffs=[l0, l1, l2])


def hexagon_ortho_length(cuffs: Sequence[float], i: int, j: int) -> float:
    """
    Length of the orthogeodesic between distinct cuffs i and j of a hyperbolic pair of pants

    cosh ℓ = (cosh(ℓ_k/2) + cosh(ℓ_i/2) cosh(ℓ_j/2)) / (sinh(ℓ_i/2) sinh(ℓ_j/2))
    """
    values = _validate_cuffs(cuffs)
    if i == j or {i, j} - {0, 1, 2}:
        raise DomainError(f"Need two distinct cuff indices, got ({i}, {j})")
    k = ({0, 1, 2} - {i, j}).pop()
    a, b, c = values[i] / 2.0, values[j] / 2.0, values[k] / 2.0
    return float(np.arccosh((np.cosh(c) + np.cosh(a) * np.cosh(b)) / (np.sinh(a) * np.sinh(b))))


def ortho_target_length(L: float, eps: float) -> float:
    """g(L, ε) = log((e^{(L−ε)/2} + 1) / (e^{(L−ε)/2} − 1)), the length with 2 logcoth(g/2) = L − ε"""
    if not 0 < eps < L:
        raise BuilderError(f"Need 0 < ε < L, got L={L}, ε={eps}", L=L, eps=eps)
    return float(2.0 * np.arctanh(np.exp(-(L - eps) / 2.0)))


def solve_cuff_for_target_ortho(
    L: float,
    eps: float,
    free_cuff: Optional[float] = None,
    position: int = 1
) -> Tuple[float, float, float]:
    """
    Cuff lengths (ℓ₀, ℓ₁, ℓ₂) with ℓ₀ = L whose orthogeodesic between γ₀ and γ_position has length g(L, ε)

    Solves cosh y = sinh(L/2) sinh x cosh g − cosh(L/2) cosh x for the half cuff x,
    with y half the free cuff (default L).

    Args:
        L: Length of γ₀
        eps: Gap ε in (0, L)
        free_cuff: Length of the remaining cuff
        position: Index (1 or 2) of the designed cuff

    Returns:
        (ℓ₀, ℓ₁, ℓ₂)
    """
    if position not in (1, 2):
        raise BuilderError(f"Designed cuff position must be 1 or 2, got {position}")
    target = ortho_target_length(L, eps)
    free = L if free_cuff is None else float(free_cuff)
    if not free > 0:
        raise BuilderError(f"Free cuff must be positive, got {free}")
    half_L, half_free = L / 2.0, free / 2.0

    def residual(x: float) -> float:
        return np.sinh(half_L) * np.cosh(target) * np.sinh(x) - np.cosh(half_L) * np.cosh(x) - np.cosh(half_free)

    hi = 1.0
    while residual(hi) <= 0:
        hi *= 2.0
        if hi > _BRACKET_LIMIT:
            raise BuilderError(f"No bracket for the designed cuff (L={L}, ε={eps})", L=L, eps=eps)

    x = brentq(residual, 0.0, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    designed = 2.0 * x
    logger.debug(f"Designed cuff for L={L}, ε={eps}: {designed} (target ortho {target})")
    return (L, designed, free) if position == 1 else (L, free, designed)


def _check_orthogonal(X: np.ndarray, tol: ToleranceProfile, name: str):
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DomainError(f"Twist {name} must be square, got shape {X.shape}")
    if np.max(np.abs(X.T @ X - np.eye(X.shape[0]))) >= tol.residual_abs * max(1.0, X.shape[0]):
        raise DomainError(f"Twist {name} is not orthogonal")


def diagonal_embed(
    base: Representation,
    n: int,
    twists: Optional[Mapping[int, np.ndarray]] = None,
    tol: ToleranceProfile = DEFAULT_TOLERANCES
) -> Representation:
    """
    Δ(ρ₀(γ))·diag(X_γ, X_γ) = ρ₀(γ) ⊗ X_γ per generator

    Args:
        base: Rank-one representation
        n: Target rank
        twists: Optional orthogonal n×n matrix per generator index (1-based)
    """
    if base.n != 1:
        raise DomainError(f"Diagonal embedding needs a rank-one representation, got n={base.n}")
    if n < 1:
        raise DomainError(f"Rank must be positive, got {n}")
    twists = dict(twists or {})
    images = []
    twisted = False
    for index, image in enumerate(base.images, start=1):
        X = np.asarray(twists.pop(index, np.eye(n)), dtype=float)
        _check_orthogonal(X, tol, f"g{index}")
        if X.shape[0] != n:
            raise DomainError(f"Twist g{index} has size {X.shape[0]}, expected {n}")
        twisted = twisted or not np.allclose(X, np.eye(n))
        images.append(SymplecticElement(np.kron(image.matrix, X), tol))
    if twists:
        raise DomainError(f"Twists given for unknown generators: {sorted(twists)}")
    label = "twisted_diagonal" if twisted else "diagonal"
    return Representation(images, base.spec, tol, label=f"{label}(n={n}) of {base.label}")


def product_of_fuchsians(factors: Sequence[Representation], tol: ToleranceProfile = DEFAULT_TOLERANCES) -> Representation:
    """Per generator, factor images [[aᵢ, bᵢ], [cᵢ, dᵢ]] assemble to [[diag a, diag b], [diag c, diag d]]"""
    if not factors:
        raise DomainError("Product needs at least one factor")
    spec: SurfaceSpec = factors[0].spec
    for factor in factors:
        if factor.n != 1:
            raise DomainError(f"Product factors must be rank one, got n={factor.n}")
        if factor.spec != spec:
            raise DomainError("Product factors must share the surface spec")

    images = []
    for index in range(spec.rank):
        entries = np.array([factor.images[index].matrix for factor in factors])
        images.append(SymplecticElement(np.block([
            [np.diag(entries[:, 0, 0]), np.diag(entries[:, 0, 1])],
            [np.diag(entries[:, 1, 0]), np.diag(entries[:, 1, 1])],
        ]), tol))
    labels = ", ".join(factor.label for factor in factors)
    return Representation(images, spec, tol, label=f"product[{labels}]")


def representation_from_matrices(
    matrices: Sequence,
    spec: SurfaceSpec = PAIR_OF_PANTS,
    tol: ToleranceProfile = DEFAULT_TOLERANCES
) -> Representation:
    """Explicit generator matrices, validated for symplecticity and peripheral Shilov hyperbolicity"""
    return Representation([SymplecticElement(M, tol) for M in matrices], spec, tol, label="explicit")
