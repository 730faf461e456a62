"""
Seeded random generators shared by the test suites
"""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

from functools import lru_cache

import numpy as np

from src.geometry.lagrangian import LagrangianFrame, SymplecticElement
from src.surfaces import build_pair_of_pants_fuchsian, diagonal_embed, product_of_fuchsians

SEED = 20240611
TRIALS = 200


def rng(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng(SEED + offset)


def random_symmetric(generator: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    M = generator.normal(scale=scale, size=(n, n))
    return 0.5 * (M + M.T)


def random_pd(generator: np.random.Generator, n: int, floor: float = 0.2) -> np.ndarray:
    """Well-conditioned PD matrix, eigenvalues ≥ floor"""
    M = generator.normal(size=(n, n))
    return M @ M.T / n + floor * np.eye(n)


def random_symplectic(generator: np.random.Generator, n: int, scale: float = 0.5) -> SymplecticElement:
    """[[Id, S₁], [0, Id]] · diag(A, A^-T) · [[Id, 0], [S₂, Id]], well conditioned"""
    upper = np.block([[np.eye(n), random_symmetric(generator, n, scale)], [np.zeros((n, n)), np.eye(n)]])
    lower = np.block([[np.eye(n), np.zeros((n, n))], [random_symmetric(generator, n, scale), np.eye(n)]])
    A = np.eye(n) + generator.normal(scale=scale / 2.0, size=(n, n))
    while abs(np.linalg.det(A)) < 0.2:
        A = np.eye(n) + generator.normal(scale=scale / 2.0, size=(n, n))
    middle = SymplecticElement.block_diagonal(A).matrix
    return SymplecticElement(upper @ middle @ lower)


def increasing_charts(generator: np.random.Generator, n: int, count: int) -> list:
    """X₁ < X₂ < … (differences PD)"""
    charts = [random_symmetric(generator, n)]
    for _ in range(count - 1):
        charts.append(charts[-1] + random_pd(generator, n))
    return charts


def random_maximal_tuple(generator: np.random.Generator, n: int, count: int, with_infinity: bool = True) -> list:
    """A maximal tuple: increasing charts, then l∞, moved by a random symplectic element"""
    charts = increasing_charts(generator, n, count - 1 if with_infinity else count)
    frames = [np.vstack([X, np.eye(n)]) for X in charts]
    if with_infinity:
        frames.append(np.vstack([np.eye(n), np.zeros((n, n))]))
    g = random_symplectic(generator, n)
    return [LagrangianFrame(g.matrix @ F) for F in frames]


@lru_cache(maxsize=None)
def fuchsian(cuffs=(2.0, 2.0, 2.0)):
    return build_pair_of_pants_fuchsian(cuffs)


@lru_cache(maxsize=None)
def diagonal(n: int, cuffs=(2.0, 2.0, 2.0)):
    return diagonal_embed(fuchsian(cuffs), n)


@lru_cache(maxsize=None)
def twisted_diagonal(angle: float = np.pi / 3, cuffs=(2.0, 2.0, 2.0)):
    rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    return diagonal_embed(fuchsian(cuffs), 2, {1: rotation})


@lru_cache(maxsize=None)
def product(first=(2.0, 2.0, 2.0), second=(2.0, 1.0, 3.0)):
    return product_of_fuchsians([fuchsian(first), fuchsian(second)])


def hyperbolic_cuff_orthogeodesic(cuffs, i: int, j: int) -> float:
    """Closed-form orthogeodesic length between cuffs i ≠ j of a hyperbolic pair of pants"""
    k = ({0, 1, 2} - {i, j}).pop()
    a, b, c = cuffs[i] / 2.0, cuffs[j] / 2.0, cuffs[k] / 2.0
    return float(np.arccosh((np.cosh(c) + np.cosh(a) * np.cosh(b)) / (np.sinh(a) * np.sinh(b))))
