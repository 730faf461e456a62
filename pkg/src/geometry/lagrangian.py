"""
Core value types of the Siegel space of Sp(2n,ℝ)

Key principles:
- J = [[0, Id], [−Id, 0]]; a symmetric chart Z stands for the Lagrangian spanned by (Z over Id)
- l∞ = span of the first n basis vectors; it has no chart
- Frames are stored orthonormalized; the chart is a cache recomputed from the frame
- All values are immutable after construction
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from src.errors import DomainError, TransversalityError
from src.linalg import DEFAULT_TOLERANCES, ToleranceProfile, as_matrix, is_positive_definite, symmetrize

KEY_DECIMALS = 6


def symplectic_form(n: int) -> np.ndarray:
    """J_n = [[0, Id], [−Id, 0]]"""
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def symplectic_residual(matrix: np.ndarray) -> float:
    """‖gᵀJg − J‖ relative to max(1, ‖g‖²)"""
    n = matrix.shape[0] // 2
    J = symplectic_form(n)
    residual = np.linalg.norm(matrix.T @ J @ matrix - J)
    return float(residual / max(1.0, np.linalg.norm(matrix) ** 2))


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class SymplecticElement:
    """A 2n×2n real matrix preserving J"""

    __slots__ = ("matrix", "n")

    def __init__(self, matrix, tol: ToleranceProfile = DEFAULT_TOLERANCES, check: bool = True):
        g = as_matrix(matrix, "symplectic matrix")
        if g.shape[0] != g.shape[1] or g.shape[0] % 2 or g.shape[0] == 0:
            raise DomainError(f"Symplectic matrix must be 2n×2n, got shape {g.shape}")
        if check:
            residual = symplectic_residual(g)
            if residual > tol.residual_abs:
                raise DomainError(f"Matrix is not symplectic (residual {residual:.3e})", residual=residual)
        object.__setattr__(self, "matrix", _frozen(g))
        object.__setattr__(self, "n", g.shape[0] // 2)

    def __setattr__(self, name, value):
        raise AttributeError("SymplecticElement is immutable")

    @classmethod
    def identity(cls, n: int) -> "SymplecticElement":
        return cls(np.eye(2 * n), check=False)

    @classmethod
    def from_blocks(cls, A, B, C, D, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> "SymplecticElement":
        return cls(np.block([[np.asarray(A, float), np.asarray(B, float)],
                             [np.asarray(C, float), np.asarray(D, float)]]), tol)

    @classmethod
    def block_diagonal(cls, A) -> "SymplecticElement":
        """diag(A, A^-T), the stabilizer of the pair (0, l∞)"""
        A = as_matrix(A, "block")
        n = A.shape[0]
        g = np.zeros((2 * n, 2 * n))
        g[:n, :n] = A
        g[n:, n:] = np.linalg.inv(A).T
        return cls(g, check=False)

    @property
    def blocks(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        n = self.n
        g = self.matrix
        return g[:n, :n], g[:n, n:], g[n:, :n], g[n:, n:]

    def inverse(self) -> "SymplecticElement":
        """g⁻¹ = −J gᵀ J"""
        J = symplectic_form(self.n)
        return SymplecticElement(-J @ self.matrix.T @ J, check=False)

    def __matmul__(self, other: "SymplecticElement") -> "SymplecticElement":
        if not isinstance(other, SymplecticElement):
            return NotImplemented
        if other.n != self.n:
            raise DomainError(f"Rank mismatch: {self.n} vs {other.n}")
        return SymplecticElement(self.matrix @ other.matrix, check=False)

    def residual(self) -> float:
        return symplectic_residual(self.matrix)

    def __repr__(self):
        return f"SymplecticElement(n={self.n}, matrix={self.matrix.tolist()})"


class LagrangianFrame:
    """
    A Lagrangian subspace of ℝ²ⁿ

    Args:
        frame: 2n×n real matrix whose columns span the subspace
        tol: Tolerance profile for rank and isotropy checks
        check: Verify isotropy (trusted constructions such as g·F skip it)
    """

    __slots__ = ("n", "frame", "chart", "at_infinity")

    def __init__(self, frame, tol: ToleranceProfile = DEFAULT_TOLERANCES, check: bool = True):
        F = as_matrix(frame, "Lagrangian frame")
        rows, n = F.shape
        if n == 0 or rows != 2 * n:
            raise DomainError(f"Lagrangian frame must be 2n×n, got shape {F.shape}")

        singular = np.linalg.svd(F, compute_uv=False)
        if singular[-1] <= tol.pd_margin * max(1.0, singular[0]):
            raise DomainError("Lagrangian frame is rank deficient", singular_values=singular.tolist())

        Q, _ = np.linalg.qr(F)
        if check:
            isotropy = np.linalg.norm(Q.T @ symplectic_form(n) @ Q)
            if isotropy > tol.residual_abs:
                raise DomainError(f"Frame is not isotropic (residual {isotropy:.3e})", residual=float(isotropy))

        chart = None
        bottom = Q[n:, :]
        # transverse to l∞ iff the bottom block is invertible
        if np.linalg.svd(bottom, compute_uv=False)[-1] > tol.pd_margin:
            chart = _frozen(symmetrize(np.linalg.solve(bottom.T, Q[:n, :].T).T))

        object.__setattr__(self, "n", n)
        object.__setattr__(self, "frame", _frozen(Q))
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "at_infinity", bool(np.linalg.norm(bottom) <= tol.residual_abs))

    def __setattr__(self, name, value):
        raise AttributeError("LagrangianFrame is immutable")

    @classmethod
    def from_chart(cls, X, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> "LagrangianFrame":
        """The Lagrangian spanned by the columns of (X over Id), X symmetric"""
        X = as_matrix(np.atleast_2d(X), "chart")
        if X.shape[0] != X.shape[1]:
            raise DomainError(f"Chart must be square, got shape {X.shape}")
        if np.max(np.abs(X - X.T)) > tol.residual_abs * max(1.0, np.max(np.abs(X))):
            raise DomainError("Chart must be symmetric")
        return cls(np.vstack([symmetrize(X), np.eye(X.shape[0])]), tol)

    @classmethod
    def infinity(cls, n: int) -> "LagrangianFrame":
        return cls(np.vstack([np.eye(n), np.zeros((n, n))]))

    @property
    def basis(self) -> np.ndarray:
        """(chart over Id) when the chart exists, the orthonormal frame otherwise"""
        if self.chart is not None:
            return np.vstack([self.chart, np.eye(self.n)])
        return self.frame

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T

    def distance(self, other: "LagrangianFrame") -> float:
        """Frobenius distance between orthogonal projectors"""
        return float(np.linalg.norm(self.projector() - other.projector()))

    def same_as(self, other: "LagrangianFrame", tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
        return self.n == other.n and self.distance(other) <= tol.compare_rel

    def key(self) -> Tuple:
        """Canonical hashable key, rounded to 1e-6"""
        source = self.chart if self.chart is not None else self.projector()
        rounded = np.round(source, KEY_DECIMALS) + 0.0
        return ("chart" if self.chart is not None else "projector", self.n, tuple(rounded.ravel().tolist()))

    def __repr__(self):
        if self.chart is not None:
            return f"LagrangianFrame(chart={np.round(self.chart, 8).tolist()})"
        return f"LagrangianFrame(frame={np.round(self.frame, 8).tolist()})"


class SiegelPoint:
    """Z = X + iY with X symmetric and Y positive definite"""

    __slots__ = ("n", "X", "Y")

    def __init__(self, X, Y, tol: ToleranceProfile = DEFAULT_TOLERANCES):
        X = as_matrix(np.atleast_2d(X), "real part")
        Y = as_matrix(np.atleast_2d(Y), "imaginary part")
        if X.shape != Y.shape or X.shape[0] != X.shape[1]:
            raise DomainError(f"Real and imaginary parts must be square of equal shape, got {X.shape}, {Y.shape}")
        scale = max(1.0, np.max(np.abs(X)), np.max(np.abs(Y)))
        if np.max(np.abs(X - X.T)) > tol.residual_abs * scale or np.max(np.abs(Y - Y.T)) > tol.residual_abs * scale:
            raise DomainError("Siegel point must be a symmetric complex matrix")
        if not is_positive_definite(symmetrize(Y), tol):
            raise DomainError("Imaginary part of a Siegel point must be positive definite", Y=Y.tolist())
        object.__setattr__(self, "n", X.shape[0])
        object.__setattr__(self, "X", _frozen(symmetrize(X)))
        object.__setattr__(self, "Y", _frozen(symmetrize(Y)))

    def __setattr__(self, name, value):
        raise AttributeError("SiegelPoint is immutable")

    @classmethod
    def from_complex(cls, Z, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> "SiegelPoint":
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        return cls(Z.real, Z.imag, tol)

    @classmethod
    def imaginary(cls, Y, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> "SiegelPoint":
        """i·Y, a point of the standard tube"""
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        return cls(np.zeros_like(Y), Y, tol)

    @property
    def Z(self) -> np.ndarray:
        return self.X + 1j * self.Y

    def frame(self) -> np.ndarray:
        """Complex frame (Z over Id)"""
        return np.vstack([self.Z, np.eye(self.n)])

    def conjugate_frame(self) -> np.ndarray:
        return np.vstack([np.conj(self.Z), np.eye(self.n)])

    def on_standard_tube(self, tol: ToleranceProfile = DEFAULT_TOLERANCES) -> bool:
        return bool(np.max(np.abs(self.X)) <= tol.slack(np.max(np.abs(self.Y))))

    def __repr__(self):
        return f"SiegelPoint(Z={np.round(self.Z, 8).tolist()})"


@dataclass(frozen=True)
class WeylVector:
    """Point of the model Weyl chamber: x₁ ≥ … ≥ x_n ≥ 0"""

    components: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(x) for x in self.components)
        object.__setattr__(self, "components", values)
        slack = DEFAULT_TOLERANCES.compare_rel * max([1.0] + [abs(x) for x in values])
        for first, second in zip(values, values[1:]):
            if second > first + slack:
                raise DomainError(f"Weyl vector components must be descending, got {values}")
        if values and values[-1] < -slack:
            raise DomainError(f"Weyl vector components must be non-negative, got {values}")

    @classmethod
    def from_values(cls, values: Sequence[float], tol: ToleranceProfile = DEFAULT_TOLERANCES) -> "WeylVector":
        """Sort descending and snap tiny negative values to zero"""
        ordered = sorted((float(x) for x in values), reverse=True)
        slack = tol.slack(max([1.0] + [abs(x) for x in ordered]))
        return cls(tuple(0.0 if -slack <= x < 0 else x for x in ordered))

    @classmethod
    def zero(cls, n: int) -> "WeylVector":
        return cls((0.0,) * n)

    @property
    def finsler(self) -> float:
        return 0.5 * sum(self.components)

    @property
    def riemannian(self) -> float:
        return float(np.sqrt(sum(x * x for x in self.components)))

    def as_array(self) -> np.ndarray:
        return np.array(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[float]:
        return iter(self.components)

    def __getitem__(self, index) -> float:
        return self.components[index]


def require_same_rank(*items) -> int:
    ranks = {item.n for item in items}
    if len(ranks) != 1:
        raise DomainError(f"Rank mismatch: {sorted(ranks)}")
    return ranks.pop()


def require_transverse(first: LagrangianFrame, second: LagrangianFrame,
                       tol: ToleranceProfile = DEFAULT_TOLERANCES, what: Optional[str] = None):
    """Raise TransversalityError unless the two Lagrangians are transverse"""
    require_same_rank(first, second)
    sigma = np.linalg.svd(np.hstack([first.frame, second.frame]), compute_uv=False)[-1]
    if sigma <= tol.pd_margin:
        raise TransversalityError(f"Lagrangians are not transverse{' (' + what + ')' if what else ''}",
                                  margin=float(sigma))
