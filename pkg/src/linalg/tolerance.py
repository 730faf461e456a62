from dataclasses import asdict, dataclass, replace
from typing import Dict

from src.errors import DomainError


@dataclass(frozen=True)
class ToleranceProfile:
    """
    Shared numerical tolerances

    Args:
        residual_abs: Absolute residual allowed in identities (M·V = V·Λ, gᵀJg = J, ...)
        compare_rel: Relative tolerance when comparing two computed reals
        pd_margin: Smallest eigenvalue that still counts as positive definite
        condition_cap: Largest condition number accepted before a solve
    """

    residual_abs: float = 1e-9
    compare_rel: float = 1e-7
    pd_margin: float = 1e-9
    condition_cap: float = 1e12

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise DomainError(f"Tolerance {name} must be strictly positive, got {value}", field=name)
        if not self.condition_cap > 1:
            raise DomainError(f"condition_cap must exceed 1, got {self.condition_cap}", field="condition_cap")

    def close(self, a: float, b: float) -> bool:
        """Relative comparison with an absolute floor of residual_abs"""
        return abs(a - b) <= max(self.residual_abs, self.compare_rel * max(abs(a), abs(b)))

    def slack(self, scale: float) -> float:
        return max(self.residual_abs, self.compare_rel * abs(scale))

    def with_overrides(self, **overrides: float) -> "ToleranceProfile":
        return replace(self, **overrides)

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)

    @classmethod
    def from_settings(cls, settings) -> "ToleranceProfile":
        """Build the process default from a Settings object"""
        return cls(
            residual_abs=settings.TOL_RESIDUAL_ABS,
            compare_rel=settings.TOL_COMPARE_REL,
            pd_margin=settings.TOL_PD_MARGIN,
            condition_cap=settings.TOL_CONDITION_CAP,
        )


DEFAULT_TOLERANCES = ToleranceProfile()
