"""
Error taxonomy for SympOrtho

Every error carries a machine-readable `code` (used by the CLI and in reports)
and a `context` dict with whatever the caller needs to reproduce the failure.
"""

from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np


class SympOrthoError(Exception):
    """Base class for all library errors"""

    code = "error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        """Serializable summary (matrices become nested lists)"""
        context = {}
        for key, value in self.context.items():
            if isinstance(value, np.ndarray):
                value = value.tolist()
            context[key] = value if isinstance(value, (int, float, str, list, bool, type(None))) else str(value)
        return {"code": self.code, "message": self.message, "context": context}


class DomainError(SympOrthoError, ValueError):
    code = "domain"


class SymmetryViolationError(DomainError):
    code = "symmetry_violation"


class TransversalityError(DomainError):
    code = "not_transverse"


class NonMaximalError(DomainError):
    code = "non_maximal"


class DisjointTubesError(DomainError):
    code = "disjoint_tubes"


class NotShilovHyperbolicError(DomainError):
    code = "not_shilov_hyperbolic"


class UnsupportedRankError(DomainError):
    code = "unsupported_rank"


class NumericalFailureError(SympOrthoError):
    code = "numerical_failure"

    def __init__(self, message: str, matrix: Optional[np.ndarray] = None, **context: Any):
        super().__init__(message, **context)
        self.matrix = None if matrix is None else np.array(matrix, copy=True)
        if matrix is not None:
            self.context["matrix"] = self.matrix


class ConditioningError(NumericalFailureError):
    code = "ill_conditioned"


class BuilderError(SympOrthoError):
    code = "builder"


class DedupAmbiguityError(SympOrthoError):
    code = "dedup_ambiguity"

    def __init__(self, message: str, first_word: str, second_word: str, **context: Any):
        super().__init__(message, first_word=first_word, second_word=second_word, **context)
        self.words = (first_word, second_word)


class RelationResidualError(SympOrthoError):
    code = "relation_residual"


class ConfigIssue(NamedTuple):
    """One schema problem: JSON path, machine code, human message"""
    path: str
    code: str
    message: str


class ConfigValidationError(SympOrthoError, ValueError):
    code = "config_invalid"

    def __init__(self, issues: List[ConfigIssue]):
        summary = "; ".join(f"{issue.path}: {issue.code} ({issue.message})" for issue in issues)
        super().__init__(f"Invalid configuration: {summary}", issues=[issue._asdict() for issue in issues])
        self.issues = list(issues)

    @property
    def codes(self) -> List[str]:
        return [issue.code for issue in self.issues]


class UsageError(SympOrthoError):
    code = "usage"
