"""
Run configuration: JSON schema validation into a RunConfig

Key principles:
- Every problem is collected as a ConfigIssue(path, code, message) before raising
- Defaults come from Settings; the JSON file overrides them; CLI flags override the file
- Matrices are row-major nested arrays
"""

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config.settings import settings as default_settings
from src.errors import ConfigIssue, ConfigValidationError, DomainError
from src.geometry.lagrangian import symplectic_residual
from src.linalg import ToleranceProfile
from src.spectrum.enumeration import MAX_WORD_LENGTH
from src.surfaces.words import BOUNDARY_NAMES, FreeWord

logger = logging.getLogger(__name__)

REPRESENTATION_KINDS = ("fuchsian", "diagonal", "twisted_diagonal", "product", "explicit")
FORMATS = ("json", "csv")
GENERATORS = ("g1", "g2")

_TOP_KEYS = ("n", "surface", "representation", "depth", "boundary", "tolerances", "output", "gap",
             "width_words", "report")
_REPRESENTATION_KEYS = {
    "fuchsian": ("kind", "cuffs"),
    "diagonal": ("kind", "cuffs"),
    "twisted_diagonal": ("kind", "cuffs", "twists"),
    "product": ("kind", "factors"),
    "explicit": ("kind", "generators"),
}
_TOLERANCE_KEYS = ("residual_abs", "compare_rel", "pd_margin", "condition_cap")


@dataclass(frozen=True)
class RepresentationConfig:
    kind: str
    cuffs: Optional[Tuple[float, float, float]] = None
    twists: Dict[str, np.ndarray] = field(default_factory=dict)
    factors: Tuple[Tuple[float, float, float], ...] = ()
    generators: Tuple[np.ndarray, ...] = ()


@dataclass(frozen=True)
class GapConfig:
    L: float = 2.0
    eta: float = 0.5


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters; `echo` is the resolved configuration as plain JSON values"""

    n: int
    surface: str
    representation: Optional[RepresentationConfig]
    depth: int
    boundary: str
    tolerances: ToleranceProfile
    output_path: Optional[str]
    output_format: str
    gap: GapConfig
    width_words: Tuple[str, ...]
    include_timings: bool
    max_depth: int

    def with_overrides(self, depth: Optional[int] = None, boundary: Optional[str] = None,
                       output_path: Optional[str] = None, output_format: Optional[str] = None) -> "RunConfig":
        """Apply command-line flags; None keeps the configured value"""
        issues = []
        if depth is not None and not 0 <= depth <= self.max_depth:
            issues.append(ConfigIssue("--depth", "out_of_range", f"depth must lie in [0, {self.max_depth}]"))
        if boundary is not None and boundary not in BOUNDARY_NAMES:
            issues.append(ConfigIssue("--boundary", "invalid_value", f"expected one of {BOUNDARY_NAMES}"))
        if output_format is not None and output_format not in FORMATS:
            issues.append(ConfigIssue("--format", "invalid_value", f"expected one of {FORMATS}"))
        if issues:
            raise ConfigValidationError(issues)
        return replace(
            self,
            depth=self.depth if depth is None else depth,
            boundary=boundary or self.boundary,
            output_path=output_path or self.output_path,
            output_format=output_format or self.output_format,
        )

    def echo(self) -> Dict[str, Any]:
        """Resolved configuration in fixed key order"""
        representation = None
        if self.representation is not None:
            rep = self.representation
            representation = {"kind": rep.kind}
            if rep.cuffs is not None:
                representation["cuffs"] = list(rep.cuffs)
            if rep.twists:
                representation["twists"] = {name: matrix.tolist() for name, matrix in sorted(rep.twists.items())}
            if rep.factors:
                representation["factors"] = [{"cuffs": list(cuffs)} for cuffs in rep.factors]
            if rep.generators:
                representation["generators"] = {name: matrix.tolist() for name, matrix in zip(GENERATORS, rep.generators)}
        return {
            "n": self.n,
            "surface": self.surface,
            "representation": representation,
            "depth": self.depth,
            "boundary": self.boundary,
            "tolerances": self.tolerances.as_dict(),
            "output": {"path": self.output_path, "format": self.output_format},
            "gap": {"L": self.gap.L, "eta": self.gap.eta},
            "width_words": list(self.width_words),
            "report": {"include_timings": self.include_timings},
        }


class _Collector:
    def __init__(self):
        self.issues: List[ConfigIssue] = []

    def add(self, path: str, code: str, message: str):
        self.issues.append(ConfigIssue(path, code, message))

    def unknown_keys(self, data: Dict, allowed, path: str):
        for key in data:
            if key not in allowed:
                self.add(f"{path}.{key}", "unknown_key", f"unknown key '{key}'")

    def number(self, value, path: str, positive: bool = True) -> Optional[float]:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value):
            self.add(path, "type", "expected a finite number")
            return None
        if positive and not value > 0:
            self.add(path, "out_of_range", "expected a positive number")
            return None
        return float(value)

    def integer(self, value, path: str, low: int, high: Optional[int] = None) -> Optional[int]:
        if isinstance(value, bool) or not isinstance(value, int):
            self.add(path, "type", "expected an integer")
            return None
        if value < low or (high is not None and value > high):
            bounds = f"[{low}, {high}]" if high is not None else f"≥ {low}"
            self.add(path, "out_of_range", f"expected an integer in {bounds}")
            return None
        return value

    def obj(self, value, path: str) -> Optional[Dict]:
        if not isinstance(value, dict):
            self.add(path, "type", "expected an object")
            return None
        return value

    def cuffs(self, value, path: str) -> Optional[Tuple[float, float, float]]:
        if not isinstance(value, list):
            self.add(path, "type", "expected a list of 3 cuff lengths")
            return None
        if len(value) != 3:
            self.add(path, "arity", f"expected 3 cuff lengths, got {len(value)}")
            return None
        numbers = [self.number(item, f"{path}[{index}]") for index, item in enumerate(value)]
        if any(number is None for number in numbers):
            return None
        return tuple(numbers)

    def matrix(self, value, path: str, size: int) -> Optional[np.ndarray]:
        if not (isinstance(value, list) and all(isinstance(row, list) for row in value)):
            self.add(path, "type", "expected a row-major nested array")
            return None
        if len(value) != size or any(len(row) != size for row in value):
            self.add(path, "arity", f"expected a {size}×{size} matrix")
            return None
        entries = [self.number(item, f"{path}[{i}][{j}]", positive=False)
                   for i, row in enumerate(value) for j, item in enumerate(row)]
        if any(entry is None for entry in entries):
            return None
        return np.array(entries, dtype=float).reshape(size, size)


def _representation(data: Dict, n: Optional[int], tolerances: ToleranceProfile,
                    issues: _Collector) -> Optional[RepresentationConfig]:
    path = "$.representation"
    kind = data.get("kind")
    if kind not in REPRESENTATION_KINDS:
        issues.add(f"{path}.kind", "invalid_value", f"expected one of {REPRESENTATION_KINDS}")
        return None
    issues.unknown_keys(data, _REPRESENTATION_KEYS[kind], path)
    if n is None:
        return None

    if kind in ("fuchsian", "diagonal", "twisted_diagonal"):
        if kind == "fuchsian" and n != 1:
            issues.add("$.n", "rank_mismatch", "a fuchsian representation has n = 1")
        if "cuffs" not in data:
            issues.add(f"{path}.cuffs", "missing", "cuff lengths are required")
            return None
        cuffs = issues.cuffs(data["cuffs"], f"{path}.cuffs")
        twists = {}
        if kind == "twisted_diagonal":
            raw = issues.obj(data.get("twists", {}), f"{path}.twists") or {}
            issues.unknown_keys(raw, GENERATORS, f"{path}.twists")
            for name in GENERATORS:
                if name not in raw:
                    continue
                X = issues.matrix(raw[name], f"{path}.twists.{name}", n)
                if X is None:
                    continue
                if np.max(np.abs(X.T @ X - np.eye(n))) >= tolerances.residual_abs * max(1.0, n):
                    issues.add(f"{path}.twists.{name}", "not_orthogonal", "twist matrix must be orthogonal")
                    continue
                twists[name] = X
        return RepresentationConfig(kind=kind, cuffs=cuffs, twists=twists) if cuffs else None

    if kind == "product":
        factors = data.get("factors")
        if not isinstance(factors, list):
            issues.add(f"{path}.factors", "type", "expected a list of factor blocks")
            return None
        if len(factors) != n:
            issues.add(f"{path}.factors", "arity", f"a product needs exactly n = {n} factors, got {len(factors)}")
            return None
        parsed = []
        for index, factor in enumerate(factors):
            factor_path = f"{path}.factors[{index}]"
            factor = issues.obj(factor, factor_path)
            if factor is None:
                continue
            issues.unknown_keys(factor, ("cuffs",), factor_path)
            parsed.append(issues.cuffs(factor.get("cuffs"), f"{factor_path}.cuffs"))
        if len(parsed) != n or any(cuffs is None for cuffs in parsed):
            return None
        return RepresentationConfig(kind=kind, factors=tuple(parsed))

    generators = issues.obj(data.get("generators"), f"{path}.generators")
    if generators is None:
        return None
    issues.unknown_keys(generators, GENERATORS, f"{path}.generators")
    matrices = []
    for name in GENERATORS:
        if name not in generators:
            issues.add(f"{path}.generators.{name}", "missing", f"generator {name} is required")
            continue
        g = issues.matrix(generators[name], f"{path}.generators.{name}", 2 * n)
        if g is None:
            continue
        residual = symplectic_residual(g)
        if residual > tolerances.residual_abs:
            issues.add(f"{path}.generators.{name}", "not_symplectic", f"‖gᵀJg − J‖ residual {residual:.3e}")
            continue
        matrices.append(g)
    if len(matrices) != len(GENERATORS):
        return None
    return RepresentationConfig(kind=kind, generators=tuple(matrices))


def parse_config(text: str, settings=default_settings) -> RunConfig:
    """
    Validate JSON text into a RunConfig

    Raises:
        ConfigValidationError: with every issue found (path, code, message)
    """
    issues = _Collector()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigValidationError([ConfigIssue("$", "invalid_json", str(e))])
    if not isinstance(data, dict):
        raise ConfigValidationError([ConfigIssue("$", "type", "configuration must be a JSON object")])
    issues.unknown_keys(data, _TOP_KEYS, "$")

    n = None
    if "n" not in data:
        issues.add("$.n", "missing", "rank n is required")
    else:
        n = issues.integer(data["n"], "$.n", 1)

    surface = data.get("surface", "pair_of_pants")
    if surface != "pair_of_pants":
        issues.add("$.surface", "unsupported", "only pair_of_pants is supported")

    tolerance_values = ToleranceProfile.from_settings(settings).as_dict()
    raw_tolerances = issues.obj(data.get("tolerances", {}), "$.tolerances") or {}
    issues.unknown_keys(raw_tolerances, _TOLERANCE_KEYS, "$.tolerances")
    for key in _TOLERANCE_KEYS:
        if key in raw_tolerances:
            value = issues.number(raw_tolerances[key], f"$.tolerances.{key}")
            if value is not None:
                tolerance_values[key] = value
    try:
        tolerances = ToleranceProfile(**tolerance_values)
    except DomainError as e:
        issues.add(f"$.tolerances.{e.context.get('field', '')}", "out_of_range", e.message)
        tolerances = ToleranceProfile.from_settings(settings)

    representation = None
    if "representation" in data:
        raw = issues.obj(data["representation"], "$.representation")
        if raw is not None:
            representation = _representation(raw, n, tolerances, issues)

    max_depth = min(settings.MAX_DEPTH, MAX_WORD_LENGTH)
    depth = issues.integer(data.get("depth", settings.DEFAULT_DEPTH), "$.depth", 0, max_depth)
    boundary = data.get("boundary", settings.DEFAULT_BOUNDARY)
    if boundary not in BOUNDARY_NAMES:
        issues.add("$.boundary", "invalid_value", f"expected one of {BOUNDARY_NAMES}")

    output = issues.obj(data.get("output", {}), "$.output") or {}
    issues.unknown_keys(output, ("path", "format"), "$.output")
    output_path = output.get("path")
    if output_path is not None and not isinstance(output_path, str):
        issues.add("$.output.path", "type", "expected a string")
    output_format = output.get("format", settings.DEFAULT_FORMAT)
    if output_format not in FORMATS:
        issues.add("$.output.format", "invalid_value", f"expected one of {FORMATS}")

    gap = issues.obj(data.get("gap", {}), "$.gap") or {}
    issues.unknown_keys(gap, ("L", "eta"), "$.gap")
    L = issues.number(gap.get("L", GapConfig.L), "$.gap.L")
    eta = issues.number(gap.get("eta", GapConfig.eta), "$.gap.eta")
    if L is not None and eta is not None and n is not None and not eta / n ** 2 < L:
        issues.add("$.gap.eta", "out_of_range", "need η/n² < L")

    words = data.get("width_words", [])
    if not isinstance(words, list):
        issues.add("$.width_words", "type", "expected a list of words")
        words = []
    for index, word in enumerate(words):
        try:
            if not isinstance(word, str):
                raise DomainError("not a string")
            FreeWord.parse(word)
        except DomainError as e:
            issues.add(f"$.width_words[{index}]", "invalid_word", e.message)

    report = issues.obj(data.get("report", {}), "$.report") or {}
    issues.unknown_keys(report, ("include_timings",), "$.report")
    include_timings = report.get("include_timings", settings.INCLUDE_TIMINGS)
    if not isinstance(include_timings, bool):
        issues.add("$.report.include_timings", "type", "expected a boolean")

    if issues.issues:
        logger.debug(f"Configuration rejected with {len(issues.issues)} issues")
        raise ConfigValidationError(issues.issues)

    return RunConfig(
        n=n,
        surface=surface,
        representation=representation,
        depth=depth,
        boundary=boundary,
        tolerances=tolerances,
        output_path=output_path,
        output_format=output_format,
        gap=GapConfig(L, eta),
        width_words=tuple(words),
        include_timings=include_timings,
        max_depth=max_depth,
    )
