"""
Verifiers for the Basmajian-type identities and inequalities

Key principles:
- Every check becomes a Verdict with a signed margin (negative = violated)
- Inequalities are checked at every truncation depth, never only at the last one
- The upper bound is checked term by term since truncation only lowers the sum
- Whole-surface bounds are sums over the three boundary components
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from src.errors import DomainError, UnsupportedRankError
from src.geometry.siegel import frame_cross_ratio
from src.linalg import DEFAULT_TOLERANCES, ToleranceProfile
from src.spectrum.orthotubes import logcoth, orthotube_lengths
from src.spectrum.sums import SpectrumReport, basmajian_partial_sums
from src.surfaces.builders import build_pair_of_pants_fuchsian, product_of_fuchsians, solve_cuff_for_target_ortho
from src.surfaces.double import double_representation, doubled_ortho_element
from src.surfaces.representation import Representation, period, shilov_data, translation_lengths

logger = logging.getLogger(__name__)

METRICS = ("finsler", "riemannian")
TERM_TOLERANCE = 1e-8
PERIOD_TOLERANCE = 1e-8
DOUBLE_TOLERANCE = 1e-7
DESIGN_TOLERANCE = 1e-7
LENGTH_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Verdict:
    """One named check; margin ≥ 0 when it holds"""

    name: str
    passed: bool
    margin: float
    details: Dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, object]:
        return {"name": self.name, "passed": self.passed, "margin": self.margin, "details": dict(self.details)}

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "Verdict":
        return cls(name=str(data["name"]), passed=bool(data["passed"]), margin=data["margin"],
                   details=dict(data.get("details") or {}))


@dataclass(eq=False)
class VerificationReport:
    """Verdicts of one verification run plus the spectra it was computed from"""

    check: str
    verdicts: List[Verdict] = field(default_factory=list)
    spectra: List[SpectrumReport] = field(default_factory=list)
    values: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts)

    @property
    def failed(self) -> List[str]:
        return [verdict.name for verdict in self.verdicts if not verdict.passed]

    def add(self, name: str, margin: float, slack: float = 0.0, strict: bool = False, **details: float) -> Verdict:
        passed = margin > 0 if strict else margin >= -slack
        verdict = Verdict(name, bool(passed), float(margin), {key: float(value) for key, value in details.items()})
        self.verdicts.append(verdict)
        level = logging.INFO if verdict.passed else logging.WARNING
        logger.log(level, f"{'✅' if verdict.passed else '❌'} {name}: margin {margin:.3e}")
        return verdict


def _spectra(rho: Representation, depth: int, tol: ToleranceProfile,
             spectra: Optional[Sequence[SpectrumReport]]) -> List[SpectrumReport]:
    if spectra is not None:
        return list(spectra)
    return [basmajian_partial_sums(rho, boundary, depth, tol) for boundary in range(len(rho.spec.peripherals))]


def _term_margin(values) -> float:
    values = np.asarray(values, dtype=float)
    return float(np.min(values)) if values.size else 0.0


def verify_theorem_a(rho: Representation, metric: str = "finsler", depth: int = 6,
                     tol: ToleranceProfile = DEFAULT_TOLERANCES,
                     spectra: Optional[Sequence[SpectrumReport]] = None) -> VerificationReport:
    """
    Lower bounds by n·logcoth(ℓ^F(α)/n) (finsler) or 2√n·logcoth(ℓ^R(α)/2√n) (riemannian)

    Per boundary: the term chain for every record and the lower-bound partial
    sums at every depth. With all three boundaries present, the whole-surface
    bound on ℓ(∂Σ) as well.
    """
    if metric not in METRICS:
        raise DomainError(f"Unknown metric '{metric}', expected one of {METRICS}")
    spectra = _spectra(rho, depth, tol, spectra)
    report = VerificationReport(check=f"theorem_a_{metric}", spectra=spectra)
    n = rho.n
    root = np.sqrt(n)

    for spectrum in spectra:
        name = spectrum.boundary_name
        slack = spectrum.tolerance
        dF = np.array([record.dF_term for record in spectrum.records])
        lower = np.array([record.lower_term for record in spectrum.records])
        upper = np.array([record.upper_term for record in spectrum.records])
        table = spectrum.by_depth

        if metric == "finsler":
            report.add(f"term_chain[{name}]", _term_margin(np.minimum(upper - dF, dF - lower)), slack,
                       max_spread=float(np.max(upper - lower, initial=0.0)))
            report.add(f"lower_sum[{name}]", float(np.min(spectrum.ell_F - table["lower_sum"])), slack,
                       ell_F=spectrum.ell_F, lower_sum=spectrum.lower_sum)
            report.add(f"identity_sum[{name}]", float(np.min(table["residual"])), slack,
                       ell_F=spectrum.ell_F, identity_sum=spectrum.identity_sum)
        else:
            r_lower = np.array([record.riemannian_lower_term for record in spectrum.records])
            scaled = 2.0 / root
            report.add(f"term_chain[{name}]",
                       _term_margin(np.minimum(scaled * dF - r_lower, scaled * (upper - dF))), slack)
            report.add(f"lower_sum[{name}]", float(np.min(spectrum.ell_R - table["riemannian_lower_sum"])), slack,
                       ell_R=spectrum.ell_R, lower_sum=spectrum.riemannian_lower_sum)
            report.add(f"length_comparison[{name}]", spectrum.ell_R - 2.0 * spectrum.ell_F / root, slack,
                       ell_R=spectrum.ell_R, ell_F=spectrum.ell_F)

    if sorted(spectrum.boundary for spectrum in spectra) == list(range(len(rho.spec.peripherals))):
        if metric == "finsler":
            total = sum(spectrum.ell_F for spectrum in spectra)
            bound = sum(spectrum.lower_sum for spectrum in spectra)
        else:
            total = sum(spectrum.ell_R for spectrum in spectra)
            bound = sum(spectrum.riemannian_lower_sum for spectrum in spectra)
        report.add("whole_surface", total - bound, tol.slack(max(1.0, total)), boundary_length=total, bound=bound)
        report.values["boundary_length"] = total
        report.values["lower_bound"] = bound

    logger.info(f"Theorem A ({metric}) on {rho.label}: {'pass' if report.passed else 'FAIL'}")
    return report


def theorem_b_terms(rho: Representation, spectrum: SpectrumReport,
                    tol: ToleranceProfile = DEFAULT_TOLERANCES) -> np.ndarray:
    """log B(γ⁻, δ⁻, γ⁺, δ⁺) = log det R(γ⁻, δ⁺, δ⁻, γ⁺) per record"""
    if not spectrum.records:
        return np.zeros(0)
    data = shilov_data(rho.evaluate(spectrum.gamma_word), tol)
    plus = np.stack([record.delta_pair[0].basis for record in spectrum.records])
    minus = np.stack([record.delta_pair[1].basis for record in spectrum.records])
    ratios = frame_cross_ratio(data.repel.basis, plus, minus, data.attract.basis, tol)
    return np.log(np.abs(np.linalg.det(ratios)))


def verify_theorem_b(rho: Representation, boundary=0, depth: int = 6,
                     tol: ToleranceProfile = DEFAULT_TOLERANCES,
                     spectrum: Optional[SpectrumReport] = None) -> VerificationReport:
    """Partial sums of log B over the orthotubes from γ against the period ℓ_B(γ) = 2ℓ^F(γ)"""
    spectrum = spectrum or basmajian_partial_sums(rho, boundary, depth, tol)
    report = VerificationReport(check="theorem_b", spectra=[spectrum])
    name = spectrum.boundary_name

    terms = theorem_b_terms(rho, spectrum, tol)
    doubled = 2.0 * np.array([record.dF_term for record in spectrum.records])
    term_gap = float(np.max(np.abs(terms - doubled))) if terms.size else 0.0
    report.add(f"terms_match[{name}]", TERM_TOLERANCE * max(1.0, float(np.max(doubled, initial=1.0))) - term_gap,
               max_gap=term_gap)

    ell_B = period(rho.evaluate(spectrum.gamma_word), spectrum.basepoint, tol)
    period_gap = abs(ell_B - 2.0 * spectrum.ell_F)
    report.add(f"period[{name}]", PERIOD_TOLERANCE * max(1.0, ell_B) - period_gap, ell_B=ell_B, ell_F=spectrum.ell_F)

    depths = pd.Series(terms, index=[record.depth for record in spectrum.records], dtype=float)
    cumulative = depths.groupby(level=0).sum().reindex(range(spectrum.depth + 1), fill_value=0.0).cumsum()
    residuals = (ell_B - cumulative).to_numpy()
    steps = np.diff(residuals)
    report.add(f"residual_decreasing[{name}]", float(-np.max(steps)) if steps.size else 1.0, strict=True)
    report.add(f"partial_sum_bound[{name}]", float(np.min(residuals)), spectrum.tolerance * 2.0)

    report.values.update({
        "ell_B": ell_B,
        "terms": terms.tolist(),
        "partial_sums": cumulative.tolist(),
        "residuals": residuals.tolist(),
    })
    logger.info(f"Theorem B on {rho.label} ({name}): Σ log B = {float(np.sum(terms)):.10f} of ℓ_B = {ell_B:.10f}")
    return report


def double_check(rho: Representation, boundary=0, depth: int = 6, count: int = 10,
                 tol: ToleranceProfile = DEFAULT_TOLERANCES,
                 spectrum: Optional[SpectrumReport] = None) -> VerificationReport:
    """Relation residuals of the double along the boundary and ℓ^F(Dα) = 2ℓ^F(α) for the shortest records"""
    double = double_representation(rho, boundary, tol)
    spectrum = spectrum or basmajian_partial_sums(rho, double.boundary, depth, tol)
    report = VerificationReport(check="double", spectra=[spectrum])

    worst_name, worst = double.worst_relation
    report.add("relations", DOUBLE_TOLERANCE - worst, worst_residual=worst)
    report.values["relation_residuals"] = dict(double.relation_residuals)

    shortest = sorted(spectrum.records, key=lambda record: (record.ell_F, record.theta_plus))[:count]
    gaps = []
    for record in shortest:
        element = doubled_ortho_element(double, record.delta_pair)
        doubled = translation_lengths(element, tol).finsler
        gaps.append(abs(doubled - 2.0 * record.ell_F))
        logger.debug(f"D({record.delta_word}): ℓ^F = {doubled:.12f}, 2ℓ^F(α) = {2.0 * record.ell_F:.12f}")
    worst_gap = max(gaps, default=0.0)
    report.add("doubled_lengths", DOUBLE_TOLERANCE - worst_gap, worst_gap=worst_gap, checked=len(gaps))
    report.values["doubled_gaps"] = gaps
    return report


def gap_experiment(n: int = 2, L: float = 2.0, eta: float = 0.5, depth: int = 10,
                   tol: ToleranceProfile = DEFAULT_TOLERANCES) -> VerificationReport:
    """
    Product of Fuchsian factors whose A1/A2 lower bounds stay below η while ℓ^F(γ₀) = nL/2

    Factor i has cuffs (L, ·, ·) with its cuff i designed so that the
    orthogeodesic from γ₀ to γᵢ has 2 logcoth(ℓ/2) = L − ε, ε = η/n².
    """
    if n != 2:
        raise UnsupportedRankError(f"The gap construction on a pair of pants needs n = 2, got {n}", n=n)
    eps = eta / n ** 2
    report = VerificationReport(check="gap")

    factors = []
    for position in range(1, n + 1):
        cuffs = solve_cuff_for_target_ortho(L, eps, position=position)
        factor = build_pair_of_pants_fuchsian(cuffs, tol)
        spec = factor.spec
        length = orthotube_lengths(factor, spec.peripheral(0), spec.peripheral(position), tol)[0]
        designed = float(2.0 * logcoth(length / 2.0))
        report.add(f"designed_ortho[{position}]", DESIGN_TOLERANCE - abs(designed - (L - eps)),
                   value=designed, target=L - eps)
        report.values[f"cuffs_{position}"] = list(cuffs)
        factors.append(factor)

    rho = product_of_fuchsians(factors, tol)
    spectrum = basmajian_partial_sums(rho, 0, depth, tol)
    report.spectra.append(spectrum)
    report.add("ell_F", LENGTH_TOLERANCE - abs(spectrum.ell_F - n * L / 2.0), value=spectrum.ell_F, target=n * L / 2.0)
    report.add("ell_R", LENGTH_TOLERANCE - abs(spectrum.ell_R - np.sqrt(n) * L), value=spectrum.ell_R,
               target=float(np.sqrt(n) * L))
    report.add("finsler_bound_below_eta", eta - spectrum.lower_sum, strict=True, value=spectrum.lower_sum)
    report.add("riemannian_bound_below_eta", eta - spectrum.riemannian_lower_sum, strict=True,
               value=spectrum.riemannian_lower_sum)
    report.values.update({"n": n, "L": L, "eta": eta, "eps": eps})
    return report
