"""
Basmajian partial sums for one boundary component
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
import pandas as pd

from src.geometry.lagrangian import LagrangianFrame, WeylVector
from src.linalg import DEFAULT_TOLERANCES, ToleranceProfile
from src.spectrum.enumeration import OrthotubeRecord, PeripheralChart, enumerate_orthotubes
from src.surfaces.representation import Representation
from src.surfaces.words import FreeWord

logger = logging.getLogger(__name__)

DEPTH_COLUMNS = ["depth", "records", "identity_sum", "lower_sum", "upper_sum", "riemannian_lower_sum", "residual"]


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """
    Orthotubes of one boundary γ found up to `depth`, with their partial sums

    identity_sum = Σ dF_term approaches ℓ^F(γ) from below; lower_sum and
    upper_sum bracket it term by term. by_depth holds the same sums restricted
    to records whose canonical word has length ≤ d, for every d ≤ depth.
    """

    gamma_word: FreeWord
    boundary: int
    boundary_name: str
    n: int
    ell_F: float
    ell_R: float
    ell_vect: WeylVector
    depth: int
    records: List[OrthotubeRecord]
    identity_sum: float
    lower_sum: float
    upper_sum: float
    riemannian_lower_sum: float
    by_depth: pd.DataFrame
    basepoint: LagrangianFrame
    tolerance: float

    @property
    def residual(self) -> float:
        """ℓ^F(γ) − Σ dF_term"""
        return self.ell_F - self.identity_sum

    @property
    def within_bound(self) -> bool:
        return bool(np.all(self.by_depth["residual"] >= -self.tolerance))

    @property
    def self_orthotubes(self) -> int:
        return sum(1 for record in self.records if record.self_orthotube)

    def records_frame(self) -> pd.DataFrame:
        """One row per record, CSV columns first"""
        rows = [record.as_row() for record in self.records]
        if rows:
            return pd.DataFrame(rows)
        columns = ["delta_word", "theta_plus", "theta_minus", "ell_F", "ell_R"]
        columns += [f"ell_vect_{index}" for index in range(1, self.n + 1)]
        return pd.DataFrame(columns=columns + ["dF_term", "lower_term", "upper_term"])


def depth_table(records: List[OrthotubeRecord], depth: int, ell_F: float) -> pd.DataFrame:
    """Cumulative sums per maximal word length 0..depth"""
    frame = pd.DataFrame({
        "depth": [record.depth for record in records],
        "identity_sum": [record.dF_term for record in records],
        "lower_sum": [record.lower_term for record in records],
        "upper_sum": [record.upper_term for record in records],
        "riemannian_lower_sum": [record.riemannian_lower_term for record in records],
    }, columns=["depth", "identity_sum", "lower_sum", "upper_sum", "riemannian_lower_sum"])
    frame["records"] = 1

    levels = pd.RangeIndex(depth + 1, name="depth")
    table = frame.groupby("depth").sum().reindex(levels, fill_value=0).astype(float).cumsum()
    table["records"] = table["records"].astype(int)
    table["residual"] = ell_F - table["identity_sum"]
    return table.reset_index()[DEPTH_COLUMNS]


def basmajian_partial_sums(rho: Representation, boundary=0, depth: int = 6,
                           tol: ToleranceProfile = DEFAULT_TOLERANCES,
                           conjugator: Optional[FreeWord] = None,
                           chart: Optional[PeripheralChart] = None) -> SpectrumReport:
    """Enumerate orthotubes from the boundary and sum their Basmajian terms"""
    chart = chart or PeripheralChart(rho, boundary, conjugator, tol)
    records = enumerate_orthotubes(rho, depth=depth, tol=tol, chart=chart)
    lengths = rho.translation_lengths(chart.boundary, chart.conjugator)
    table = depth_table(records, depth, chart.ell_F)

    report = SpectrumReport(
        gamma_word=chart.gamma_word,
        boundary=chart.boundary,
        boundary_name=rho.spec.boundary_names[chart.boundary],
        n=rho.n,
        ell_F=lengths.finsler,
        ell_R=lengths.riemannian,
        ell_vect=lengths.vectorial,
        depth=depth,
        records=records,
        identity_sum=float(sum(record.dF_term for record in records)),
        lower_sum=float(sum(record.lower_term for record in records)),
        upper_sum=float(sum(record.upper_term for record in records)),
        riemannian_lower_sum=float(sum(record.riemannian_lower_term for record in records)),
        by_depth=table,
        basepoint=chart.basepoint,
        tolerance=tol.slack(max(1.0, lengths.finsler)),
    )
    logger.info(f"{report.boundary_name}: {len(records)} records at depth {depth}, "
                f"Σ dF = {report.identity_sum:.10f} of ℓ^F = {report.ell_F:.10f}")
    return report
