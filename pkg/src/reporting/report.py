"""
Report documents and their JSON / CSV encodings
"""

import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from src import __version__
from src.spectrum.sums import SpectrumReport
from src.spectrum.verification import Verdict
from src.surfaces.words import BOUNDARY_NAMES

logger = logging.getLogger(__name__)

TOOL_NAME = "symportho"
CSV_FIXED_COLUMNS = ["delta_word", "theta_plus", "theta_minus", "ell_F", "ell_R"]
CSV_TERM_COLUMNS = ["dF_term", "lower_term", "upper_term"]
REPORT_KEYS = ["command", "config", "representation", "verdicts", "values", "spectra"]


def plain(value: Any) -> Any:
    """numpy and pandas scalars/arrays to JSON-native values"""
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def spectrum_to_dict(spectrum: Union[SpectrumReport, Dict[str, Any]]) -> Dict[str, Any]:
    if isinstance(spectrum, dict):
        return plain(spectrum)
    records = []
    for record in spectrum.records:
        row = record.as_row()
        row.update({
            "depth": record.depth,
            "target_boundary": BOUNDARY_NAMES[record.target_boundary],
            "self_orthotube": record.self_orthotube,
        })
        records.append(row)
    return plain({
        "boundary": spectrum.boundary_name,
        "gamma_word": str(spectrum.gamma_word),
        "n": spectrum.n,
        "ell_F": spectrum.ell_F,
        "ell_R": spectrum.ell_R,
        "ell_vect": list(spectrum.ell_vect),
        "depth": spectrum.depth,
        "record_count": len(spectrum.records),
        "self_orthotubes": spectrum.self_orthotubes,
        "partial_sums": {
            "identity": spectrum.identity_sum,
            "lower": spectrum.lower_sum,
            "upper": spectrum.upper_sum,
            "riemannian_lower": spectrum.riemannian_lower_sum,
        },
        "residual": spectrum.residual,
        "within_bound": spectrum.within_bound,
        "by_depth": spectrum.by_depth.to_dict(orient="records"),
        "records": records,
    })


@dataclass
class ReportDocument:
    """Everything one command produced, in serialization order"""

    command: str
    config: Dict[str, Any]
    representation: Optional[str] = None
    spectra: List[Union[SpectrumReport, Dict[str, Any]]] = field(default_factory=list)
    verdicts: List[Verdict] = field(default_factory=list)
    values: Dict[str, Any] = field(default_factory=dict)
    timings: Optional[Dict[str, float]] = None

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts)

    def to_dict(self) -> Dict[str, Any]:
        document = {
            "tool": TOOL_NAME,
            "version": __version__,
            "command": self.command,
            "passed": self.passed,
            "representation": self.representation,
            "config": self.config,
            "tolerances": self.config.get("tolerances"),
            "verdicts": [verdict.as_dict() for verdict in self.verdicts],
            "values": self.values,
            "spectra": [spectrum_to_dict(spectrum) for spectrum in self.spectra],
        }
        if self.timings is not None:
            document["timings"] = self.timings
        return plain(document)

    def records_frame(self) -> pd.DataFrame:
        """Records of the first spectrum with the CSV header"""
        first = self.spectra[0] if self.spectra else None
        if isinstance(first, dict):
            n, frame = int(first["n"]), pd.DataFrame(first["records"])
        elif first is not None:
            n, frame = first.n, first.records_frame()
        else:
            n, frame = int(self.config.get("n") or 1), pd.DataFrame()
        columns = CSV_FIXED_COLUMNS + [f"ell_vect_{index}" for index in range(1, n + 1)] + CSV_TERM_COLUMNS
        if frame.empty:
            return pd.DataFrame(columns=columns)
        return frame[columns]

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportDocument":
        """
        Rebuild a document from its JSON form

        Spectra stay in their serialized form; emitting the result reproduces the input.

        Raises:
            ValueError: not a report of this tool, or a required key is missing
        """
        if data.get("tool") != TOOL_NAME:
            raise ValueError(f"Not a {TOOL_NAME} report (tool={data.get('tool')!r})")
        missing = [key for key in REPORT_KEYS if key not in data]
        if missing:
            raise ValueError(f"Report is missing {', '.join(missing)}")
        if data.get("version") != __version__:
            logger.warning(f"Report written by version {data.get('version')}, reading with {__version__}")
        return cls(
            command=data["command"],
            config=data["config"],
            representation=data["representation"],
            spectra=list(data["spectra"]),
            verdicts=[Verdict.from_dict(verdict) for verdict in data["verdicts"]],
            values=data["values"],
            timings=data.get("timings"),
        )


def emit_report(document: ReportDocument, format: str = "json") -> bytes:
    """JSON: one object, fixed key order, shortest round-trip floats. CSV: one row per record"""
    if format == "json":
        text = json.dumps(document.to_dict(), indent=2, ensure_ascii=False, allow_nan=False)
        return (text + "\n").encode("utf-8")
    if format == "csv":
        return document.records_frame().to_csv(index=False, lineterminator="\n").encode("utf-8")
    raise ValueError(f"Unknown report format '{format}'")


def parse_report(payload: Union[bytes, str], format: str = "json") -> Union[ReportDocument, pd.DataFrame]:
    """Inverse of emit_report: a ReportDocument for JSON, the records frame for CSV"""
    if isinstance(payload, bytes):
        payload = payload.decode("utf-8")
    if format == "json":
        return ReportDocument.from_dict(json.loads(payload))
    if format == "csv":
        return pd.read_csv(io.StringIO(payload), dtype={"delta_word": str}, keep_default_na=False,
                           float_precision="round_trip")
    raise ValueError(f"Unknown report format '{format}'")


def write_report(document: ReportDocument, format: str, path: Optional[str]) -> int:
    """Write to the path, or to stdout when path is None; returns the byte count"""
    payload = emit_report(document, format)
    if path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(payload)
        logger.info(f"📄 Report written to {target} ({len(payload)} bytes)")
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return len(payload)
