"""
Command dispatch: RunConfig → representation → module operation → ReportDocument

Key principles:
- One handler per command, all with the same signature
- Module errors are re-raised with the command, boundary and depth in their context
- No randomness; a fixed config gives a byte-identical JSON report (timings are opt-in)
"""

import time
from typing import Callable, Dict, List, Tuple

import numpy as np

from src.errors import ConfigIssue, ConfigValidationError, SympOrthoError, UsageError
from src.geometry.lagrangian import SymplecticElement
from src.reporting.config_schema import GENERATORS, RunConfig
from src.reporting.report import ReportDocument
from src.spectrum import (
    VerificationReport,
    basmajian_partial_sums,
    double_check,
    gap_experiment,
    verify_theorem_a,
    verify_theorem_b,
)
from src.surfaces import (
    PAIR_OF_PANTS,
    FreeWord,
    Representation,
    build_pair_of_pants_fuchsian,
    corollary_width,
    diagonal_embed,
    product_of_fuchsians,
    representation_from_matrices,
    translation_lengths,
)
from src.utils.logger import bind_run, command_logger

COMMANDS = ("lengths", "orthospectrum", "verify-a1", "verify-a2", "verify-b", "double-check", "gap", "width")


def build_representation(config: RunConfig) -> Representation:
    """The representation described by the config"""
    rep = config.representation
    if rep is None:
        raise ConfigValidationError([ConfigIssue("$.representation", "missing", "this command needs a representation")])
    tol = config.tolerances

    if rep.kind == "fuchsian":
        return build_pair_of_pants_fuchsian(rep.cuffs, tol)
    if rep.kind in ("diagonal", "twisted_diagonal"):
        base = build_pair_of_pants_fuchsian(rep.cuffs, tol)
        twists = {GENERATORS.index(name) + 1: matrix for name, matrix in rep.twists.items()}
        return diagonal_embed(base, config.n, twists, tol)
    if rep.kind == "product":
        return product_of_fuchsians([build_pair_of_pants_fuchsian(cuffs, tol) for cuffs in rep.factors], tol)
    return representation_from_matrices(rep.generators, PAIR_OF_PANTS, tol)


def _from_verification(report: VerificationReport) -> Tuple[list, list, dict]:
    return report.spectra, report.verdicts, report.values


def _lengths(config: RunConfig, rho: Representation):
    boundaries = []
    verification = VerificationReport(check="lengths")
    root = np.sqrt(rho.n)
    for index, name in enumerate(rho.spec.boundary_names):
        lengths = rho.translation_lengths(index)
        boundaries.append({
            "boundary": name,
            "word": str(rho.spec.peripheral(index)),
            "ell_vect": list(lengths.vectorial),
            "ell_F": lengths.finsler,
            "ell_R": lengths.riemannian,
        })
        verification.add(f"length_comparison[{name}]", lengths.riemannian - 2.0 * lengths.finsler / root,
                         config.tolerances.slack(max(1.0, lengths.riemannian)))
    return [], verification.verdicts, {"boundaries": boundaries}


def _orthospectrum(config: RunConfig, rho: Representation):
    spectrum = basmajian_partial_sums(rho, config.boundary, config.depth, config.tolerances)
    verification = VerificationReport(check="orthospectrum", spectra=[spectrum])
    verification.add(f"identity_sum[{spectrum.boundary_name}]", float(np.min(spectrum.by_depth["residual"])),
                     spectrum.tolerance)
    return [spectrum], verification.verdicts, {}


def _verify_a(metric: str) -> Callable:
    def handler(config: RunConfig, rho: Representation):
        report = verify_theorem_a(rho, metric, config.depth, config.tolerances)
        # the requested boundary leads, so its records are the CSV rows
        report.spectra.sort(key=lambda spectrum: spectrum.boundary_name != config.boundary)
        return _from_verification(report)
    return handler


def _verify_b(config: RunConfig, rho: Representation):
    return _from_verification(verify_theorem_b(rho, config.boundary, config.depth, config.tolerances))


def _double_check(config: RunConfig, rho: Representation):
    return _from_verification(double_check(rho, config.boundary, config.depth, tol=config.tolerances))


def _gap(config: RunConfig, rho: Representation):
    return _from_verification(gap_experiment(config.n, config.gap.L, config.gap.eta, config.depth, config.tolerances))


def _width(config: RunConfig, rho: Representation):
    words = list(config.width_words) or [str(word) for word in rho.spec.peripherals]
    widths = []
    for text in words:
        word = FreeWord.parse(text)
        lengths = translation_lengths(SymplecticElement(rho.evaluate(word).matrix, check=False), config.tolerances)
        widths.append({
            "word": str(word),
            "ell_R": lengths.riemannian,
            "width": corollary_width(lengths.riemannian, rho.n),
        })
    return [], [], {"widths": widths}


_HANDLERS: Dict[str, Callable] = {
    "lengths": _lengths,
    "orthospectrum": _orthospectrum,
    "verify-a1": _verify_a("finsler"),
    "verify-a2": _verify_a("riemannian"),
    "verify-b": _verify_b,
    "double-check": _double_check,
    "gap": _gap,
    "width": _width,
}


def run_command(command: str, config: RunConfig) -> ReportDocument:
    """
    Run one command on a validated config

    Raises:
        UsageError: unknown command
        SympOrthoError: module failures, with command/boundary/depth added to the context
    """
    if command not in _HANDLERS:
        raise UsageError(f"Unknown command '{command}', expected one of {', '.join(COMMANDS)}")

    log = command_logger(command)
    bind_run(command, config.boundary, config.n, config.depth)
    log.debug(f"Resolved config: {config.echo()}")

    started = time.perf_counter()
    timings: Dict[str, float] = {}
    try:
        rho = None
        if command != "gap":
            rho = build_representation(config)
            timings["build"] = time.perf_counter() - started
        spectra, verdicts, values = _HANDLERS[command](config, rho)
    except SympOrthoError as error:
        error.context.setdefault("command", command)
        error.context.setdefault("boundary", config.boundary)
        error.context.setdefault("depth", config.depth)
        raise
    timings["total"] = time.perf_counter() - started

    document = ReportDocument(
        command=command,
        config=config.echo(),
        representation=rho.label if rho is not None else "gap product",
        spectra=list(spectra),
        verdicts=list(verdicts),
        values=values,
        timings=timings if config.include_timings else None,
    )
    failed: List[str] = [verdict.name for verdict in document.verdicts if not verdict.passed]
    log.info(f"{len(document.verdicts)} verdicts in {timings['total']:.2f}s, "
             f"{'all passed' if not failed else 'failed: ' + ', '.join(failed)}")
    return document
