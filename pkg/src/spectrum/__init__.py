# Orthospectrum
from .orthotubes import (
    lengths_from_eigenvalues,
    logcoth,
    orient_pair,
    orthotube_for_pair,
    orthotube_from_lagrangians,
    orthotube_lengths,
    theta_coordinate,
    theta_in_frame,
)
from .enumeration import MAX_WORD_LENGTH, OrthotubeRecord, PeripheralChart, enumerate_orthotubes, fold_into_window
from .sums import SpectrumReport, basmajian_partial_sums, depth_table
from .verification import (
    Verdict,
    VerificationReport,
    double_check,
    gap_experiment,
    theorem_b_terms,
    verify_theorem_a,
    verify_theorem_b,
)
