"""On-line signature verification: alignment kernels, verifiers and the benchmark protocol."""

from ._core import (
    AlignmentResult,
    Error,
    ParseError,
    Signature,
    baseline_dtw_score,
    compute_eer,
    derivative,
    dtw,
    evaluate,
    global_features,
    normalize_mad,
    normalize_sigstat,
    parse_signature_file,
    path_signature,
    rank_teams,
    remove_zero_pressure,
    run_protocol,
    sigstat_global_score,
    sigstat_local_score,
    soft_dtw,
    tanh_normalize,
    triplet_loss,
    weighted_fusion,
    write_signature_file,
    write_synthetic_dataset,
)

__all__ = [name for name in dir() if not name.startswith("_")]
