"""Link-level simulator for buffer-aided multi-antenna relay selection."""

from ._core import (
    BerRecord,
    ConfigError,
    ExperimentConfig,
    PepRecord,
    StallError,
    candidate_vectors,
    constellation_symbols,
    cooperative_gain,
    difference_values,
    direct_gain,
    emit_csv,
    load_config,
    min_distance,
    ml_detect,
    mmd_metric_evals,
    mmd_op_count,
    pairwise_distance,
    pep_worst_case,
    q_function,
    qn_metric,
    qn_op_count,
    run_campaign,
    run_pep_campaign,
)

__all__ = [
    "BerRecord",
    "ConfigError",
    "ExperimentConfig",
    "PepRecord",
    "StallError",
    "candidate_vectors",
    "constellation_symbols",
    "cooperative_gain",
    "difference_values",
    "direct_gain",
    "emit_csv",
    "load_config",
    "min_distance",
    "ml_detect",
    "mmd_metric_evals",
    "mmd_op_count",
    "pairwise_distance",
    "pep_worst_case",
    "q_function",
    "qn_metric",
    "qn_op_count",
    "run_campaign",
    "run_pep_campaign",
]

__version__ = "0.1.0"
