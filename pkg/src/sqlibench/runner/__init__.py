"""Experiment orchestration: configs, runs, grids, reports, ablation."""

from .ablation import evaluate_seed_only, seed_ablation
from .config import (
    DEFAULT_DETECTORS,
    DEFAULT_QUERY,
    ExperimentConfig,
    GridSpec,
    load_config_file,
    parse_config,
    parse_grid,
)
from .experiment import build_detectors, build_knowledge_index, run_experiment
from .grid import run_grid
from .reports import (
    correlation_table,
    correlations_from_columns,
    diversity_table,
    emit_report,
    format_text_table,
    load_summary,
    per_waf_matrix,
    read_reference_table,
    write_csv,
)

__all__ = [
    "DEFAULT_DETECTORS",
    "DEFAULT_QUERY",
    "ExperimentConfig",
    "GridSpec",
    "build_detectors",
    "build_knowledge_index",
    "correlation_table",
    "correlations_from_columns",
    "diversity_table",
    "emit_report",
    "evaluate_seed_only",
    "format_text_table",
    "load_config_file",
    "load_summary",
    "parse_config",
    "parse_grid",
    "per_waf_matrix",
    "read_reference_table",
    "run_experiment",
    "run_grid",
    "seed_ablation",
    "write_csv",
]
