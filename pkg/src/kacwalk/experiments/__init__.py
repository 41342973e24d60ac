"""Reproducible Monte Carlo experiments and their output files."""

from .config import KINDS, ExperimentConfig, config_from_dict, load_config
from .diagnostics import (
    EXPERIMENTS,
    coalescence_experiment,
    contraction_experiment,
    couple_experiment,
    coupon_collector_experiment,
    coverage_probability,
    mixing_diagnostics,
    near_pair,
    partition_experiment,
    run_experiment,
    small_values_experiment,
    walk_experiment,
)
from .records import SUMMARY_COLUMNS, ResultRecord, emit_results
