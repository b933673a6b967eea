# SPDX-FileCopyrightText: 2025-present Keisuke Magara <197999578+keimag-maru@users.noreply.github.com>
#
# SPDX-License-Identifier: MIT
from .command import Command
from .config import ExperimentConfig, OracleMode, TrialOutcome, build_config
from .experiments import (
    certificate_trials,
    full_rank_sweep,
    full_rank_via_gzp,
    gmmds_witness_search,
    monte_carlo_puncture,
    robustness_trials,
    validate_pipeline,
    verify_gmmds_witness,
)
from .oracle import bad_list_oracle, full_length_blowup_search, min_total_distance

__all__ = [
    "Command",
    "ExperimentConfig",
    "OracleMode",
    "TrialOutcome",
    "build_config",
    "certificate_trials",
    "full_rank_sweep",
    "full_rank_via_gzp",
    "gmmds_witness_search",
    "monte_carlo_puncture",
    "robustness_trials",
    "validate_pipeline",
    "verify_gmmds_witness",
    "bad_list_oracle",
    "full_length_blowup_search",
    "min_total_distance",
]
