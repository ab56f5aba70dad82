"""Alpha-fair online coded caching over a fading Gaussian broadcast channel.

Submodules: caching (placement and codeword loads), channel (block fading),
broadcast (capacity region and weighted-rate maximization), policy (the
drift-plus-penalty controller), baselines (opportunistic unicast and fixed
TDMA coded caching), engine (slot simulation), feasibility (static-policy
stability checks), config and cli (experiment plumbing).
"""

from .broadcast import (RateAllocation, max_weighted_rate, reduce_weights,
                        region_contains, solve_power_allocation)
from .caching import (CacheParams, codeword_load, delivery_target_bits,
                      enumerate_segments, segment_sizes, subfile_fraction,
                      total_load)
from .channel import ChannelParams, ConstantChannel, FadingProcess, db_to_linear
from .config import ConfigError, ExperimentConfig, expand_runs, load_config
from .engine import POLICIES, RunResult, RunSpec, RunSummary, run
from .feasibility import (FeasibilityReport, StaticPolicy, check_feasibility,
                          default_rate_points, linear_trend, mean_service_rate,
                          simulate_static)
from .policy import PolicyParams, QueueState, SlotDecision, utility

__version__ = "0.1.0"

__all__ = [
    "CacheParams", "ChannelParams", "ConfigError", "ConstantChannel",
    "ExperimentConfig", "FadingProcess", "FeasibilityReport", "POLICIES",
    "PolicyParams", "QueueState", "RateAllocation", "RunResult", "RunSpec",
    "RunSummary", "SlotDecision", "StaticPolicy", "check_feasibility",
    "codeword_load", "db_to_linear", "default_rate_points",
    "delivery_target_bits", "enumerate_segments", "expand_runs",
    "linear_trend", "load_config", "max_weighted_rate", "mean_service_rate",
    "reduce_weights", "region_contains", "run", "segment_sizes",
    "simulate_static", "solve_power_allocation", "subfile_fraction",
    "total_load", "utility",
]
