"""Differential phase time shifting (DPTS) QKD: key rates, Holevo bounds and Monte-Carlo simulation."""

from .baselines import BaselineReport, baseline_cow, baseline_dps
from .entropy import entropy_h2, entropy_h4, entropy_s4
from .holevo import (
    EveBound,
    eve_bound,
    eve_success_prob,
    gamma,
    holevo_primary,
    holevo_secondary,
    holevo_total,
    time_bit_holevo,
)
from .keyrate import (
    KeyRateReport,
    RateBreakdown,
    dead_time_throughput,
    rate_breakdown,
    secret_key_rate,
)
from .optimize import MuOptimum, golden_section_max, optimize_mu
from .oracle import holevo_brute, mixture_entropy, overlap
from .params import (
    ChannelParams,
    EncodingParams,
    ParameterError,
    ReceiverParams,
    SourceParams,
    SystemParams,
    dead_time_limited_params,
    loss_limited_params,
    mean_block_length,
    transmittance,
    validate,
)
from .simulator import alice_encode, bob_detect, estimate_visibility, run_experiment, sift

__version__ = "0.1.0"

__all__ = [
    "BaselineReport", "baseline_cow", "baseline_dps",
    "entropy_h2", "entropy_h4", "entropy_s4",
    "EveBound", "eve_bound", "eve_success_prob", "gamma", "holevo_primary",
    "holevo_secondary", "holevo_total", "time_bit_holevo",
    "KeyRateReport", "RateBreakdown", "dead_time_throughput", "rate_breakdown", "secret_key_rate",
    "MuOptimum", "golden_section_max", "optimize_mu",
    "holevo_brute", "mixture_entropy", "overlap",
    "ChannelParams", "EncodingParams", "ParameterError", "ReceiverParams", "SourceParams",
    "SystemParams", "dead_time_limited_params", "loss_limited_params", "mean_block_length",
    "transmittance", "validate",
    "alice_encode", "bob_detect", "estimate_visibility", "run_experiment", "sift",
]
