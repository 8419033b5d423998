"""Asymptotic DPTS secret key rate under the collective beam-splitting attack.

Units: information quantities are base-4 (1 = one quaternary symbol = 2 bits).
A *measurement* is one interference of two adjacent sub-blocks and spans two
pulse slots, so rates per measurement and bits per pulse coincide numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .entropy import entropy_s4
from .holevo import EveBound, eve_bound
from .params import SystemParams, mean_block_length, transmittance, validate

BITS_PER_SYMBOL = 2.0


@dataclass(frozen=True)
class RateBreakdown:
    t: float
    r_click: float  # signal click probability per measurement
    r_total: float  # including dark counts
    prefactor_f: float
    err: tuple[float, float, float, float]
    h_a_given_b: float
    i_ab: float


@dataclass(frozen=True)
class KeyRateReport:
    rsk_per_measurement: float
    rsk_bits_per_pulse: float
    rsk_bits_per_second: float
    secure: bool
    breakdown: RateBreakdown
    eve: EveBound


def sifting_prefactor(params: SystemParams) -> float:
    """Fraction of clicks kept for the key: no decoy, no flipped block boundary."""
    n = mean_block_length(params.encoding)
    return (1.0 - params.encoding.p_decoy) * (n - 1.0) / n


def error_probabilities(r_click, dark, visibility):
    """Outcome-class probabilities ``(e1, e2, e3, e4)`` given a click.

    ``e1`` is the total symbol error; ``e2`` phase bit wrong only, ``e3`` time
    bit wrong only, ``e4`` both wrong.  Visibility only moves the click to the
    other detector; a dark count lands in any of the four (slot, detector)
    cells.
    """
    r_total = r_click + 4 * dark * (1 - r_click)
    phase = r_click * (1 - visibility) / 2
    noise = dark * (1 - r_click)
    e3 = noise / r_total
    return ((phase + 3 * noise) / r_total, (phase + noise) / r_total, e3, e3)


def conditional_entropy(err) -> float:
    e1, e2, e3, e4 = err
    return entropy_s4(1 - e1) + entropy_s4(e2) + entropy_s4(e3) + entropy_s4(e4)


def rate_breakdown(params: SystemParams) -> RateBreakdown:
    validate(params)
    t = transmittance(params.channel)
    rx = params.receiver
    r_click = -math.expm1(-params.source.mu * t * rx.efficiency) / 2
    r_total = r_click + 4 * rx.dark_count_prob * (1 - r_click)
    err = error_probabilities(r_click, rx.dark_count_prob, rx.visibility)
    h = conditional_entropy(err)
    return RateBreakdown(
        t=t,
        r_click=r_click,
        r_total=r_total,
        prefactor_f=sifting_prefactor(params),
        err=err,
        h_a_given_b=h,
        i_ab=1.0 - h,
    )


def params_eve_bound(params: SystemParams, *, printed: bool = False) -> EveBound:
    return eve_bound(
        params.source.mu,
        transmittance(params.channel),
        mean_block_length(params.encoding),
        printed=printed,
    )


def detector_limited_rate(raw_click_rate_hz: float, dead_time_s: float, n_detectors: int = 2) -> float:
    """Registered click rate for non-paralyzable detectors sharing clicks evenly."""
    per_det = raw_click_rate_hz / n_detectors
    return n_detectors * per_det / (1.0 + per_det * dead_time_s)


def dead_time_throughput(
    params: SystemParams,
    info_per_click_bits: float = BITS_PER_SYMBOL,
    *,
    breakdown: RateBreakdown | None = None,
    eve: EveBound | None = None,
) -> float:
    """Secret bits per second once detector dead time caps the click rate.

    Measurements happen at ``pulse_rate / 2``; their clicks are split over
    two detectors.  Negative secret fractions clamp to zero.
    """
    b = breakdown if breakdown is not None else rate_breakdown(params)
    e = eve if eve is not None else params_eve_bound(params)
    raw = params.source.pulse_rate_hz / 2 * b.r_total
    clicks = detector_limited_rate(raw, params.receiver.dead_time_s)
    return b.prefactor_f * max(0.0, b.i_ab - e.chi) * info_per_click_bits * clicks


def secret_key_rate(params: SystemParams, *, printed: bool = False) -> KeyRateReport:
    b = rate_breakdown(params)
    e = params_eve_bound(params, printed=printed)
    secure = b.i_ab > e.chi
    if not secure:
        return KeyRateReport(0.0, 0.0, 0.0, False, b, e)
    per_meas = b.prefactor_f * b.r_total * (b.i_ab - e.chi)
    return KeyRateReport(
        rsk_per_measurement=per_meas,
        rsk_bits_per_pulse=per_meas,
        rsk_bits_per_second=dead_time_throughput(params, breakdown=b, eve=e),
        secure=True,
        breakdown=b,
        eve=e,
    )
