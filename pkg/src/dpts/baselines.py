"""DPS and COW comparison models under the same beam-splitting attack.

Both use bits.  Eve's Holevo bound for a balanced pair of pure states with
overlap ``s`` is ``h2((1 - s) / 2)``; for DPS the pair is ``|+a_E>, |-a_E>``
(``s = exp(-2 mu (1 - t))``), for COW it is ``|a_E, 0>, |0, a_E>``
(``s = exp(-mu (1 - t))``).  These are coarse models meant for qualitative
comparison with DPTS.  The COW monitoring line is not modelled beyond the
decoy fraction, which favours COW.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .entropy import entropy_h2
from .keyrate import detector_limited_rate
from .params import SystemParams, transmittance, validate


@dataclass(frozen=True)
class BaselineReport:
    protocol: str
    mu: float
    t: float
    click_prob: float  # signal click probability per bit
    click_total: float  # including dark counts
    qber: float
    prefactor: float
    i_ab_bits: float
    chi_bits: float
    secret_bits_per_pulse: float
    secret_bits_per_second: float
    secure: bool


def pure_pair_holevo(overlap: float) -> float:
    """Holevo quantity (bits) of two equiprobable pure states."""
    return entropy_h2((1.0 - overlap) / 2.0)


def _report(protocol, params, t, click, total, qber, prefactor, chi, slots_per_bit):
    i_ab = 1.0 - entropy_h2(qber)
    secure = i_ab > chi
    net = max(0.0, i_ab - chi)
    per_pulse = prefactor * total * net / slots_per_bit
    raw = params.source.pulse_rate_hz / slots_per_bit * total
    per_second = prefactor * net * detector_limited_rate(raw, params.receiver.dead_time_s)
    return BaselineReport(
        protocol, params.source.mu, t, click, total, qber, prefactor,
        i_ab, chi, per_pulse, per_second, secure,
    )


def baseline_dps(params: SystemParams) -> BaselineReport:
    validate(params)
    mu, rx = params.source.mu, params.receiver
    t = transmittance(params.channel)
    click = -math.expm1(-mu * t * rx.efficiency)
    total = click + 2 * rx.dark_count_prob * (1 - click)
    qber = (click * (1 - rx.visibility) / 2 + rx.dark_count_prob * (1 - click)) / total
    chi = pure_pair_holevo(math.exp(-2 * mu * (1 - t)))
    return _report("dps", params, t, click, total, qber, 1.0, chi, slots_per_bit=1)


def baseline_cow(params: SystemParams) -> BaselineReport:
    """COW: one non-empty pulse per two-slot bit, time-of-arrival readout.

    A dark count in the empty slot flips the bit; visibility does not enter
    the data line.
    """
    validate(params)
    mu, rx = params.source.mu, params.receiver
    t = transmittance(params.channel)
    click = -math.expm1(-mu * t * rx.efficiency)
    total = click + 2 * rx.dark_count_prob * (1 - click)
    qber = rx.dark_count_prob * (1 - click) / total
    chi = pure_pair_holevo(math.exp(-mu * (1 - t)))
    prefactor = 1.0 - params.encoding.p_decoy
    return _report("cow", params, t, click, total, qber, prefactor, chi, slots_per_bit=2)
