"""Mean-photon-number optimisation.

The key rate is unimodal in ``mu`` but exactly zero wherever Eve's bound
exceeds Bob's information, so a plain golden-section search can stall on a
flat plateau.  A coarse grid first locates the peak, then golden-section
refines inside the neighbouring grid cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .baselines import baseline_cow, baseline_dps
from .keyrate import secret_key_rate
from .params import SystemParams

PROTOCOLS = ("dpts", "dps", "cow")
OBJECTIVES = ("bits_per_pulse", "bits_per_second")

_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class MuOptimum:
    protocol: str
    mu: float
    rate: float  # value of the objective at ``mu``
    bits_per_pulse: float
    bits_per_second: float
    secure: bool


def golden_section_max(f, a: float, b: float, tol: float = 1e-5) -> float:
    """Maximiser of a unimodal ``f`` on ``[a, b]`` to within ``tol``."""
    a, b = min(a, b), max(a, b)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def protocol_rates(params: SystemParams, protocol: str) -> tuple[float, float, bool]:
    """``(bits_per_pulse, bits_per_second, secure)`` for one protocol."""
    if protocol == "dpts":
        r = secret_key_rate(params)
        return r.rsk_bits_per_pulse, r.rsk_bits_per_second, r.secure
    if protocol == "dps":
        r = baseline_dps(params)
    elif protocol == "cow":
        r = baseline_cow(params)
    else:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    return r.secret_bits_per_pulse, r.secret_bits_per_second, r.secure


def optimize_mu(
    params: SystemParams,
    protocol: str = "dpts",
    mu_bounds: tuple[float, float] = (1e-3, 1.0),
    *,
    objective: str = "bits_per_second",
    grid_points: int = 64,
    tol: float = 1e-4,
) -> MuOptimum:
    """Mean photon number maximising the protocol's secret key rate.

    Without dead time both objectives are proportional and share the same
    maximiser; with dead time ``bits_per_second`` accounts for saturation.
    Returns ``mu_lo`` with zero rate when no ``mu`` in the bracket is secure.
    """
    lo, hi = mu_bounds
    if not 0 < lo < hi <= 2:
        raise ValueError("mu_bounds must satisfy 0 < lo < hi <= 2")
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    col = OBJECTIVES.index(objective)  # matches protocol_rates ordering

    def rate(mu):
        return protocol_rates(params.replace(mu=mu), protocol)[col]

    grid = np.linspace(lo, hi, grid_points)
    values = np.array([rate(m) for m in grid])
    k = int(np.argmax(values))
    if values[k] <= 0:
        pulse, second, _ = protocol_rates(params.replace(mu=lo), protocol)
        return MuOptimum(protocol, lo, 0.0, pulse, second, False)

    a, b = grid[max(k - 1, 0)], grid[min(k + 1, grid_points - 1)]
    mu = golden_section_max(rate, a, b, tol=tol)
    if rate(mu) < values[k]:
        mu = float(grid[k])
    pulse, second, secure = protocol_rates(params.replace(mu=mu), protocol)
    return MuOptimum(protocol, mu, (pulse, second)[col], pulse, second, secure)
