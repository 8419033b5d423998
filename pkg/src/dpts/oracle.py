"""Brute-force Holevo quantities for finite mixtures of multimode coherent states.

The nonzero spectrum of ``rho = sum_i p_i |psi_i><psi_i|`` equals that of the
weighted Gram matrix ``G_ij = sqrt(p_i p_j) <psi_i|psi_j>``, so a small
symmetric eigenproblem replaces any Fock-space truncation.  Only real
amplitudes are supported (phases 0 and pi), which keeps every overlap real.

Nothing here imports the closed-form bounds; the module is meant as an
independent check of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

PROB_TOL = 1e-12
RESIDUAL_TOL = 1e-10
NEGATIVE_TOL = 1e-12
ZERO_CUTOFF = 1e-15


@dataclass(frozen=True)
class CoherentSequence:
    """Product state ``|a_1>|a_2>...`` of real coherent amplitudes (0 = vacuum)."""

    amplitudes: tuple[float, ...]

    def __post_init__(self):
        amps = tuple(float(a) for a in self.amplitudes)
        if not amps:
            raise ValueError("a coherent sequence needs at least one slot")
        if not all(math.isfinite(a) for a in amps):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    def __len__(self):
        return len(self.amplitudes)


@dataclass(frozen=True)
class Ensemble:
    """Weighted pure states, partitioned into groups (Alice's conditioning labels)."""

    probabilities: tuple[float, ...]
    states: tuple[CoherentSequence, ...]
    groups: tuple = ()

    def __post_init__(self):
        if len(self.probabilities) != len(self.states):
            raise ValueError("one probability per state required")
        if not self.states:
            raise ValueError("empty ensemble")
        p = np.asarray(self.probabilities, dtype=float)
        if np.any(p < 0) or abs(p.sum() - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities must be non-negative and sum to 1, got sum {p.sum()!r}")
        if len({len(s) for s in self.states}) != 1:
            raise ValueError("all states must have the same number of slots")
        groups = tuple(self.groups) if self.groups else (0,) * len(self.states)
        if len(groups) != len(self.states):
            raise ValueError("one group label per state required")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def from_members(cls, members):
        """Build from ``(probability, amplitudes, group)`` triples."""
        probs, states, groups = zip(*members)
        return cls(probs, tuple(CoherentSequence(tuple(s)) for s in states), groups)

    def group(self, label) -> "Ensemble":
        """The normalised sub-ensemble carrying ``label``."""
        idx = [i for i, g in enumerate(self.groups) if g == label]
        w = sum(self.probabilities[i] for i in idx)
        return Ensemble(
            tuple(self.probabilities[i] / w for i in idx),
            tuple(self.states[i] for i in idx),
            tuple(label for _ in idx),
        )

    def group_weights(self) -> dict:
        out: dict = {}
        for p, g in zip(self.probabilities, self.groups):
            out[g] = out.get(g, 0.0) + p
        return out


def overlap(a: CoherentSequence, b: CoherentSequence) -> float:
    """``<a|b>`` for real amplitudes: ``prod_k exp(-(a_k - b_k)**2 / 2)``."""
    if len(a) != len(b):
        raise ValueError("sequences differ in length")
    d = np.subtract(a.amplitudes, b.amplitudes)
    return math.exp(-0.5 * float(d @ d))


def gram_matrix(e: Ensemble) -> np.ndarray:
    amps = np.array([s.amplitudes for s in e.states])
    diff = amps[:, None, :] - amps[None, :, :]
    sq = np.sqrt(np.asarray(e.probabilities, dtype=float))
    return np.outer(sq, sq) * np.exp(-0.5 * np.einsum("ijk,ijk->ij", diff, diff))


def density_spectrum(e: Ensemble) -> np.ndarray:
    """Nonzero eigenvalues of the ensemble's density operator, sorted ascending."""
    g = gram_matrix(e)
    lam, vec = np.linalg.eigh(g)
    residual = np.max(np.abs(g @ vec - vec * lam))
    if residual > RESIDUAL_TOL:
        raise ArithmeticError(f"eigen-decomposition residual {residual:.3g}")
    if lam.min() < -NEGATIVE_TOL:
        raise ArithmeticError(f"Gram matrix is not positive semidefinite ({lam.min():.3g})")
    return lam[lam > ZERO_CUTOFF]


def mixture_entropy(e: Ensemble, base: float = 4.0) -> float:
    """Von Neumann entropy of the mixture (base-4 by default)."""
    lam = density_spectrum(e)
    return float(-np.sum(lam * np.log(lam)) / np.log(base))


def holevo_quantity(e: Ensemble, base: float = 4.0) -> float:
    """``S(rho) - sum_g P_g S(rho_g)`` over the ensemble's groups."""
    cond = sum(w * mixture_entropy(e.group(g), base) for g, w in e.group_weights().items())
    return mixture_entropy(e, base) - cond


def dpts_eve_ensemble(alpha_e: float) -> Ensemble:
    """Eve's eight four-slot states, grouped by Alice's symbol 0..3."""
    a = alpha_e
    members = []
    for symbol, (first, second) in enumerate([(1, 1), (1, -1)] * 2):
        late = symbol >= 2
        for sign in (1, -1):
            x, y = sign * first * a, sign * second * a
            amps = (0.0, x, 0.0, y) if late else (x, 0.0, y, 0.0)
            members.append((1 / 8, amps, symbol))
    return Ensemble.from_members(members)


def time_bit_ensemble(alpha_e: float) -> Ensemble:
    """Eve's two-slot sub-block states, grouped by early / late pulse."""
    a = alpha_e
    return Ensemble.from_members(
        [
            (0.25, (a, 0.0), "early"),
            (0.25, (-a, 0.0), "early"),
            (0.25, (0.0, a), "late"),
            (0.25, (0.0, -a), "late"),
        ]
    )


class BruteHolevo(NamedTuple):
    chi0: float
    chi1_bracket: float
    chi1: float | None


def _h2(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


def holevo_brute(mu: float, t: float, mean_block_length: float | None = None) -> BruteHolevo:
    """Numerical primary and secondary Holevo quantities for a given ``mu`` and ``t``.

    ``chi1`` is only filled in when ``mean_block_length`` is given, using
    Eve's success probability ``(N - 2) / (N - 1)``.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    alpha_e = math.sqrt(mu * (1 - t))
    chi0 = holevo_quantity(dpts_eve_ensemble(alpha_e))
    bracket = holevo_quantity(time_bit_ensemble(alpha_e))
    chi1 = None
    if mean_block_length is not None:
        p_e = (mean_block_length - 2) / (mean_block_length - 1)
        chi1 = 0.5 * (1 - _h2(p_e)) * bracket
    return BruteHolevo(chi0, bracket, chi1)

