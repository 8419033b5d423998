"""Monte-Carlo model of the DPTS pipeline: encode, transmit, detect, sift.

The receiver is modelled at the level of measurement windows rather than
optical fields.  Window ``i`` is the interference of sub-blocks ``i`` and
``i + 1`` in Bob's delay-line interferometer and has two time slots (early,
late) and two detectors, i.e. four (slot, detector) cells.

Conventions
-----------
* slot 0 = early, 1 = late; detector 0 = D1, 1 = D2.
* A phase difference of 0 between the interfering sub-blocks sends the click
  to D1 at unit visibility, a difference of pi to D2.
* Quaternary symbol = ``2 * time_bit + phase_bit``.

Eve is not simulated.  Her information only enters the empirical rate
estimate through the analytic Holevo bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .params import SystemParams, mean_block_length, transmittance, validate

EARLY, LATE, DECOY = 0, 1, -1
D1, D2 = 0, 1
SIGNAL, DARK = 0, 1

_SLOT_NAMES = {EARLY: "early", LATE: "late"}


@dataclass(frozen=True)
class SubBlock:
    index: int
    temporal_position: str | None  # None for decoy sub-blocks (both slots non-empty)
    phase_sign: int
    block_id: int
    is_decoy: bool


@dataclass(frozen=True, eq=False)
class PulseTrain:
    """Alice's transmitted sequence, one entry per sub-block."""

    position: np.ndarray  # EARLY / LATE, DECOY for decoy sub-blocks
    phase: np.ndarray  # +1 / -1
    block_id: np.ndarray
    block_lengths: np.ndarray  # pulses per block

    def __len__(self):
        return len(self.position)

    @property
    def is_decoy(self) -> np.ndarray:
        return self.position == DECOY

    def __getitem__(self, i) -> SubBlock:
        pos = int(self.position[i])
        return SubBlock(
            index=int(i) if i >= 0 else len(self) + int(i),
            temporal_position=_SLOT_NAMES.get(pos),
            phase_sign=int(self.phase[i]),
            block_id=int(self.block_id[i]),
            is_decoy=pos == DECOY,
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def to_bytes(self) -> bytes:
        return b"".join(
            a.tobytes() for a in (self.position, self.phase, self.block_id, self.block_lengths)
        )


class DetectionRecord(NamedTuple):
    pair_index: int
    slot: int
    detector: int
    cause: int  # SIGNAL or DARK; ground truth, never used by sifting


@dataclass(frozen=True, eq=False)
class Detections:
    """Bob's click stream, at most one click per measurement window."""

    pair_index: np.ndarray
    slot: np.ndarray
    detector: np.ndarray
    cause: np.ndarray
    n_windows: int
    removed_by_dead_time: int = 0

    def __len__(self):
        return len(self.pair_index)

    def records(self) -> list[DetectionRecord]:
        return [
            DetectionRecord(int(i), int(s), int(d), int(c))
            for i, s, d, c in zip(self.pair_index, self.slot, self.detector, self.cause)
        ]


@dataclass(frozen=True, eq=False)
class SiftedKeyPair:
    alice_symbols: np.ndarray
    bob_symbols: np.ndarray
    pair_index: np.ndarray
    discarded_boundary_count: int
    decoy_detection_count: int

    def __len__(self):
        return len(self.alice_symbols)


@dataclass(frozen=True)
class SimStats:
    measurements_attempted: int
    clicks: int
    dark_clicks: int
    dead_time_removed: int
    decoy_clicks: int
    discarded_boundary: int
    sifted_length: int
    error_rates: tuple[float, float, float, float]  # total, phase only, time only, both
    visibility: float | None
    detection_rate: float
    discard_fraction: float  # flipped-boundary clicks over non-decoy clicks
    sift_fraction: float  # kept clicks over all clicks
    secret_rate_estimate: float  # per measurement window, base-4 units
    elapsed_time_s: float


class Experiment(NamedTuple):
    stats: SimStats
    key: SiftedKeyPair
    train: PulseTrain
    detections: Detections


def split_seed(seed) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    """Independent (encoder, receiver) streams derived from one master seed."""
    enc, rx = np.random.SeedSequence(seed).spawn(2)
    return enc, rx


def alice_encode(params: SystemParams, rng_seed, n_subblocks: int) -> PulseTrain:
    """Draw whole blocks until at least ``n_subblocks`` sub-blocks exist."""
    if n_subblocks < 2:
        raise ValueError("need at least two sub-blocks")
    validate(params)
    rng = np.random.default_rng(rng_seed)
    enc = params.encoding
    # every block holds >= 2 sub-blocks, so this many blocks always suffice
    m = (n_subblocks + 1) // 2
    lengths = 4 + 2 * rng.integers(0, (enc.n_max - 4) // 2 + 1, size=m)
    decoy = rng.random(m) < enc.p_decoy
    pos = rng.integers(0, 2, size=m)

    subs = lengths // 2
    n_blocks = int(np.searchsorted(np.cumsum(subs), n_subblocks)) + 1
    lengths, decoy, pos, subs = lengths[:n_blocks], decoy[:n_blocks], pos[:n_blocks], subs[:n_blocks]

    block_pos = np.where(decoy, DECOY, pos).astype(np.int8)
    position = np.repeat(block_pos, subs)
    phase = (2 * rng.integers(0, 2, size=len(position)) - 1).astype(np.int8)
    block_id = np.repeat(np.arange(n_blocks, dtype=np.int64), subs)
    return PulseTrain(position, phase, block_id, lengths.astype(np.int64))


def click_probability(params: SystemParams) -> float:
    """Signal click probability of one measurement window."""
    eta = params.source.mu * transmittance(params.channel) * params.receiver.efficiency
    return -math.expm1(-eta) / 2


def _window_kinds(train: PulseTrain):
    pa, pb = train.position[:-1], train.position[1:]
    decoy = (pa == DECOY) | (pb == DECOY)
    flipped = ~decoy & (pa != pb)
    return pa, pb, decoy, flipped


def _interfering_slot(pa, pb):
    """Slot where both sub-blocks carry a pulse; -1 if both slots do (decoy pair)."""
    return np.where(pa == DECOY, pb, pa)


def bob_detect(train: PulseTrain, params: SystemParams, rng_seed) -> Detections:
    validate(params)
    rng = np.random.default_rng(rng_seed)
    rx = params.receiver
    n = len(train) - 1
    pa, pb, decoy, flipped = _window_kinds(train)

    # signal clicks
    win = np.flatnonzero(rng.random(n) < click_probability(params))
    u = rng.random((len(win), 3))
    random_slot = (u[:, 1] < 0.5).astype(np.int8)
    overlap_slot = _interfering_slot(pa[win], pb[win])
    slot = np.where(flipped[win] | (overlap_slot == DECOY), random_slot, overlap_slot)
    ideal = (train.phase[win] != train.phase[win + 1]).astype(np.int8)
    wrong = u[:, 0] < (1 - rx.visibility) / 2
    det = np.where(flipped[win], (u[:, 2] < 0.5).astype(np.int8), ideal ^ wrong)

    # dark counts: one Bernoulli(p_d) per (window, slot, detector) cell
    n_dark = int(rng.binomial(4 * n, rx.dark_count_prob)) if rx.dark_count_prob > 0 else 0
    cells = np.sort(rng.choice(4 * n, size=n_dark, replace=False)) if n_dark else np.empty(0, np.int64)

    ev_win = np.concatenate([win, cells // 4])
    ev_slot = np.concatenate([slot, (cells % 4) // 2]).astype(np.int8)
    ev_det = np.concatenate([det, cells % 2]).astype(np.int8)
    ev_cause = np.concatenate([np.full(len(win), SIGNAL), np.full(n_dark, DARK)]).astype(np.int8)

    # earliest slot wins; a signal sharing a cell with a dark count stays "signal"
    order = np.lexsort((ev_cause, ev_det, ev_slot, ev_win))
    ev_win, ev_slot, ev_det, ev_cause = ev_win[order], ev_slot[order], ev_det[order], ev_cause[order]
    first = np.r_[True, ev_win[1:] != ev_win[:-1]] if len(ev_win) else np.zeros(0, bool)
    group = np.cumsum(first) - 1
    keep = ev_slot == ev_slot[first][group]
    ev_win, ev_slot, ev_det, ev_cause = ev_win[keep], ev_slot[keep], ev_det[keep], ev_cause[keep]
    uniq = np.r_[True, (ev_win[1:] != ev_win[:-1]) | (ev_det[1:] != ev_det[:-1])] if len(ev_win) else keep[:0]
    ev_win, ev_slot, ev_det, ev_cause = ev_win[uniq], ev_slot[uniq], ev_det[uniq], ev_cause[uniq]

    # both detectors fired in the earliest slot: pick one uniformly
    starts = np.flatnonzero(np.r_[True, ev_win[1:] != ev_win[:-1]]) if len(ev_win) else np.zeros(0, np.int64)
    counts = np.diff(np.r_[starts, len(ev_win)])
    pick = starts.copy()
    ties = np.flatnonzero(counts == 2)
    pick[ties] += (rng.random(len(ties)) < 0.5).astype(np.int64)

    out_win, out_slot, out_det, out_cause = ev_win[pick], ev_slot[pick], ev_det[pick], ev_cause[pick]

    removed = 0
    if rx.dead_time_s > 0 and len(out_win):
        alive = _dead_time_mask(out_win, out_slot, out_det, params.source.pulse_rate_hz, rx.dead_time_s)
        removed = int(len(alive) - alive.sum())
        out_win, out_slot, out_det, out_cause = out_win[alive], out_slot[alive], out_det[alive], out_cause[alive]

    return Detections(
        out_win.astype(np.int64), out_slot, out_det, out_cause, n_windows=n, removed_by_dead_time=removed
    )


def _dead_time_mask(win, slot, det, pulse_rate_hz, dead_time_s):
    """Non-paralyzable detectors: drop clicks within ``dead_time_s`` of the last registered one."""
    # window i is read out during sub-block i + 1
    slot_index = 2 * (win + 1) + slot
    dead_slots = dead_time_s * pulse_rate_hz
    alive = np.ones(len(win), dtype=bool)
    for d in (D1, D2):
        idx = np.flatnonzero(det == d)
        last = -math.inf
        for j, s in zip(idx, slot_index[idx].tolist()):
            if s - last < dead_slots:
                alive[j] = False
            else:
                last = s
    return alive


def _check_pairing(train: PulseTrain, detections: Detections):
    if detections.n_windows != len(train) - 1:
        raise ValueError("detections were not produced from this pulse train")
    if len(detections) and (detections.pair_index.min() < 0 or detections.pair_index.max() >= len(train) - 1):
        raise ValueError("detection refers to a window outside the pulse train")


def sift(train: PulseTrain, detections: Detections) -> SiftedKeyPair:
    """Public discussion: drop flipped block boundaries and decoy windows, derive symbols."""
    _check_pairing(train, detections)
    _, _, decoy, flipped = _window_kinds(train)
    i = detections.pair_index
    on_decoy = decoy[i]
    on_flip = flipped[i]
    kept = ~on_decoy & ~on_flip

    k = i[kept]
    alice_time = train.position[k].astype(np.uint8)
    alice_phase = (train.phase[k] != train.phase[k + 1]).astype(np.uint8)
    alice = 2 * alice_time + alice_phase
    bob = (2 * detections.slot[kept] + detections.detector[kept]).astype(np.uint8)
    return SiftedKeyPair(
        alice_symbols=alice,
        bob_symbols=bob,
        pair_index=k,
        discarded_boundary_count=int(on_flip.sum()),
        decoy_detection_count=int(on_decoy.sum()),
    )


def estimate_visibility(train: PulseTrain, detections: Detections) -> float | None:
    """Interferometer visibility from clicks in decoy windows; ``None`` without any."""
    _check_pairing(train, detections)
    pa, pb, decoy, _ = _window_kinds(train)
    sel = decoy[detections.pair_index]
    i = detections.pair_index[sel]
    slot = detections.slot[sel]
    both = _interfering_slot(pa[i], pb[i])
    coherent = (both == DECOY) | (both == slot)
    expected = (train.phase[i] != train.phase[i + 1]).astype(np.int8)
    hit = detections.detector[sel] == expected
    n_exp = int(np.sum(hit & coherent))
    n_other = int(np.sum(~hit & coherent))
    if n_exp + n_other == 0:
        return None
    return (n_exp - n_other) / (n_exp + n_other)


def error_class_rates(key: SiftedKeyPair) -> tuple[float, float, float, float]:
    """Empirical ``(total, phase only, time only, both)`` symbol error frequencies."""
    n = len(key)
    if n == 0:
        return (0.0, 0.0, 0.0, 0.0)
    diff = key.alice_symbols ^ key.bob_symbols
    phase_only = np.count_nonzero(diff == 1) / n
    time_only = np.count_nonzero(diff == 2) / n
    both = np.count_nonzero(diff == 3) / n
    return (phase_only + time_only + both, phase_only, time_only, both)


def _s4(x):
    return 0.0 if x <= 0 else -x * math.log(x, 4)


def run_experiment(params: SystemParams, seed, n_subblocks: int) -> Experiment:
    """Encode, detect and sift with one master seed; all estimates in :class:`SimStats`."""
    from .keyrate import params_eve_bound

    validate(params)
    enc_seed, rx_seed = split_seed(seed)
    train = alice_encode(params, enc_seed, n_subblocks)
    det = bob_detect(train, params, rx_seed)
    key = sift(train, det)

    n = det.n_windows
    clicks = len(det)
    non_decoy_clicks = clicks - key.decoy_detection_count
    err = error_class_rates(key)
    i_ab = 1.0 - (_s4(1 - err[0]) + _s4(err[1]) + _s4(err[2]) + _s4(err[3]))
    f_hat = len(key) / clicks if clicks else 0.0
    chi = params_eve_bound(params).chi
    stats = SimStats(
        measurements_attempted=n,
        clicks=clicks,
        dark_clicks=int(np.count_nonzero(det.cause == DARK)),
        dead_time_removed=det.removed_by_dead_time,
        decoy_clicks=key.decoy_detection_count,
        discarded_boundary=key.discarded_boundary_count,
        sifted_length=len(key),
        error_rates=err,
        visibility=estimate_visibility(train, det),
        detection_rate=clicks / n,
        discard_fraction=key.discarded_boundary_count / non_decoy_clicks if non_decoy_clicks else 0.0,
        sift_fraction=f_hat,
        secret_rate_estimate=f_hat * clicks / n * max(0.0, i_ab - chi) if clicks else 0.0,
        elapsed_time_s=2 * len(train) / params.source.pulse_rate_hz,
    )
    return Experiment(stats, key, train, det)


class Comparison(NamedTuple):
    quantity: str
    empirical: float
    analytic: float
    sigma: float
    sigma_distance: float


def _binomial(name, observed, p, n):
    sigma = math.sqrt(p * (1 - p) / n) if n > 0 else math.inf
    diff = abs(observed - p)
    if sigma == 0:
        z = 0.0 if diff < 1e-12 else math.inf
    else:
        z = diff / sigma
    return Comparison(name, observed, p, sigma, z)


def compare_with_analytics(stats: SimStats, params: SystemParams) -> list[Comparison]:
    """Empirical estimates against their closed-form expectations with binomial sigmas.

    Only meaningful without dead time, which the closed forms ignore.
    """
    from .keyrate import rate_breakdown

    b = rate_breakdown(params)
    rows = [_binomial("detection_rate", stats.detection_rate, b.r_total, stats.measurements_attempted)]
    for k, name in enumerate(("e1", "e2", "e3", "e4")):
        rows.append(_binomial(name, stats.error_rates[k], b.err[k], stats.sifted_length))
    non_decoy = stats.clicks - stats.decoy_clicks
    rows.append(
        _binomial("discard_fraction", stats.discard_fraction, 1 / mean_block_length(params.encoding), non_decoy)
    )
    if stats.visibility is not None:
        # V_hat = 2 q - 1 with q ~ Binomial((1 + V) / 2); dark clicks pick a
        # detector at random and dilute the contrast (first order in p_d)
        v = params.receiver.visibility * b.r_click / b.r_total
        q = _binomial("visibility", (1 + stats.visibility) / 2, (1 + v) / 2, stats.decoy_clicks)
        rows.append(Comparison("visibility", stats.visibility, v, 2 * q.sigma, q.sigma_distance))
    return rows
