"""Parameter records for a DPTS link and the elementary quantities derived from them.

All records are frozen dataclasses.  They are deliberately *not* validated on
construction so that :func:`validate` can report every violated constraint at
once instead of stopping at the first one.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field


class ParameterError(ValueError):
    """One or more parameter constraints are violated.

    ``errors`` holds one human readable message per violation.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class SourceParams:
    mu: float = 0.2  # mean photon number of a non-empty pulse
    pulse_rate_hz: float = 10e9

    @property
    def sub_block_period_s(self) -> float:
        """Duration of one sub-block (two pulse slots)."""
        return 2.0 / self.pulse_rate_hz


@dataclass(frozen=True)
class EncodingParams:
    n_max: int = 4  # block lengths are drawn uniformly from {4, 6, ..., n_max}
    p_decoy: float = 0.02


@dataclass(frozen=True)
class ChannelParams:
    length_km: float = 0.0
    attenuation_db_per_km: float = 0.2


@dataclass(frozen=True)
class ReceiverParams:
    efficiency: float = 0.1
    dark_count_prob: float = 1e-7  # per detector per pulse slot
    visibility: float = 1.0
    dead_time_s: float = 0.0


@dataclass(frozen=True)
class SystemParams:
    source: SourceParams = field(default_factory=SourceParams)
    encoding: EncodingParams = field(default_factory=EncodingParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    receiver: ReceiverParams = field(default_factory=ReceiverParams)

    def replace(self, **changes) -> "SystemParams":
        """Return a copy with leaf fields replaced, e.g. ``replace(mu=0.3, length_km=50)``.

        Keys may be bare field names (unique across sections) or dotted
        ``section.field`` paths.
        """
        sections = {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}
        updates: dict[str, dict] = {name: {} for name in sections}
        for key, value in changes.items():
            section, name = _locate(key)
            updates[section][name] = value
        return SystemParams(
            **{
                name: dataclasses.replace(rec, **updates[name]) if updates[name] else rec
                for name, rec in sections.items()
            }
        )


_SECTIONS = {
    "source": SourceParams,
    "encoding": EncodingParams,
    "channel": ChannelParams,
    "receiver": ReceiverParams,
}


def _locate(key: str) -> tuple[str, str]:
    if "." in key:
        section, name = key.split(".", 1)
        if section in _SECTIONS and name in {f.name for f in dataclasses.fields(_SECTIONS[section])}:
            return section, name
        raise KeyError(key)
    for section, cls in _SECTIONS.items():
        if key in {f.name for f in dataclasses.fields(cls)}:
            return section, key
    raise KeyError(key)


def field_names() -> list[str]:
    """All ``section.field`` keys of :class:`SystemParams`, in declaration order."""
    return [
        f"{section}.{f.name}"
        for section, cls in _SECTIONS.items()
        for f in dataclasses.fields(cls)
    ]


def _finite(x) -> bool:
    try:
        return math.isfinite(x)
    except TypeError:
        return False


def problems(params: SystemParams) -> list[str]:
    """List every violated constraint of ``params`` (empty when valid)."""
    errs = []
    s, e, c, r = params.source, params.encoding, params.channel, params.receiver

    for key in field_names():
        section, name = key.split(".")
        value = getattr(getattr(params, section), name)
        if isinstance(value, bool) or not _finite(value):
            errs.append(f"{name} must be a finite number")
    if errs:
        return errs

    if not s.mu > 0:
        errs.append("mu must be positive")
    if not s.pulse_rate_hz > 0:
        errs.append("pulse_rate_hz must be positive")

    if int(e.n_max) != e.n_max:
        errs.append("n_max must be an integer")
    elif e.n_max % 2:
        errs.append("n_max must be even")
    if e.n_max < 4:
        errs.append("n_max must be at least 4")
    if not 0 <= e.p_decoy < 1:
        errs.append("p_decoy must lie in [0, 1)")

    if c.length_km < 0:
        errs.append("length_km must be non-negative")
    if c.attenuation_db_per_km < 0:
        errs.append("attenuation_db_per_km must be non-negative")

    if not 0 < r.efficiency <= 1:
        errs.append("efficiency must lie in (0, 1]")
    if not 0 <= r.dark_count_prob < 1:
        errs.append("dark_count_prob must lie in [0, 1)")
    if not 0 <= r.visibility <= 1:
        errs.append("visibility must lie in [0, 1]")
    if r.dead_time_s < 0:
        errs.append("dead_time_s must be non-negative")
    return errs


def validate(params: SystemParams) -> SystemParams:
    """Return ``params`` unchanged, or raise :class:`ParameterError` listing all violations."""
    errs = problems(params)
    if errs:
        raise ParameterError(errs)
    return params


def transmittance(channel: ChannelParams) -> float:
    """Fiber transmittance ``10**(-alpha * L / 10)``."""
    return 10.0 ** (-channel.attenuation_db_per_km * channel.length_km / 10.0)


def mean_block_length(encoding: EncodingParams) -> float:
    """Mean of the uniform block-length law over ``{4, 6, ..., n_max}``."""
    n_max = encoding.n_max
    if int(n_max) != n_max or n_max % 2 or n_max < 4:
        raise ValueError(f"n_max must be an even integer >= 4, got {n_max!r}")
    return (4 + n_max) / 2


def loss_limited_params(**overrides) -> SystemParams:
    """Long-haul setting: eta_d=0.1, p_d=1e-7, 0.2 dB/km, p_decoy=0.02, V=0.9, N=4."""
    base = SystemParams(
        source=SourceParams(mu=0.2, pulse_rate_hz=10e9),
        encoding=EncodingParams(n_max=4, p_decoy=0.02),
        channel=ChannelParams(length_km=100.0, attenuation_db_per_km=0.2),
        receiver=ReceiverParams(efficiency=0.1, dark_count_prob=1e-7, visibility=0.9),
    )
    return base.replace(**overrides) if overrides else base


def dead_time_limited_params(**overrides) -> SystemParams:
    """Metro setting with saturating detectors: 10 GHz, p_d=3.5e-9, t_d=1 us, V=1, N=4."""
    base = SystemParams(
        source=SourceParams(mu=0.23, pulse_rate_hz=10e9),
        encoding=EncodingParams(n_max=4, p_decoy=0.02),
        channel=ChannelParams(length_km=25.0, attenuation_db_per_km=0.2),
        receiver=ReceiverParams(
            efficiency=0.1, dark_count_prob=3.5e-9, visibility=1.0, dead_time_s=1e-6
        ),
    )
    return base.replace(**overrides) if overrides else base
