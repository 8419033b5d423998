import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dpts.params import (
    ChannelParams,
    EncodingParams,
    ParameterError,
    SystemParams,
    dead_time_limited_params,
    loss_limited_params,
    mean_block_length,
    problems,
    transmittance,
    validate,
)


@pytest.mark.parametrize("length, expected", [(0, 1.0), (100, 0.01), (50, 0.1)])
def test_transmittance_examples(length, expected):
    assert transmittance(ChannelParams(length, 0.2)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("n_max, expected", [(4, 4), (8, 6), (6, 5)])
def test_mean_block_length_examples(n_max, expected):
    assert mean_block_length(EncodingParams(n_max=n_max)) == expected


@pytest.mark.parametrize("n_max", [5, 2, 3, 0])
def test_mean_block_length_rejects_bad_n_max(n_max):
    with pytest.raises(ValueError):
        mean_block_length(EncodingParams(n_max=n_max))


@given(
    st.floats(0, 300), st.floats(0, 300), st.floats(0, 0.5)
)
def test_transmittance_is_multiplicative(l1, l2, alpha):
    t12 = transmittance(ChannelParams(l1 + l2, alpha))
    t1t2 = transmittance(ChannelParams(l1, alpha)) * transmittance(ChannelParams(l2, alpha))
    assert math.isclose(t12, t1t2, rel_tol=1e-9, abs_tol=1e-300)


@given(st.floats(0, 300), st.floats(0.01, 10), st.floats(0.01, 0.5))
def test_transmittance_monotone(length, dl, alpha):
    assert transmittance(ChannelParams(length + dl, alpha)) <= transmittance(ChannelParams(length, alpha))
    assert transmittance(ChannelParams(length, alpha + 0.01)) <= transmittance(ChannelParams(length, alpha))


@given(st.integers(2, 500))
def test_mean_block_length_steps(k):
    n_max = 2 * k
    m = mean_block_length(EncodingParams(n_max=n_max))
    assert 4 <= m <= n_max
    assert mean_block_length(EncodingParams(n_max=n_max + 2)) == m + 1


def test_presets_are_valid():
    assert validate(dead_time_limited_params()) is not None
    assert problems(loss_limited_params()) == []


def test_mu_zero_rejected():
    with pytest.raises(ParameterError) as exc:
        validate(SystemParams().replace(mu=0.0))
    assert "mu must be positive" in exc.value.errors


def test_odd_n_max_rejected():
    errs = problems(SystemParams().replace(n_max=5))
    assert "n_max must be even" in errs


def test_errors_are_aggregated():
    bad = SystemParams().replace(mu=-1.0, visibility=1.2, p_decoy=1.0, length_km=-3.0)
    errs = problems(bad)
    assert len(errs) == 4
    assert any("visibility" in e for e in errs)


def test_nan_rejected():
    assert problems(SystemParams().replace(mu=float("nan")))


def test_replace_accepts_dotted_keys():
    p = SystemParams().replace(**{"channel.length_km": 12.0, "visibility": 0.5})
    assert p.channel.length_km == 12.0
    assert p.receiver.visibility == 0.5
    with pytest.raises(KeyError):
        SystemParams().replace(wavelength=1550)


def test_sub_block_period():
    assert dead_time_limited_params().source.sub_block_period_s == pytest.approx(2e-10)
