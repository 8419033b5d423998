import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpts.keyrate import (
    conditional_entropy,
    dead_time_throughput,
    detector_limited_rate,
    error_probabilities,
    rate_breakdown,
    secret_key_rate,
    sifting_prefactor,
)
from dpts.params import SystemParams, loss_limited_params

import reference as ref

# 100 km, eta 0.1, p_d 1e-7, V 0.9, mu 0.2, N 4, decoy 2%; mpmath at 40 digits
R = 9.9990000666633335e-5
RB = 1.0038996067063307e-4
ERR = (0.052788844630773057, 0.050796812751649445, 0.0009960159395618059, 0.0009960159395618059)
I_AB = 0.84382157372782053
CHI = 0.41993348954980691
RSK = 3.1277269453044878e-05
RSK_PRINTED = 3.0995617286609964e-05


@pytest.fixture
def spot():
    return loss_limited_params()


def test_breakdown_frozen_values(spot):
    b = rate_breakdown(spot)
    assert b.t == pytest.approx(0.01, rel=1e-14)
    assert b.r_click == pytest.approx(R, rel=1e-12)
    assert b.r_total == pytest.approx(RB, rel=1e-12)
    assert b.prefactor_f == pytest.approx(0.735, rel=1e-14)
    for got, want in zip(b.err, ERR):
        assert got == pytest.approx(want, rel=1e-10)
    assert b.i_ab == pytest.approx(I_AB, abs=1e-12)


def test_rsk_frozen_value(spot):
    r = secret_key_rate(spot)
    assert r.secure
    assert r.eve.chi == pytest.approx(CHI, abs=1e-12)
    assert r.rsk_per_measurement == pytest.approx(RSK, rel=1e-10)
    assert secret_key_rate(spot, printed=True).rsk_per_measurement == pytest.approx(RSK_PRINTED, rel=1e-10)


def test_rsk_matches_published_value_either_way(spot):
    for printed in (False, True):
        assert secret_key_rate(spot, printed=printed).rsk_per_measurement == pytest.approx(3.10e-5, rel=0.02)


def test_ideal_errors_vanish():
    err = error_probabilities(1e-3, 0.0, 1.0)
    assert err == (0.0, 0.0, 0.0, 0.0)
    assert conditional_entropy(err) == 0.0


def test_dark_only_is_uniform():
    e1, e2, e3, e4 = error_probabilities(0.0, 1e-6, 1.0)
    assert e1 == pytest.approx(0.75)
    assert e2 == e3 == e4 == pytest.approx(0.25)


def test_prefactor():
    assert sifting_prefactor(SystemParams().replace(n_max=8, p_decoy=0.0)) == pytest.approx(5 / 6)


def test_insecure_point_is_zero():
    r = secret_key_rate(loss_limited_params(length_km=400.0))
    assert not r.secure
    assert r.rsk_bits_per_second == r.rsk_per_measurement == 0.0


def test_detector_limited_rate():
    assert detector_limited_rate(1e6, 0.0) == 1e6
    assert detector_limited_rate(1e12, 1e-6) == pytest.approx(2e6, rel=1e-5)
    assert detector_limited_rate(2e6, 1e-6) == pytest.approx(1e6)


def test_throughput_without_dead_time_is_proportional(spot):
    r = secret_key_rate(spot)
    assert r.rsk_bits_per_second == pytest.approx(r.rsk_per_measurement * 2 * 10e9 / 2, rel=1e-12)


def test_dead_time_reduces_throughput(spot):
    free = dead_time_throughput(spot)
    capped = dead_time_throughput(spot.replace(dead_time_s=1e-6))
    assert 0 < capped < free


points = st.fixed_dictionaries(
    dict(
        mu=st.floats(0.01, 1.0),
        length_km=st.floats(0, 150),
        efficiency=st.floats(0.01, 1),
        dark_count_prob=st.floats(0, 1e-5),
        visibility=st.floats(0.8, 1),
    )
)


@settings(max_examples=60, deadline=None)
@given(points)
def test_chain_matches_mpmath(kw):
    p = SystemParams().replace(**kw)
    want = ref.key_rate_chain(kw["mu"], kw["length_km"], kw["efficiency"], kw["dark_count_prob"], kw["visibility"], 4, 0.02)
    b = rate_breakdown(p)
    r = secret_key_rate(p)
    assert b.r_total == pytest.approx(float(want["rb"]), rel=1e-10)
    assert b.i_ab == pytest.approx(float(want["i_ab"]), abs=1e-10)
    assert r.eve.chi == pytest.approx(float(want["chi"]), abs=1e-10)
    assert r.rsk_per_measurement == pytest.approx(float(want["rsk"]), rel=1e-8, abs=1e-18)


@settings(max_examples=60, deadline=None)
@given(points)
def test_invariants(kw):
    b = rate_breakdown(SystemParams().replace(**kw))
    assert 0 <= b.r_click <= b.r_total <= 1
    assert math.isclose(sum(b.err[1:]), b.err[0], rel_tol=1e-12, abs_tol=1e-15)
    assert -1e-12 <= b.i_ab <= 1 + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 150), st.floats(0.1, 20))
def test_rate_decreases_with_distance(length, step):
    a = secret_key_rate(loss_limited_params(length_km=length)).rsk_per_measurement
    b = secret_key_rate(loss_limited_params(length_km=length + step)).rsk_per_measurement
    assert b <= a * (1 + 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.9, 0.99), st.floats(0.001, 0.01))
def test_rate_increases_with_visibility(v, dv):
    a = secret_key_rate(loss_limited_params(length_km=50, visibility=v)).rsk_per_measurement
    b = secret_key_rate(loss_limited_params(length_km=50, visibility=v + dv)).rsk_per_measurement
    assert b >= a
