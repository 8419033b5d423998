"""Closed-form Holevo bounds: frozen values, limits and invariants."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dpts.holevo import (
    eve_bound,
    eve_state_spectrum,
    eve_success_prob,
    gamma,
    holevo_primary,
    holevo_secondary,
    holevo_total,
    time_bit_holevo,
)

import reference as ref

# frozen from tests/reference.py (mpmath, 40 digits)
G_EXAMPLE = 0.820384
CHI0_EXAMPLE = 0.41717514765195132
BRACKET_EXAMPLE = 0.11453757960598089
BRACKET_PRINTED_EXAMPLE = 0.27486020980738173
CHI1_PRINTED_EXAMPLE = 0.011228612096960073


def test_gamma_examples():
    assert gamma(0.5, 1.0) == 1.0
    assert gamma(1e-12, 0.5) == pytest.approx(1.0)
    assert gamma(0.2, 0.01) == pytest.approx(math.exp(-0.198), rel=1e-15)
    assert gamma(0.2, 0.01) == pytest.approx(0.820384, abs=2e-5)


def test_primary_limits():
    assert holevo_primary(1.0) == pytest.approx(0.0, abs=1e-15)
    assert holevo_primary(0.0) == pytest.approx(1.0, abs=1e-15)
    assert holevo_primary(1e-6) == pytest.approx(1.0, abs=1e-9)


def test_primary_example():
    assert holevo_primary(G_EXAMPLE) == pytest.approx(CHI0_EXAMPLE, abs=1e-12)
    assert holevo_primary(G_EXAMPLE) == pytest.approx(0.41717, abs=1e-5)


def test_printed_sign_breaks_the_ceiling():
    assert holevo_primary(0.0, printed_sign=True) == pytest.approx(2.0)


@given(st.floats(0, 1))
def test_spectrum_normalised(g):
    lam = eve_state_spectrum(g)
    assert abs(lam.sum() - 1) <= 1e-12
    assert np.all(lam >= 0)


def test_primary_monotone_on_dense_grid():
    values = np.array([holevo_primary(g) for g in np.linspace(0, 1, 2001)])
    assert np.all(np.diff(values) <= 1e-12)
    assert np.all((values >= -1e-15) & (values <= 1 + 1e-15))


@pytest.mark.parametrize("n, expected", [(4, 2 / 3), (6, 4 / 5), (1e9, 1.0)])
def test_eve_success_prob(n, expected):
    assert eve_success_prob(n) == pytest.approx(expected, abs=1e-8)


def test_eve_success_prob_domain():
    with pytest.raises(ValueError):
        eve_success_prob(3.5)


def test_secondary_examples():
    assert holevo_secondary(1.0, 2 / 3) == pytest.approx(0.0, abs=1e-15)
    assert holevo_secondary(0.3, 0.5) == 0.0
    assert time_bit_holevo(G_EXAMPLE) == pytest.approx(BRACKET_EXAMPLE, abs=1e-12)
    assert time_bit_holevo(G_EXAMPLE, printed=True) == pytest.approx(BRACKET_PRINTED_EXAMPLE, abs=1e-12)
    assert holevo_secondary(G_EXAMPLE, 2 / 3, printed=True) == pytest.approx(CHI1_PRINTED_EXAMPLE, abs=1e-12)


def test_time_bit_holevo_limits():
    # orthogonal limit: one full bit = 1/2 in base-4 units
    assert time_bit_holevo(0.0) == pytest.approx(0.5)
    assert time_bit_holevo(1.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("g", [0.0, 0.1, 0.5, 0.820384, 0.99])
def test_closed_forms_against_mpmath(g):
    assert holevo_primary(g) == pytest.approx(float(ref.chi0(g)), abs=1e-13)
    assert time_bit_holevo(g) == pytest.approx(float(ref.bracket(g)), abs=1e-13)
    assert time_bit_holevo(g, printed=True) == pytest.approx(float(ref.bracket(g, printed=True)), abs=1e-13)


def test_total_examples():
    assert holevo_total(0.3, 0.0) == 0.3
    assert holevo_total(1.0, 0.4) == 1.0
    assert holevo_total(0.41717, 0.011229) == pytest.approx(0.42372, abs=1e-5)


@given(st.floats(1e-3, 2), st.floats(1e-4, 1), st.sampled_from([4, 5, 6, 8, 20]))
def test_eve_bound_invariants(mu, t, n):
    e = eve_bound(mu, t, n)
    assert 0 < e.gamma <= 1
    assert 2 / 3 - 1e-12 <= e.p_eve < 1
    assert -1e-12 <= e.chi0 <= 1 + 1e-12
    assert e.chi1 >= 0
    assert e.chi0 - 1e-12 <= e.chi <= 1 + 1e-12
