"""Coefficients, the stability sum, beta_max and amplification factors."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moltwave.errors import ConfigurationError
from moltwave.params import (
    SchemeCoefficients,
    SolverParams,
    amplification_factor,
    beta_max,
    coefficient_A,
    pm_coefficient,
    roots_from_S,
    stability_sum,
)

TABLE_1 = [2.0000, 1.4840, 1.2345, 1.0795, 0.9715]


def exact_A(p, beta):
    """Direct sum with rational factorials and binomials."""
    b = Fraction(beta)
    total = Fraction(0)
    for m in range(1, p + 1):
        total += 2 * (-1) ** m * b ** (2 * m) / math.factorial(2 * m) * math.comb(p - 1, m - 1)
    return float(total)


@pytest.mark.parametrize(
    "p, beta, expected",
    [(1, 2.0, -4.0), (2, 1.0, -11 / 12), (3, 1.0, -301 / 360)],
)
def test_coefficient_examples(p, beta, expected):
    assert coefficient_A(p, beta) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("p", range(1, 11))
def test_coefficient_vanishes_at_zero_beta(p):
    assert coefficient_A(p, 0.0) == 0.0


@pytest.mark.parametrize("p", range(1, 7))
@pytest.mark.parametrize("beta", [0.5, 1.0, 1.5])
def test_coefficient_matches_rational_sum(p, beta):
    assert abs(coefficient_A(p, beta) - exact_A(p, beta)) <= 1e-14


def test_coefficient_rejects_bad_order():
    with pytest.raises(ConfigurationError):
        coefficient_A(0, 1.0)
    with pytest.raises(ConfigurationError):
        coefficient_A(1.5, 1.0)


@given(st.integers(1, 8), st.floats(0.0, 2.0))
def test_table_rows_sum_to_A(P, beta):
    co = SchemeCoefficients(P, beta)
    for p in range(1, P + 1):
        row = sum(co.c_pm[(p, m)] for m in range(1, p + 1))
        assert row == pytest.approx(co.A(p), rel=1e-12, abs=1e-14)
        assert co.a[p - 1] == co.A(p)


def test_pm_coefficient_bounds():
    with pytest.raises(ConfigurationError):
        pm_coefficient(2, 3, 1.0)


@pytest.mark.parametrize("P", range(1, 6))
def test_coefficients_negative_below_beta_max(P):
    co = SchemeCoefficients(P, beta_max(P))
    assert all(a < 0 for a in co.a)


def test_stability_sum_examples():
    assert stability_sum(1, 2.0, 1.0) == pytest.approx(4.0)
    assert stability_sum(3, 1.1, 0.0) == 0.0
    assert stability_sum(2, 1.4840, 1.0) == pytest.approx(4.0, abs=1e-3)


def test_stability_sum_rejects_dhat_outside_unit_interval():
    with pytest.raises(ConfigurationError):
        stability_sum(2, 1.0, 1.2)
    with pytest.raises(ConfigurationError):
        stability_sum(2, 1.0, np.array([0.5, -0.1]))


@pytest.mark.parametrize("P", range(1, 6))
def test_stability_sum_nondecreasing_in_dhat(P):
    d = np.linspace(0, 1, 513)
    s = stability_sum(P, beta_max(P), d)
    assert np.all(np.diff(s) >= -1e-15)


@pytest.mark.parametrize("P, value", list(zip(range(1, 6), TABLE_1)))
def test_beta_max_table(P, value):
    assert beta_max(P) == pytest.approx(value, abs=1e-3)
    assert abs(stability_sum(P, value, 1.0) - 4.0) <= 5e-3


@pytest.mark.parametrize("P", range(1, 11))
def test_beta_max_is_a_root(P):
    b = beta_max(P)
    assert 0 < b <= 2.0
    assert stability_sum(P, b, 1.0) == pytest.approx(4.0, abs=1e-8)
    assert stability_sum(P, b, 1.0) <= 4.0


def test_beta_max_rejects_out_of_range():
    with pytest.raises(ConfigurationError):
        beta_max(0)
    with pytest.raises(ConfigurationError):
        beta_max(11)


def test_amplification_examples():
    r1, r2 = amplification_factor(2, 1.0, 0.0)
    assert r1 == pytest.approx(1.0) and r2 == pytest.approx(1.0)
    r1, r2 = amplification_factor(1, 2.0, 1.0)
    assert r1 == pytest.approx(-1.0) and r2 == pytest.approx(-1.0)
    r1, r2 = roots_from_S(2.0)
    assert {round(r1.imag, 12), round(r2.imag, 12)} == {1.0, -1.0}
    assert abs(r1) == pytest.approx(1.0)


@given(st.integers(1, 5), st.floats(0.01, 1.0), st.floats(0.0, 1.0))
def test_root_product_is_one(P, frac, dhat):
    r1, r2 = amplification_factor(P, frac * beta_max(P), dhat)
    assert r1 * r2 == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("P", range(1, 6))
def test_a_stability_window(P):
    d = np.linspace(0, 1, 256)
    for frac in (0.3, 0.7, 1.0):
        r1, r2 = amplification_factor(P, frac * beta_max(P), d)
        assert max(np.abs(r1).max(), np.abs(r2).max()) <= 1 + 1e-12


@pytest.mark.parametrize("P", range(1, 6))
def test_window_is_sharp(P):
    d = np.linspace(0, 1, 256)
    r1, r2 = amplification_factor(P, 1.05 * beta_max(P), d)
    assert max(np.abs(r1).max(), np.abs(r2).max()) > 1


class TestSolverParams:
    def test_defaults_to_beta_max(self):
        prm = SolverParams(2.0, 0.1, 3)
        assert prm.beta == beta_max(3)

    @given(st.floats(0.1, 10), st.floats(1e-4, 1.0), st.integers(1, 5))
    @settings(max_examples=50)
    def test_alpha_derived(self, c, dt, P):
        prm = SolverParams(c, dt, P)
        assert prm.alpha * c * dt == pytest.approx(prm.beta, rel=1e-15)

    def test_rejects_unstable_beta(self):
        with pytest.raises(ConfigurationError):
            SolverParams(1.0, 0.1, 2, beta=1.6)

    @pytest.mark.parametrize("kw", [dict(c=0.0), dict(dt=-1.0), dict(P=0), dict(beta=0.0)])
    def test_rejects_bad_values(self, kw):
        args = dict(c=1.0, dt=0.1, P=1, beta=None)
        args.update(kw)
        with pytest.raises(ConfigurationError):
            SolverParams(**args)

    def test_coefficients_cached(self):
        prm = SolverParams(1.0, 0.1, 2)
        assert prm.coefficients is prm.coefficients
