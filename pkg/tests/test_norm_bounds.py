import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subordlab.norm_bounds import (
    certify_hermite,
    certify_laguerre,
    eigen_norm,
    fourier_coefficient,
    fourier_coefficient_quadrature,
    growth_rate,
    hermite_bounds,
    laguerre_lower,
    laguerre_upper,
    predicted_rate,
)
from subordlab.orthopoly import PolyFamily

HERMITE = PolyFamily.hermite()
LAGUERRE0 = PolyFamily.laguerre(0.0)


def test_hermite_bounds_at_n1_q4():
    lower, upper = hermite_bounds(1, 4.0)
    assert float(lower) == pytest.approx(math.sqrt(3) / (2 * math.pi) ** 0.25 * math.exp(-1 / 24), rel=1e-14)
    assert float(lower) == pytest.approx(1.0494, abs=1e-4)
    assert float(upper) == pytest.approx(math.sqrt(3), rel=1e-14)
    measured = eigen_norm(HERMITE, 1, 4.0)
    assert float(measured) == pytest.approx(3**0.25, rel=1e-10)
    assert lower < measured < upper


def test_hermite_upper_rate_is_exact():
    for q in (3.0, 4.0, 6.0):
        for n in (10, 100, 1000):
            assert hermite_bounds(n, q)[1].logmag / n == pytest.approx(0.5 * math.log(q - 1), rel=1e-14)


@pytest.mark.parametrize("bad", [(0, 4.0), (3, 2.0), (3, 1.5)])
def test_hermite_bounds_reject_out_of_hypothesis(bad):
    with pytest.raises(ValueError):
        hermite_bounds(*bad)


@pytest.mark.parametrize("q", [3.0, 4.0, 6.0])
def test_hermite_sandwich_n_1_to_60(q):
    reports = [certify_hermite(n, q) for n in range(1, 61)]
    failing = [r.n for r in reports if not r.passed]
    assert failing == []


def test_hermite_sharpness_plateau():
    def r(n):
        return eigen_norm(HERMITE, n, 4.0).logmag + 0.25 * math.log(n) - 0.5 * n * math.log(3)

    assert abs(math.exp(r(60) - r(40)) - 1) < 0.05


@pytest.mark.parametrize("p", [1.2, 1.5, 1.9])
def test_hermite_norms_below_one_for_p_below_two(p):
    assert max(eigen_norm(HERMITE, n, p).logmag for n in range(1, 61)) <= 1e-12


def test_laguerre_lower_at_n0():
    val = laguerre_lower(0, 0.0, 4.0, 2.0)
    assert float(val) == pytest.approx(3 * (1 / 9) ** 0.75, rel=1e-14)
    assert float(val) == pytest.approx(0.5773, abs=1e-4)


def test_laguerre_lower_geometric_ratio():
    for rho in (0.5, 1.0, 2.9):
        ratio = math.exp(laguerre_lower(5001, 0.5, 4.0, rho).logmag - laguerre_lower(5000, 0.5, 4.0, rho).logmag)
        assert ratio == pytest.approx(rho, rel=1e-3)


@pytest.mark.parametrize("rho", [1.0, 2.0, 2.9])
def test_laguerre_lower_below_measured(rho):
    assert eigen_norm(LAGUERRE0, 5, 4.0) >= laguerre_lower(5, 0.0, 4.0, rho)


def test_laguerre_upper_examples():
    assert float(laguerre_upper(0, 0.0, 4.0)) == 1.0
    assert float(laguerre_upper(3, 0.5, 3.0)) == pytest.approx(8.0, rel=1e-14)
    assert eigen_norm(PolyFamily.laguerre(0.5), 3, 3.0) <= laguerre_upper(3, 0.5, 3.0)


def test_laguerre_bounds_reject_out_of_hypothesis():
    with pytest.raises(ValueError):
        laguerre_lower(3, 0.0, 4.0, 3.0)  # rho must be < q - 1
    with pytest.raises(ValueError):
        laguerre_lower(3, 0.0, 4.0, 0.0)
    with pytest.raises(ValueError):
        laguerre_upper(3, -0.6, 4.0)
    with pytest.raises(ValueError):
        laguerre_upper(3, 0.0, 2.0)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.5])
def test_laguerre_sandwich(alpha):
    for q in (3.0, 4.0):
        for rho in (1.0, 0.9 * (q - 1)):
            failing = [n for n in range(0, 31) if not certify_laguerre(n, alpha, q, rho).passed]
            assert failing == []


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 10_000), q=st.floats(2.001, 50.0))
def test_hermite_bounds_are_ordered(n, q):
    lower, upper = hermite_bounds(n, q)
    assert lower < upper


def test_fourier_examples():
    for b in (0.3, -1.2, 2.0):
        assert float(fourier_coefficient(HERMITE, 0, b)) == pytest.approx(math.exp(b * b / 4), rel=1e-14)
    assert float(fourier_coefficient(HERMITE, 2, 1.0)) == pytest.approx(math.exp(0.25) / math.sqrt(8), rel=1e-14)
    assert float(fourier_coefficient(HERMITE, 2, 1.0)) == pytest.approx(0.4539, abs=1e-4)
    assert float(fourier_coefficient(LAGUERRE0, 1, 0.5)) == pytest.approx(-2.0, rel=1e-14)
    with pytest.raises(ValueError):
        fourier_coefficient(LAGUERRE0, 1, 1.0)


@pytest.mark.parametrize("n", [0, 1, 2, 7, 15, 30])
def test_fourier_matches_quadrature(n):
    for b in (0.1, 0.5, 1.0, 3.0, -0.7):
        closed = float(fourier_coefficient(HERMITE, n, b))
        assert closed == pytest.approx(fourier_coefficient_quadrature(HERMITE, n, b), rel=1e-10)
    for alpha in (0.0, 0.5, -0.5):
        fam = PolyFamily.laguerre(alpha)
        for b in (0.1, 0.5, 0.9, -0.4):
            for normalized in (False, True):
                closed = float(fourier_coefficient(fam, n, b, normalized))
                assert closed == pytest.approx(fourier_coefficient_quadrature(fam, n, b, normalized), rel=1e-10)


def test_fourier_matches_double_precision_gauss_rule():
    from subordlab.measures import Measure, gauss_rule
    from subordlab.orthopoly import eval_normalized

    rule = gauss_rule(Measure.gaussian(), 80)
    for n in (0, 3, 8):
        direct = rule.integrate(eval_normalized(HERMITE, n, rule.nodes).values() * np.exp(0.5 * rule.nodes))
        assert direct == pytest.approx(float(fourier_coefficient(HERMITE, n, 0.5)), rel=1e-10)


def test_growth_rate_examples():
    flat = growth_rate(HERMITE, 2.0, 2.0, range(10, 20))
    assert abs(flat.slope) < 1e-9
    her = growth_rate(HERMITE, 2.0, 4.0, range(30, 61))
    assert her.slope == pytest.approx(0.5 * math.log(3), rel=0.05)
    lag = growth_rate(LAGUERRE0, 2.0, 4.0, range(20, 41))
    assert lag.slope == pytest.approx(math.log(3), rel=0.10)
    assert predicted_rate(HERMITE, 2, 4) == pytest.approx(0.5493, abs=1e-4)
    assert (her.first, her.last) == (30, 60)


def test_growth_rate_rejects_degenerate_windows():
    with pytest.raises(ValueError):
        growth_rate(HERMITE, 2.0, 4.0, [10, 11, 12])
    with pytest.raises(ValueError):
        growth_rate(HERMITE, 2.0, 4.0, range(5, 20))
    with pytest.raises(ValueError):
        growth_rate(HERMITE, 4.0, 2.0, range(10, 20))
