import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subordlab.bernstein import BernsteinFn
from subordlab.obstruction import (
    BilinearVerdict,
    DivergenceError,
    F_slope,
    F_t,
    Verdict,
    bilinear_test,
    bilinear_value,
    classify_laguerre,
    classify_ou,
    eigen_lower_bound,
    laguerre_parseval,
    multiplier_necessary_condition,
    obstruction_scan,
    optimal_taus,
    quadratic_form,
    rate_kappa,
    rho_parseval,
    vertex_slope,
)
from subordlab.orthopoly import PolyFamily
from subordlab.subordination import MultiplierSequence, subordinated_multiplier

HERMITE = PolyFamily.hermite()
LAGUERRE0 = PolyFamily.laguerre(0.0)
SQRT = BernsteinFn.sqrt()
IDENTITY = BernsteinFn.drift(1.0)


def geometric(family: PolyFamily, r: float) -> MultiplierSequence:
    return MultiplierSequence.from_values(family, lambda n: r ** np.asarray(n, dtype=float))


def kronecker_zero(family: PolyFamily) -> MultiplierSequence:
    return MultiplierSequence.from_values(family, lambda n: (np.asarray(n) == 0).astype(float))


# ---------------------------------------------------------------------------
# eigenfunction tests


@pytest.mark.parametrize("family", [HERMITE, LAGUERRE0, PolyFamily.jacobi(0.5, 0.0)], ids=lambda f: f.label())
def test_eigen_lower_bound_at_degree_zero(family):
    f = BernsteinFn.stable(0.5, a=0.4)
    assert float(eigen_lower_bound(family, f, 1.5, 2.0, 4.0, 0)) == pytest.approx(math.exp(-0.6), rel=1e-12)


def test_eigen_lower_bound_above_analytic_floor():
    floor = math.exp(-math.sqrt(20)) * 3**10 / (2 * math.pi * 20) ** 0.25 * math.exp(-1 / 480)
    assert float(eigen_lower_bound(HERMITE, SQRT, 1.0, 2.0, 4.0, 20)) >= floor
    assert max(float(eigen_lower_bound(HERMITE, SQRT, 1.0, 2.0, 4.0, n)) for n in range(31)) > 1e3


def test_eigen_lower_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        eigen_lower_bound(HERMITE, SQRT, 1.0, 1.0, 4.0, 3)
    with pytest.raises(ValueError):
        eigen_lower_bound(HERMITE, SQRT, 0.0, 2.0, 4.0, 3)


@pytest.mark.parametrize("family", [HERMITE, LAGUERRE0], ids=lambda f: f.label())
def test_eigen_lower_bound_monotone_in_exponents(family):
    f = BernsteinFn.stable(0.5, b=0.2)
    for n in (1, 5, 12):
        by_q = [eigen_lower_bound(family, f, 0.5, 2.0, q, n).logmag for q in (2.5, 3.0, 4.0, 6.0)]
        assert all(b >= a - 1e-12 for a, b in zip(by_q, by_q[1:]))
        by_p = [eigen_lower_bound(family, f, 0.5, p, 6.0, n).logmag for p in (1.2, 1.5, 2.0, 3.0)]
        assert all(b <= a + 1e-12 for a, b in zip(by_p, by_p[1:]))


def test_obstruction_scan_verdicts():
    report = obstruction_scan(HERMITE, SQRT, 1.0, 2.0, 4.0, range(1, 41))
    assert report.verdict is Verdict.DIVERGING
    assert report.first_exceeding(1e3) <= 30
    assert np.all(np.diff(report.running_max) >= 0)
    assert report.best[1].logmag == pytest.approx(math.log(report.running_max[-1]))
    bounded = obstruction_scan(HERMITE, BernsteinFn.drift(1.0), 1.0, 2.0, 3.0, range(1, 41))
    assert bounded.verdict is Verdict.BOUNDED_WINDOW


def test_rate_kappa_window_signature():
    assert rate_kappa(HERMITE, 2.0, 2.0, range(10, 21)).slope == pytest.approx(0.0, abs=1e-9)
    early = rate_kappa(HERMITE, 2.0, 4.0, range(10, 21)).slope
    late = rate_kappa(HERMITE, 2.0, 4.0, range(30, 61)).slope
    assert late > early > 0
    lag_early = rate_kappa(LAGUERRE0, 2.0, 4.0, range(10, 21)).slope
    lag_late = rate_kappa(LAGUERRE0, 2.0, 4.0, range(20, 41)).slope
    assert lag_late > lag_early


def test_rate_kappa_bounded_for_jacobi():
    fit = rate_kappa(PolyFamily.jacobi(0.0, 0.0), 2.0, 4.0, range(10, 41))
    assert 0 < fit.slope < 1


# ---------------------------------------------------------------------------
# F_t


@pytest.mark.parametrize("f", [SQRT, IDENTITY, BernsteinFn.stable(0.5, a=0.7, b=0.2)], ids=lambda f: f.label())
def test_F_t_at_zero(f):
    assert float(F_t(f, 0.8, 0.0)) == pytest.approx(math.exp(-0.8 * f.a), rel=1e-15)


@pytest.mark.parametrize("t, z", [(0.5, 1.0), (1.0, 10.0), (2.0, 300.0), (0.1, 1e3)])
def test_F_t_of_identity_is_exponential(t, z):
    assert F_t(IDENTITY, t, z).logmag == pytest.approx(z * math.exp(-t), rel=1e-13)


def test_F_slope_of_sqrt_is_one():
    assert F_slope(SQRT, 1.0) == pytest.approx(1.0, rel=0.05)


@settings(max_examples=40, deadline=None)
@given(
    a=st.floats(0, 2),
    b=st.floats(0, 1.5),
    theta=st.sampled_from([0.25, 0.5, 0.75]),
    t=st.floats(0.05, 3),
    z=st.floats(0, 500),
)
def test_F_t_sandwich(a, b, theta, t, z):
    f = BernsteinFn.stable(theta, a=a, b=b)
    value = F_t(f, t, z).logmag
    base = -t * a
    assert value >= base - 1e-12
    assert value <= np.logaddexp(z * math.exp(-b * t), base) + 1e-12


# ---------------------------------------------------------------------------
# bilinear test


def test_bilinear_value_small_product():
    f = BernsteinFn.stable(0.5, a=0.3)
    assert bilinear_value(f, 1.0, 2.0, 2.0, 1e-5, 1e-5).logmag == pytest.approx(-0.3, abs=1e-9)


@pytest.mark.parametrize("t", [0.2, 1.0, 3.0])
def test_bilinear_value_contractive_for_identity_at_p_q_2(t):
    for tau in (0.5, 2.0, 10.0, 30.0):
        got = bilinear_value(IDENTITY, t, 2.0, 2.0, tau, tau).logmag
        assert got == pytest.approx(-0.5 * tau * tau * (1 - math.exp(-t)), rel=1e-12)
        assert got < 0


def test_bilinear_blow_up_along_vertex_ray():
    f = BernsteinFn.drift(0.5)
    report = bilinear_test(f, 1.0, 2.0, 4.0)
    assert 2 * 0.5 * 1.0 < math.log(3)
    assert report.k_star == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert report.quad_form_min < 0
    assert report.verdict is BilinearVerdict.BLOW_UP
    assert report.slope_measured == pytest.approx(-report.quad_form_min / 4, rel=1e-6)
    assert report.max_log_value > math.log(1e6)


def test_bilinear_bounded_regime():
    report = bilinear_test(BernsteinFn.drift(1.0), 1.0, 2.0, 3.0)
    assert report.quad_form_min >= 0
    assert report.verdict is BilinearVerdict.BOUNDED


def test_vertex_minimizes_quadratic_form():
    for b, t, p, q in [(0.5, 1.0, 2.0, 4.0), (0.0, 2.0, 1.5, 3.0), (2.0, 0.1, 3.0, 5.0)]:
        k = vertex_slope(b, t, p)
        best = quadratic_form(k, b, t, p, q)
        for dk in (-0.1, -1e-3, 1e-3, 0.1):
            assert quadratic_form(k + dk, b, t, p, q) >= best


@pytest.mark.parametrize(
    "b, t, p, q",
    [(0.5, 1.0, 2.0, 4.0), (0.0, 1.0, 2.0, 2.5), (0.2, 0.5, 3.0, 6.0), (0.0, 0.2, 1.5, 1.8)],
)
def test_classify_blow_up_agrees_with_bilinear_ray(b, t, p, q):
    f = BernsteinFn.stable(0.5, b=b) if b else SQRT
    assert classify_ou(f, t, p, q).blows_up
    assert bilinear_test(f, t, p, q, threshold=1e6, tau2_max=1e3).verdict is BilinearVerdict.BLOW_UP


# ---------------------------------------------------------------------------
# exact case splits


def test_classify_ou_examples():
    f = BernsteinFn.drift(0.5, a=0.3)
    c = classify_ou(f, 1.0, 2.0, 2.0)
    assert c.verdict == "bounded" and c.norm == pytest.approx(math.exp(-0.3), rel=1e-15)
    c = classify_ou(f, 1.0, 2.0, 4.0)
    assert c.threshold == pytest.approx(1 + math.e, rel=1e-15)
    assert c.blows_up and c.norm == math.inf and c.discriminant > 0
    for q in (2.01, 3.0, 50.0):
        assert classify_ou(SQRT, 0.7, 2.0, q).blows_up


def test_classify_laguerre_examples():
    c = classify_laguerre(BernsteinFn.drift(1.0, a=0.2), math.log(3), 2.0, 4.0)
    assert c.verdict == "bounded" and c.norm == pytest.approx(math.exp(-0.2 * math.log(3)))
    assert classify_laguerre(SQRT, 0.3, 2.0, 2.5).blows_up
    c = classify_laguerre(BernsteinFn.drift(2.0), 1.0, 2.0, 3.0)
    assert c.verdict == "bounded" and c.norm == 1.0
    assert classify_laguerre(BernsteinFn.drift(2.0), 1.0, 2.0, 3.0, alpha=-0.7).verdict == "outside-hypotheses"
    assert classify_laguerre(SQRT, 1.0, 2.0, 3.0, alpha=-0.7).blows_up
    with pytest.raises(ValueError):
        classify_laguerre(SQRT, 1.0, 2.0, 3.0, alpha=-1.0)


@settings(max_examples=100, deadline=None)
@given(p=st.floats(1.01, 10), dq=st.floats(0.01, 10), t=st.floats(0.01, 5))
def test_sqrt_blows_up_for_all_exponents(p, dq, t):
    assert classify_ou(SQRT, t, p, p + dq).blows_up
    assert classify_laguerre(SQRT, t, p, p + dq).blows_up


@settings(max_examples=100, deadline=None)
@given(b=st.floats(0, 3), t=st.floats(0.01, 3), p=st.floats(1.01, 6), q=st.floats(1.01, 60))
def test_ou_threshold_is_exact_and_discriminant_consistent(b, t, p, q):
    f = BernsteinFn.stable(0.5, b=b)
    c = classify_ou(f, t, p, q)
    assert c.blows_up == (q > (1 + (p - 1) * math.exp(2 * b * t)) * (1 + 1e-12))
    if c.blows_up:
        assert c.discriminant > 0


# ---------------------------------------------------------------------------
# Laguerre Parseval


def test_parseval_examples():
    for alpha in (0.0, 1.5):
        val = laguerre_parseval(kronecker_zero(PolyFamily.laguerre(alpha)), alpha, 0.3, 0.2, 20)
        assert float(val.value) == pytest.approx(0.7 ** -(alpha + 1) * 0.8 ** -(alpha + 1), rel=1e-14)
    assert rho_parseval(0.5, 0.5) == 1.0


def test_parseval_geometric_series_has_closed_form():
    # a_n = r^n sums to (1 - r rho)^-(alpha+1)
    alpha, r, tau1, tau2 = 0.5, 0.2, 0.4, 0.3
    val = laguerre_parseval(geometric(PolyFamily.laguerre(alpha), r), alpha, tau1, tau2, 400)
    rho = rho_parseval(tau1, tau2)
    want = ((1 - tau1) * (1 - tau2)) ** -(alpha + 1) * (1 - r * rho) ** -(alpha + 1)
    assert float(val.value) == pytest.approx(want, rel=1e-12)
    assert val.tail_estimate < 1e-12


def test_parseval_flags_divergence_for_sqrt_multiplier():
    seq = subordinated_multiplier(SQRT, 1.0, LAGUERRE0)
    tau1, tau2 = optimal_taus(200, 0.0, 2.0, 4.0)
    with pytest.raises(DivergenceError):
        laguerre_parseval(seq, 0.0, tau1, tau2, 400, p=2.0, q=4.0)


def test_parseval_rejects_out_of_range_taus():
    seq = kronecker_zero(LAGUERRE0)
    with pytest.raises(ValueError):
        laguerre_parseval(seq, 0.0, 0.6, 0.1, 10, p=2.0, q=4.0)
    with pytest.raises(ValueError):
        laguerre_parseval(seq, 0.0, 0.1, 0.8, 10, p=2.0, q=4.0)


@settings(max_examples=40, deadline=None)
@given(tau1=st.floats(0.01, 0.6), tau2=st.floats(0.01, 0.6), alpha=st.floats(-0.9, 3))
def test_truncated_parseval_is_symmetric_in_taus(tau1, tau2, alpha):
    seq = subordinated_multiplier(BernsteinFn.drift(1.0), 0.5, PolyFamily.laguerre(alpha)).truncated(40)
    forward = laguerre_parseval(seq, alpha, tau1, tau2, 60).value
    backward = laguerre_parseval(seq, alpha, tau2, tau1, 60).value
    assert forward.logmag == backward.logmag


# ---------------------------------------------------------------------------
# necessary condition


def test_necessary_condition_examples():
    fine = multiplier_necessary_condition(geometric(LAGUERRE0, 0.3), 2.0, 4.0, n_max=1000)
    assert fine.first_violation is None and not fine.violated
    bad = multiplier_necessary_condition(subordinated_multiplier(SQRT, 1.0, LAGUERRE0), 2.0, 4.0, n_max=1000)
    assert bad.first_violation is not None and bad.violated
    assert bad.threshold == pytest.approx(1 / 3)
    rho100 = rho_parseval(*optimal_taus(100, 0.0, 2.0, 4.0))
    assert rho100 == bad.rho_values[bad.rho_degrees.index(100)]
    assert rho100 < 3
    rho1000 = rho_parseval(*optimal_taus(1000, 0.0, 2.0, 4.0))
    assert abs(rho1000 / 3 - 1) < 0.01
    assert bad.rho_limit == 3.0


def test_rho_sequence_approaches_limit_like_one_over_n():
    report = multiplier_necessary_condition(geometric(LAGUERRE0, 0.3), 2.0, 4.0, n_max=100)
    rel = np.abs(np.array(report.rho_values) / report.rho_limit - 1)
    n = np.array(report.rho_degrees, dtype=float)
    assert np.all(np.diff(rel) < 0)
    assert np.all(rel * n <= 2 * abs(report.rho_constant))


def test_necessary_condition_rejects_small_range():
    with pytest.raises(ValueError):
        multiplier_necessary_condition(geometric(LAGUERRE0, 0.3), 2.0, 4.0, n_max=5)
