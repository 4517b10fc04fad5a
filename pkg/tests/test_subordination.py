import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from subordlab.bernstein import BernsteinFn, nonlinear_part
from subordlab.measures import Measure, gauss_rule
from subordlab.orthopoly import PolyFamily, eigenvalue
from subordlab.subordination import (
    MultiplierSequence,
    TruncationError,
    factorized_log_multiplier,
    heat_kernel,
    heat_truncation,
    jacobi_heat_kernel,
    poisson_kernel_identity,
    poisson_subordination,
    poisson_ultra_bound,
    poisson_ultra_ratio,
    subordinated_multiplier,
    ultra_grid,
    ultra_norm_estimate,
)

GRID = (0.25, 0.5, 1.0, 2.0, 4.0)
FUNCTIONS = [BernsteinFn.sqrt(), BernsteinFn.drift(0.5, a=0.3), BernsteinFn.stable(0.3, a=0.2, b=1.0),
             BernsteinFn.gamma(1.0), BernsteinFn.atoms([(1.0, 2.0)], a=0.1)]


# ---------------------------------------------------------------------------
# Poisson subordination


@pytest.mark.parametrize("t, lam, expected", [(1.0, 0.0, 1.0), (2.0, 1.0, math.exp(-2)), (0.5, 4.0, math.exp(-1))])
def test_poisson_identity_examples(t, lam, expected):
    assert poisson_subordination(t, lam) == pytest.approx(expected, rel=1e-10)
    assert poisson_kernel_identity(t, lam) < 1e-8


def test_poisson_identity_on_grid():
    worst = max(poisson_kernel_identity(t, lam) for t in GRID for lam in GRID)
    assert worst < 1e-8


@settings(max_examples=40, deadline=None)
@given(t=st.floats(1e-3, 20), lam=st.floats(0, 1e4))
def test_poisson_identity_random(t, lam):
    assert poisson_kernel_identity(t, lam) < 1e-8


def test_poisson_identity_rejects_bad_input():
    with pytest.raises(ValueError):
        poisson_subordination(0.0, 1.0)
    with pytest.raises(ValueError):
        poisson_subordination(1.0, -1.0)


def incomplete_gamma_majorant(sigma: float, t: float) -> float:
    """Closed form of the two pieces through the regularized incomplete Gamma functions."""
    c = t * t / 4
    a = (sigma + 1) / 2
    head = 4**a * t ** (-sigma) * special.gammaincc(a, c) * special.gamma(a)
    tail = 2 * special.gammainc(0.5, c) * special.gamma(0.5)
    return (head + tail) / (2 * math.sqrt(math.pi))


@pytest.mark.parametrize("sigma, t", [(1.0, 1.0), (2.0, 0.01), (0.5, 3.0), (3.0, 10.0)])
def test_poisson_ultra_bound_matches_incomplete_gamma(sigma, t):
    assert poisson_ultra_bound(sigma, t) == pytest.approx(incomplete_gamma_majorant(sigma, t), rel=1e-10)


def test_poisson_ultra_bound_scaling():
    ratios = [poisson_ultra_ratio(2.0, t) for t in np.geomspace(1e-3, 10.0, 25)]
    assert max(ratios) / min(ratios) < 10
    r = poisson_ultra_ratio(2.0, 0.01) / poisson_ultra_ratio(2.0, 0.1)
    assert 0.25 < r < 4
    # large t: the small-time piece dies, the rest stays bounded by the subordinator's total mass
    assert poisson_ultra_bound(1.0, 50.0) <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# multipliers


def test_subordinated_multiplier_examples():
    seq = subordinated_multiplier(BernsteinFn.sqrt(), 1.0, PolyFamily.hermite())
    assert seq(4) == pytest.approx(math.exp(-2), rel=1e-15)
    for f in FUNCTIONS:
        assert subordinated_multiplier(f, 0.7, PolyFamily.laguerre(0.5))(0) == pytest.approx(math.exp(-0.7 * f.a))
    seq = subordinated_multiplier(BernsteinFn.drift(1.0), 0.3, PolyFamily.jacobi(0, 0))
    assert seq(1) == pytest.approx(math.exp(-0.6), rel=1e-15)
    with pytest.raises(ValueError):
        subordinated_multiplier(BernsteinFn.sqrt(), 0.0, PolyFamily.hermite())
    with pytest.raises(ValueError):
        seq(-1)


@pytest.mark.parametrize("f", FUNCTIONS, ids=lambda f: f.label())
def test_factorization_and_contraction(f):
    n = np.arange(41)
    for fam in (PolyFamily.hermite(), PolyFamily.jacobi(0.5, 1.0)):
        lam = eigenvalue(fam, n)
        for t in (0.1, 1.0, 3.0):
            parts = factorized_log_multiplier(f, t, lam)
            direct = subordinated_multiplier(f, t, fam)(n)
            np.testing.assert_allclose(np.exp(sum(parts)), direct, rtol=1e-12)
            contraction = np.exp(parts[1])
            assert np.all((contraction > 0) & (contraction <= 1))
            assert np.all(np.asarray(nonlinear_part(f)(lam)) >= 0)


def test_multiplier_sequence_helpers():
    seq = MultiplierSequence.from_values(PolyFamily.laguerre(0.0), lambda n: 0.5 ** np.asarray(n, dtype=float))
    assert seq(3) == pytest.approx(0.125)
    cut = seq.truncated(2)
    np.testing.assert_array_equal(cut(np.arange(5)) > 0, [True, True, True, False, False])
    with pytest.raises(ValueError):
        MultiplierSequence.from_values(PolyFamily.hermite(), lambda n: -np.ones_like(n, dtype=float)).log_values(1)


# ---------------------------------------------------------------------------
# Jacobi heat kernel


def test_heat_kernel_examples():
    assert jacobi_heat_kernel(0.0, 0.0, 40.0, 0.3, -0.8) == pytest.approx(1.0, abs=1e-12)
    assert ultra_norm_estimate(0.0, 0.0, 10.0).value == pytest.approx(1.0, abs=1e-6)
    value = jacobi_heat_kernel(0.0, 0.0, 0.5, 1.0, 1.0)
    assert value > 0
    refined = jacobi_heat_kernel(0.0, 0.0, 0.5, 1.0, 1.0, term_tol=1e-24)
    assert value == pytest.approx(refined, abs=1e-10)


@pytest.mark.parametrize("ab", [(0.0, 0.0), (0.5, -0.5), (1.0, 1.0), (2.0, 0.5)])
def test_stochastic_completeness_symmetry_semigroup(ab):
    a, b = ab
    rule = gauss_rule(Measure.jacobi(a, b), 400)
    x = np.array([-0.9, 0.0, 0.9])
    for s in (0.1, 1.0):
        mass = heat_kernel(a, b, s, x, rule.nodes).value @ rule.weights
        np.testing.assert_allclose(mass, 1.0, atol=1e-8)
    pts = np.array([-1.0, -0.3, 0.2, 0.77, 1.0])
    k = heat_kernel(a, b, 0.02, pts, pts).value
    assert np.array_equal(k, k.T)
    k_xy = heat_kernel(a, b, 0.02, pts[:2], pts[2:]).value
    k_yx = heat_kernel(a, b, 0.02, pts[2:], pts[:2]).value
    assert np.array_equal(k_xy, k_yx.T)
    assert np.all(k >= -1e-12)
    left = heat_kernel(a, b, 0.05, pts, rule.nodes).value
    right = heat_kernel(a, b, 0.15, rule.nodes, pts).value
    np.testing.assert_allclose((left * rule.weights) @ right, heat_kernel(a, b, 0.2, pts, pts).value, atol=1e-7)


def test_truncation_tail_bound_is_small_and_reported():
    for s in (1e-3, 0.1, 1.0):
        n_trunc, tail = heat_truncation(1.0, 0.0, s)
        kernel = heat_kernel(1.0, 0.0, s, 1.0, 1.0)
        assert kernel.truncation == n_trunc
        assert tail <= 1e-10 * kernel.scalar


def test_truncation_cap_is_reported():
    with pytest.raises(TruncationError) as info:
        heat_truncation(0.0, 0.0, 1e-6, cap=500)
    assert info.value.required > 500


def test_heat_kernel_rejects_bad_parameters():
    with pytest.raises(ValueError):
        heat_kernel(-0.7, 0.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        heat_kernel(0.0, 0.0, 0.0, 0.0, 0.0)


def test_endpoint_maxima_assumption():
    """|j_n| on [-1, 1] peaks at an endpoint for alpha, beta >= -1/2, n <= 50."""
    from subordlab.orthopoly import jacobi_endpoint_log_values, normalized_table

    x = np.linspace(-1, 1, 4001)
    for a, b in ((0.0, 0.0), (0.5, -0.5), (-0.5, -0.5), (2.0, 1.0)):
        fam = PolyFamily.jacobi(a, b)
        table = normalized_table(fam, 50, x)
        right, left = jacobi_endpoint_log_values(fam, np.arange(51))
        assert np.all(table.logmag.max(axis=1) <= np.maximum(right, left) + 1e-12)


@pytest.mark.parametrize("ab", [(0.0, 0.0), (0.5, -0.5), (1.0, 1.0)])
def test_ultracontractive_scaling_window(ab):
    a, b = ab
    m = max(a, b) + 1
    scaled = [min(1.0, s) ** m * ultra_norm_estimate(a, b, s).value for s in (1e-3, 1e-2, 1e-1, 1.0)]
    assert max(scaled) / min(scaled) < 10


def test_ultra_maximum_on_grid_boundary():
    for s in (1e-3, 1e-2, 1e-1):
        est = ultra_norm_estimate(1.0, 1.0, s)
        assert max(abs(est.argmax[0]), abs(est.argmax[1])) == 1.0
    grid = ultra_grid(0.5, -0.5)
    assert grid[0] == -1.0 and grid[-1] == 1.0 and np.all(np.diff(grid) > 0)
