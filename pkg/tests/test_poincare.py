import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subordlab.bernstein import BernsteinFn
from subordlab.poincare import (
    RateFunction,
    inverse_power_constant,
    is_decreasing,
    jacobi_super_rate,
    loglog_slope,
    power_rate,
    transform_super,
    transform_weak,
)

R = np.geomspace(1e-4, 10.0, 57)
SQRT = BernsteinFn.sqrt()
IDENTITY = BernsteinFn.drift(1.0)
CATALOGUE = [SQRT, IDENTITY, BernsteinFn.stable(0.25), BernsteinFn.stable(0.75, a=0.2, b=0.5),
             BernsteinFn.gamma(1.0), BernsteinFn.tempered_stable(0.5, 1.0)]


def test_super_transform_of_inverse_rate_by_sqrt():
    np.testing.assert_allclose(transform_super(power_rate(1.0), SQRT)(R), 32 * R**-2, rtol=1e-13)


@pytest.mark.parametrize("beta", [power_rate(1.0), power_rate(2.5, c=3.0), jacobi_super_rate(0.5, 0.0)],
                         ids=lambda b: b.description)
def test_super_transform_by_identity_is_exact(beta):
    assert np.array_equal(transform_super(beta, IDENTITY)(R), 4 * beta(R / 4))


@pytest.mark.parametrize("theta", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("m", [0.0, 0.5, 2.0])
def test_super_transform_of_jacobi_type_rate_by_power(theta, m):
    beta = RateFunction("super", lambda r: 1.0 + r ** (-(m + 1)), "", m + 1)
    ratio = transform_super(beta, BernsteinFn.stable(theta))(R) / (1 + R ** (-(m + 1) / theta))
    constant = 4 * 2 ** ((m + 1) * (1 + 1 / theta))
    assert np.all(ratio > 0) and ratio.max() <= constant * (1 + 1e-12)


def test_super_transform_is_infinite_below_the_range_of_f():
    f = BernsteinFn.drift(1.0, a=2.0)
    beta_f = transform_super(power_rate(1.0), f)
    assert beta_f(2.0) == math.inf  # 2/r = 1 < f(0) = 2
    assert math.isfinite(beta_f(0.5))
    with pytest.raises(ValueError):
        transform_super(power_rate(1.0, kind="weak"), f)


def test_weak_transform_examples():
    constant = power_rate(0.0, kind="weak")
    np.testing.assert_allclose(transform_weak(constant, SQRT)(R), 2 * math.sqrt(2), rtol=1e-14)
    inv_square = power_rate(2.0, kind="weak")
    np.testing.assert_allclose(transform_weak(inv_square, IDENTITY)(R), 64 * R**-2, rtol=1e-13)
    np.testing.assert_allclose(transform_weak(inv_square, SQRT)(R), 2 * np.sqrt(2 * inv_square(R / 4)), rtol=1e-13)
    with pytest.raises(ValueError):
        transform_weak(power_rate(1.0), SQRT)


def test_jacobi_super_rate_examples():
    assert jacobi_super_rate(0.0, 0.0)(1.0) == 2.0
    assert jacobi_super_rate(0.0, 0.0, c=3.0)(1.0) == 6.0
    assert jacobi_super_rate(0.5, -0.5).exponent == 1.5
    with pytest.raises(ValueError):
        jacobi_super_rate(-0.6, 0.0)
    with pytest.raises(ValueError):
        jacobi_super_rate(0.0, 0.0)(0.0)


@pytest.mark.parametrize("ab", [(0.0, 0.0), (0.5, -0.5), (2.0, 1.0)])
def test_sqrt_composition_doubles_jacobi_exponent(ab):
    rate = jacobi_super_rate(*ab)
    slope = loglog_slope(transform_super(rate, SQRT), 1e-6, 1e-2)
    assert slope == pytest.approx(-2 * rate.exponent, abs=0.01)


@pytest.mark.parametrize("f", CATALOGUE, ids=lambda f: f.label())
def test_transforms_preserve_monotonicity(f):
    # beyond r = 2/f(0) the super transform is +inf by convention, so monotonicity is checked below it
    r_max = min(1e6, 2 / f.a * (1 - 1e-9)) if f.a > 0 else 1e6
    assert is_decreasing(transform_super(jacobi_super_rate(0.5, 0.0), f), r_max=r_max)
    assert is_decreasing(transform_super(power_rate(1.5), f), r_max=r_max)
    assert is_decreasing(transform_weak(power_rate(1.0, kind="weak"), f))
    assert is_decreasing(transform_weak(power_rate(0.0, kind="weak"), f))


@settings(max_examples=30, deadline=None)
@given(m=st.floats(0.1, 4.0), theta=st.floats(0.1, 1.0))
def test_exponent_law(m, theta):
    f = BernsteinFn.drift(1.0) if theta == 1.0 else BernsteinFn.stable(theta)
    slope = loglog_slope(transform_super(power_rate(m), f), 1e-6, 1e-2)
    assert slope == pytest.approx(-m / theta, abs=0.01)


def test_inverse_power_constant_is_reported():
    assert inverse_power_constant(BernsteinFn.stable(0.5), 0.5) == pytest.approx(1.0, rel=1e-12)
    # f = lam^1/2 + lam: f^-1 grows like lam, so the constant for theta = 1/2 is finite
    mixed = BernsteinFn.stable(0.5, b=1.0)
    c = inverse_power_constant(mixed, 0.5)
    assert 0 < c <= 1.0
