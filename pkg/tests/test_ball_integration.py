import math
from fractions import Fraction

import numpy as np
import pytest
from sympy.polys.domains import QQ

from ball_integration import (
    ExactBallScalar, NonFiniteEvaluationError, golden_sphere_points, inner_product, integrate_poly,
    SphereSampling, max_modulus, monomial_ball_integral, quadrature_inner_product, search,
)
from poly_algebra import APoly, TRI_RING, X0, X1, X2, random_apoly

HALF = QQ(1, 2)
LINEAR = APoly(X0, X1 * HALF, X2 * HALF)


@pytest.mark.parametrize("exponents, expected", [
    ((0, 0, 0), Fraction(4, 3)),
    ((2, 0, 0), Fraction(4, 15)),
    ((0, 0, 2), Fraction(4, 15)),
    ((2, 2, 0), Fraction(4, 105)),
    ((4, 0, 0), Fraction(4, 35)),
])
def test_even_monomial_integrals(exponents, expected):
    value = monomial_ball_integral(*exponents)
    assert value.coefficient == expected
    assert value.pi_power == 1
    assert value.r_power == sum(exponents) + 3


def test_odd_monomials_vanish():
    assert monomial_ball_integral(1, 0, 0).is_zero()
    assert monomial_ball_integral(2, 1, 2).is_zero()
    with pytest.raises(ValueError):
        monomial_ball_integral(-1, 0, 0)


def test_radius_scaling():
    value = monomial_ball_integral(2, 0, 0, Fraction(1, 2))
    assert value.rational_value() == Fraction(4, 15) / 2 ** 5


def test_scalar_arithmetic():
    a = ExactBallScalar(Fraction(1, 3), 1, 3, Fraction(2))
    b = ExactBallScalar(Fraction(1, 5), 1, 5, Fraction(2))
    total = a + b
    assert total.r_power == 0
    assert total.coefficient == Fraction(8, 3) + Fraction(32, 5)
    assert (a - a).is_zero()
    assert ExactBallScalar.zero(2) + a == a
    assert b.ratio(a) == Fraction(32, 5) / Fraction(8, 3)
    assert a.scale(3).coefficient == 1
    assert a.to_float() == pytest.approx(8 * math.pi / 3)
    assert a.to_json() == {"num": 1, "den": 3, "pi_power": 1, "r_power": 3}


def test_mismatched_radius_rejected():
    with pytest.raises(ValueError):
        ExactBallScalar(Fraction(1), 1, 3, Fraction(1)) + ExactBallScalar(Fraction(1), 1, 3, Fraction(2))


def test_inner_product_examples():
    assert inner_product(LINEAR, LINEAR) == ExactBallScalar(Fraction(2, 5), 1, 5, Fraction(1))
    const = APoly(TRI_RING.one * HALF)
    assert inner_product(const, const).coefficient == Fraction(1, 3)
    assert inner_product(const, LINEAR).is_zero()


def test_integrate_mixed_degrees_folds_radius():
    p = TRI_RING.one + X0 ** 2
    value = integrate_poly(p, 2)
    assert value.r_power == 0
    assert value.coefficient == Fraction(4, 3) * 8 + Fraction(4, 15) * 32


def test_inner_product_matches_quadrature(rng):
    for _ in range(3):
        f, g = random_apoly(rng, 4), random_apoly(rng, 4)
        exact = inner_product(f, g, Fraction(3, 4)).to_float()
        assert quadrature_inner_product(f, g, 0.75) == pytest.approx(exact, rel=1e-9, abs=1e-12)


def test_golden_points_on_sphere():
    pts = golden_sphere_points(100, 2.0, center=(1.0, 0.0, 0.0))
    assert pts.shape == (100, 3)
    np.testing.assert_allclose(np.linalg.norm(pts - [1.0, 0.0, 0.0], axis=1), 2.0)


def test_max_modulus_examples(small_sampling):
    assert max_modulus(APoly.zero(), 1.0, small_sampling).value == 0.0
    assert max_modulus(APoly(TRI_RING.one * HALF), 1.0, small_sampling).value == pytest.approx(0.5)
    # |x0 + x1 i/2 + x2 j/2| peaks at the poles
    assert max_modulus(LINEAR, 1.0, small_sampling).value == pytest.approx(1.0, rel=1e-4)
    assert max_modulus(APoly(X0 * 3), 1.0, small_sampling).value == pytest.approx(3.0, rel=1e-4)


def test_max_modulus_refines_and_grows(small_sampling):
    f = APoly(X0 ** 2 - (X1 ** 2 + X2 ** 2) * HALF, X1, X2)
    inner = max_modulus(f, 0.5, small_sampling)
    outer = max_modulus(f, 1.0, small_sampling)
    assert inner.refined >= inner.sampled
    assert outer.value >= inner.value


def test_max_modulus_rejects_bad_radius(small_sampling):
    with pytest.raises(ValueError):
        max_modulus(LINEAR, 0.0, small_sampling)


def test_search_minimum_and_non_finite(small_sampling):
    low = search(lambda pts: pts[:, 0], 1.0, small_sampling, maximize=False)
    assert low.value == pytest.approx(-1.0, rel=1e-4)
    with pytest.raises(NonFiniteEvaluationError):
        search(lambda pts: np.full(len(pts), np.nan), 1.0, small_sampling)


def test_max_modulus_on_equator(small_sampling):
    f = APoly(TRI_RING.zero, X1 * -3, X2 * 3)
    assert max_modulus(f, 1.0, small_sampling).value == pytest.approx(3.0, rel=1e-4)


@pytest.mark.parametrize("full_ball", [False, True])
def test_refinement_reaches_exact_extremum(full_ball):
    direction = np.array([1.0, 2.0, 2.0]) / 3.0
    coarse = SphereSampling(points=32, rounds=3, shrink=0.25, candidates=2, steps=20, seed=7)
    center = np.array([1.0, 0.0, 0.0])
    result = search(lambda pts: (pts - center) @ direction, 2.0, coarse, center=center, full_ball=full_ball)
    assert result.refined >= result.sampled
    assert result.refined == pytest.approx(2.0, abs=1e-6)
    assert np.linalg.norm(result.point - center) <= 2.0 + 1e-12
    np.testing.assert_allclose(result.point, center + 2.0 * direction, atol=1e-2)
