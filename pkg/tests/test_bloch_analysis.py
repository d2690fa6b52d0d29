import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from ball_integration import SphereSampling
from bloch_analysis import (
    BLOCH_CONSTANT, IMAGE_BALL_CONSTANT, BoundCheckRecord, CheckResult, DomainViolationError,
    SeriesDivergenceError, bloch_constants, concavity_check, cubic_root_analysis, g_at_r30_matches_closed_form,
    g_eval, g_homogeneity_error, g_prime, g_second, lemma1_rhs_factor, lemma2_rhs_factor, maximize_g,
    planar_counterexamples, probe_image_ball, random_monogenic_set, random_normalized_function,
    second_derivative_matches_closed_form, series_closed_form_check, sweep_points, verify_lemma1, verify_lemma2,
)
from monogenic_basis import BasisIndex, basis_poly
from poly_algebra import APoly, hypercomplex_derivative, value_at
from verification_suites import VerificationProcessor

SQRT3 = math.sqrt(3.0)


def test_rhs_factors():
    assert lemma2_rhs_factor(0.5, 1.0) == pytest.approx(12.0)
    assert lemma1_rhs_factor(0.5, 1.0) == pytest.approx(2 / SQRT3 * 0.25 * (1 + 9 - 5.5) / 0.125)
    assert lemma1_rhs_factor(0.0, 1.0) == 0.0


@pytest.mark.parametrize("fn", [lemma1_rhs_factor, lemma2_rhs_factor])
def test_rhs_domain(fn):
    with pytest.raises(DomainViolationError):
        fn(1.0, 1.0)
    with pytest.raises(DomainViolationError):
        fn(-0.1, 1.0)
    with pytest.raises(DomainViolationError):
        fn(0.1, 0.0)


def test_bound_record_tolerance():
    assert BoundCheckRecord((0.0, 0.0, 0.0), 1.0, 1.0).passed
    assert BoundCheckRecord((0.0, 0.0, 0.0), 1.0 + 1e-14, 1.0).passed
    assert not BoundCheckRecord((0.0, 0.0, 0.0), 1.1, 1.0).passed


def test_check_result_from_records():
    records = [BoundCheckRecord((0.1, 0.0, 0.0), 0.5, 1.0), BoundCheckRecord((0.2, 0.0, 0.0), 0.9, 1.0)]
    result = CheckResult.from_records("demo", records, {"radius": 1})
    assert result.passed
    assert result.worst_slack == pytest.approx(0.1)
    data = result.to_json()
    assert data["pass"] is True and len(data["records"]) == 2
    assert "informational" not in data


def test_constants_decimals():
    assert float(IMAGE_BALL_CONSTANT) == pytest.approx(1 / 60 - 62192 * SQRT3 / 20511149)
    assert float(IMAGE_BALL_CONSTANT) == pytest.approx(0.011415, abs=1e-6)
    assert BLOCH_CONSTANT.decimal(10).startswith("0.00570745")
    assert BLOCH_CONSTANT == IMAGE_BALL_CONSTANT.half()


def test_g_values():
    assert g_eval(Fraction(1, 30)) == pytest.approx(float(IMAGE_BALL_CONSTANT), rel=1e-14)
    assert g_at_r30_matches_closed_form()
    assert g_prime(Fraction(1, 30)) > 0
    assert g_prime(Fraction(1, 20)) < 0
    assert g_second(0.04) < 0
    precise = g_eval(Fraction(1, 30), precision=40)
    assert abs(precise - IMAGE_BALL_CONSTANT.mp_value(40)) < mpmath.mpf(10) ** -35


@pytest.mark.parametrize("rho, r", [(0, 1), (1, 1), (1.5, 1), (0.1, -1)])
def test_g_domain(rho, r):
    with pytest.raises(DomainViolationError):
        g_eval(rho, r)


def test_g_second_closed_form_and_concavity():
    assert second_derivative_matches_closed_form()
    concave, largest = concavity_check(1.0, 199)
    assert concave and largest < 0


def test_maximize_g():
    rho_max, g_max = maximize_g(1.0)
    assert 1 / 30 < rho_max < 1 / 20
    assert g_max >= g_eval(Fraction(1, 30))
    assert g_prime(rho_max) == pytest.approx(0.0, abs=1e-10)
    rho_2, g_2 = maximize_g(2.0)
    assert rho_2 == pytest.approx(2 * rho_max, rel=1e-10)
    assert g_2 == pytest.approx(2 * g_max, rel=1e-10)


def test_g_homogeneity(rng):
    assert g_homogeneity_error(rng) < 1e-15


def test_cubic_root_analysis():
    cubic = cubic_root_analysis()
    assert cubic.discriminant == -24620
    assert len(cubic.real_roots) == 1
    assert cubic.real_roots[0] < 0
    assert cubic.single_negative_root


def test_series_closed_form():
    partial, closed = series_closed_form_check(0.5)
    assert closed == pytest.approx(9.0)
    assert partial == pytest.approx(closed, rel=1e-12)
    with pytest.raises(SeriesDivergenceError):
        series_closed_form_check(1.0)
    with pytest.raises(DomainViolationError):
        series_closed_form_check(-0.1)


def test_bloch_constants_report():
    report = bloch_constants()
    assert report.passed
    assert report.halving_exact
    assert not report.exceeds_quoted_image_ball_bound
    assert not report.exceeds_quoted_bloch_bound
    data = report.to_json()
    assert data["pass"] is True
    assert data["cubic"]["discriminant"] == -24620
    assert data["bloch_radius_constant"]["sqrt3_coeff"] == {"num": -31096, "den": 20511149}


def test_lemmas_on_basis_element(small_sampling):
    f = basis_poly(BasisIndex(2, "X", 0))
    pts = sweep_points([0.1, 0.5, 0.8], 16)
    first = verify_lemma1(f, 1, pts, small_sampling)
    second = verify_lemma2(f, 1, pts, small_sampling)
    assert first.passed and second.passed
    assert len(first.records) == 48
    assert first.details["max_modulus"] == pytest.approx(3.0, rel=1e-4)
    assert first.worst_slack > 0 and second.worst_slack > 0


def test_lemmas_on_constant_function(small_sampling):
    f = basis_poly(BasisIndex(0, "X", 0))
    pts = sweep_points([0.3], 8)
    assert verify_lemma1(f, 1, pts, small_sampling).worst_slack == 0.0
    assert verify_lemma2(f, 1, pts, small_sampling).passed


def test_lemma_rejects_points_outside_ball(small_sampling):
    with pytest.raises(DomainViolationError):
        verify_lemma2(basis_poly(BasisIndex(2, "X", 0)), 1, [[1.0, 0.0, 0.0]], small_sampling)


@pytest.mark.slow
def test_lemmas_on_random_functions(rng, small_sampling):
    pts = sweep_points([0.1, 0.4, 0.7], 24)
    for _ in range(3):
        c = random_monogenic_set(rng, 5)
        assert verify_lemma1(c, 1, pts, small_sampling).passed
        assert verify_lemma2(c, 1, pts, small_sampling).passed


def test_random_monogenic_set_coefficients(rng):
    c = random_monogenic_set(rng, 2)
    assert len(c) == 3 + 5 + 7
    assert all(-1.0 - 1e-9 <= v <= 1.0 + 1e-9 for v in c.coefficients.values())


def test_probe_on_linear_function(small_sampling):
    probe = probe_image_ball(basis_poly(BasisIndex(1, "X", 0)), small_sampling, 400)
    assert probe.status == "bound_holds"
    assert probe.q == (0.0, 0.0, 0.0)
    assert probe.t == pytest.approx(0.5)
    assert probe.derivative_at_q == pytest.approx(1.0)
    assert probe.R == pytest.approx(float(BLOCH_CONSTANT))
    assert probe.min_boundary_gap == pytest.approx(1 / 120, rel=1e-3)
    assert probe.slack > 0


def test_probe_on_constant_is_degenerate(small_sampling):
    probe = probe_image_ball(basis_poly(BasisIndex(0, "X", 1)), small_sampling, 100)
    assert probe.status == "degenerate"


def test_random_normalized_function(rng):
    f = random_normalized_function(rng, 4, samples=200)
    derivative = hypercomplex_derivative(f)
    assert value_at(derivative, (0, 0, 0)).norm_sq() == 1
    assert f.degree() <= 4


def test_planar_counterexamples():
    cases = dict(planar_counterexamples())
    plane = cases["x0 + x2 j"]
    assert not plane.c1
    assert value_at(plane, (2, 3, 5)).components == (2, 0, 5, 0)
    swap = cases["x1 - x0 i"]
    assert not swap.c2
    for f in cases.values():
        F = hypercomplex_derivative(f)
        np.testing.assert_allclose(F.modulus_many(np.eye(3)), 1.0)


def test_probe_degenerate_and_constant_shift(small_sampling):
    assert probe_image_ball(APoly.zero(), small_sampling, 100).status == "degenerate"
    shifted = basis_poly(BasisIndex(1, "X", 0)) + basis_poly(BasisIndex(2, "Y", 3)).scale(Fraction(1, 100))
    assert probe_image_ball(shifted, small_sampling, 400).status == "bound_holds"


@pytest.mark.parametrize("t, tolerance", [(0.0, 0.0), (0.1, 1e-12), (0.9, 1e-10)])
def test_series_closed_form_values(t, tolerance):
    partial, closed = series_closed_form_check(t)
    assert partial == pytest.approx(closed, rel=tolerance, abs=tolerance)


@pytest.mark.slow
def test_lemma_sweep_at_full_size():
    # 50 functions of degree <= 8, radii 0.05..0.8, 64 directions
    first, second = VerificationProcessor(SphereSampling()).lemma_suite(seed=42)
    assert first.params["functions"] == 50 and first.params["degree"] == 8
    assert len(first.params["radii"]) == 16 and first.params["directions"] == 64
    assert first.passed and second.passed
    assert len(first.records) == len(second.records) == 50
    assert first.worst_slack >= 0 and second.worst_slack >= 0
