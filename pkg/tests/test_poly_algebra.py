from fractions import Fraction

import pytest
from sympy.polys.domains import QQ

from poly_algebra import (
    APoly, HPoly, TRI_RING, X0, X1, X2, apply_D, apply_D_right, apply_half_Dbar, evaluate,
    factorization_holds, is_monogenic, kernel_agreement, laplacian, poly_from_terms, random_apoly,
    riesz_residual, value_at,
)
from monogenic_basis import basis_indices_upto, basis_poly
from quaternion_core import Quaternion

HALF = QQ(1, 2)
LINEAR = APoly(X0, X1 * HALF, X2 * HALF)  # x0 + x1 i / 2 + x2 j / 2


def test_apply_D_examples():
    assert apply_D(APoly(X0)) == HPoly(TRI_RING.one)
    assert apply_D(APoly(TRI_RING.zero, X1)) == HPoly(-TRI_RING.one)
    assert apply_D(LINEAR).is_zero()


def test_apply_half_Dbar_examples():
    assert apply_half_Dbar(APoly(X0)) == HPoly(TRI_RING.one * HALF)
    assert apply_half_Dbar(LINEAR) == HPoly(TRI_RING.one)
    assert apply_half_Dbar(APoly(TRI_RING.zero, X1 * -3, X2 * 3)).is_zero()


def test_is_monogenic():
    assert is_monogenic(LINEAR)
    assert not is_monogenic(APoly(X0))
    assert is_monogenic(APoly.zero())


def test_riesz_residual_examples():
    div, m01, m02, curl = riesz_residual(APoly(X0))
    assert div == TRI_RING.one
    assert not m01 and not m02 and not curl

    div, m01, m02, curl = riesz_residual(APoly(X1, X0))
    assert not div
    assert m01 == TRI_RING.one * 2

    assert not any(riesz_residual(LINEAR))
    # -x2 i - x1 j is monogenic, so the (1, 2) residual must vanish on it
    assert not any(riesz_residual(APoly(TRI_RING.zero, -X2, -X1)))


def test_laplacian_examples():
    assert laplacian(X0 ** 2) == TRI_RING.one * 2
    assert not laplacian(X0 ** 2 - (X1 ** 2 + X2 ** 2) * HALF)
    assert laplacian(X0 ** 2 + X1 ** 2 + X2 ** 2) == TRI_RING.one * 6


def test_factorization_and_riesz_equivalence(rng):
    samples = [random_apoly(rng, 5) for _ in range(20)] + [LINEAR, APoly(TRI_RING.zero, -X2, -X1)]
    for f in samples:
        assert factorization_holds(f)
        assert is_monogenic(f) == (not any(riesz_residual(f)))
    assert kernel_agreement(samples)


def _random_basis_combination(rng, n_max):
    f = APoly.zero()
    for idx in basis_indices_upto(n_max):
        weight = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))
        if weight:
            f = f + basis_poly(idx).scale(weight)
    return f


def test_riesz_equivalence_on_monogenic_combinations(rng):
    samples = [_random_basis_combination(rng, 4) for _ in range(10)]
    for f in samples:
        assert not f.is_zero()
        assert is_monogenic(f)
        assert not any(riesz_residual(f))
        assert factorization_holds(f)
        assert apply_D_right(f).is_zero()
        assert all(not laplacian(p) for p in f.components)
        broken = f + APoly(X0)
        assert not is_monogenic(broken)
        assert any(riesz_residual(broken))
    assert kernel_agreement(samples)


def test_right_D_on_monogenic():
    assert apply_D_right(LINEAR).is_zero()
    assert apply_D_right(APoly(X0)) == HPoly(TRI_RING.one)


def test_linearity(rng):
    f, g = random_apoly(rng, 4), random_apoly(rng, 4)
    a, b = Fraction(3, 7), Fraction(-2, 5)
    combo = f.scale(a) + g.scale(b)
    assert apply_D(combo) == apply_D(f).scale(a) + apply_D(g).scale(b)
    assert apply_half_Dbar(combo) == apply_half_Dbar(f).scale(a) + apply_half_Dbar(g).scale(b)


def test_evaluate_examples():
    assert evaluate(LINEAR, (1, 0, 0)).components == pytest.approx((1.0, 0.0, 0.0))
    assert evaluate(LINEAR, (0, 1, 0)).components == pytest.approx((0.0, 0.5, 0.0))
    f = APoly(X0 + 3, TRI_RING.one * 2, X1 * X2)
    assert evaluate(f, (0, 0, 0)).components == pytest.approx((3.0, 2.0, 0.0))


def test_high_precision_evaluation():
    value = evaluate(LINEAR, (Fraction(1, 3), 0, 0), precision=40)
    assert float(value.x0) == pytest.approx(1 / 3, rel=1e-15)


def test_translate_exact():
    f = APoly(X0 ** 2, X1 * X2)
    shifted = f.translate((1, Fraction(1, 2), -2))
    assert shifted.c0 == X0 ** 2 + X0 * 2 + 1
    assert value_at(shifted, (0, 0, 0)) == Quaternion(1, -1, 0, 0)


def test_homogeneous_parts_and_degree():
    f = APoly(X0 ** 2 + X1, TRI_RING.one)
    parts = f.homogeneous_parts()
    assert sorted(parts) == [0, 1, 2]
    assert f.degree() == 2
    assert not f.is_homogeneous()
    assert parts[2].is_homogeneous(2)
    assert APoly.zero().degree() == float("-inf")


def test_json_round_trip_is_canonical(rng):
    f = random_apoly(rng, 4)
    data = f.to_json()
    assert APoly.from_json(data) == f
    exps = [tuple(t["e"]) for t in data[0]["terms"]]
    assert exps == sorted(exps)


def test_json_rejects_bad_exponent():
    with pytest.raises(ValueError):
        APoly.from_json([{"component": 0, "terms": [{"e": [1, 0], "num": 1, "den": 1}]}])
    with pytest.raises(ValueError):
        APoly.from_json([{"component": 3, "terms": []}])


def test_evaluate_many_matches_exact(rng):
    f = random_apoly(rng, 4)
    point = (Fraction(1, 3), Fraction(-1, 4), Fraction(2, 5))
    exact = value_at(f, point)
    approx = f.evaluate_many([[float(v) for v in point]])[0]
    assert list(approx) == pytest.approx([float(v) for v in exact.components[:3]], abs=1e-12)


def test_poly_from_terms_drops_zeros():
    p = poly_from_terms({(1, 0, 0): 0, (0, 1, 0): Fraction(1, 2)})
    assert list(p.keys()) == [(0, 1, 0)]
