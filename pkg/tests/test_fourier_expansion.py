import math
from fractions import Fraction

import pytest

from ball_integration import inner_product
from bloch_analysis import random_grid_set
from fourier_expansion import (
    FunctionSpecError, NotMonogenicError, coefficient_from_derivative, derivative_series, expand,
    from_weights, function_from_spec, function_spec_json, load_function_spec, norm_sq_sum,
    primitive_series, reconstruct, split_main_constant, value_at_origin, value_at_origin_exact,
)
from harmonic_basis import InvalidIndexError
from monogenic_basis import BasisIndex, PreconditionError, basis_poly
from poly_algebra import APoly, X0, hypercomplex_derivative
from quaternion_core import ReducedQuaternion

X10 = BasisIndex(1, "X", 0)
X12 = BasisIndex(1, "X", 2)


def test_expand_single_element():
    c = expand(basis_poly(X10))
    assert c.weights == {X10: Fraction(1)}
    assert c.coefficients[X10] == pytest.approx(math.sqrt(2 * math.pi / 5))
    assert c.degree_max == 1


def test_expand_constant_and_value_at_origin():
    f = APoly.constant(ReducedQuaternion(3, 2, -1))
    c = expand(f)
    assert c.weights == {BasisIndex(0, "X", 0): 6, BasisIndex(0, "X", 1): -4, BasisIndex(0, "Y", 1): 2}
    assert value_at_origin_exact(c) == ReducedQuaternion(3, 2, -1)
    assert value_at_origin(c).components == pytest.approx((3.0, 2.0, -1.0))


def test_expand_zero_function():
    c = expand(APoly.zero())
    assert c.is_empty()
    assert reconstruct(c).is_zero()


def test_expand_rejects_invalid_input():
    with pytest.raises(NotMonogenicError):
        expand(APoly(X0))
    with pytest.raises(PreconditionError):
        expand(basis_poly(X10), 0)
    with pytest.raises(PreconditionError):
        expand(basis_poly(X10), 1, degree_max=0)


def test_round_trip_and_parseval(rng):
    for radius in (Fraction(1), Fraction(3, 4)):
        source = random_grid_set(rng, 3, radius)
        f = reconstruct(source)
        c = expand(f, radius, 3)
        assert c.weights == source.weights
        assert reconstruct(c) == f
        assert norm_sq_sum(c) == pytest.approx(inner_product(f, f, radius).to_float(), rel=1e-10)


def test_split_main_constant():
    c = from_weights({X10: 1, X12: Fraction(1, 6)})
    main, constant = split_main_constant(c)
    assert main.indices() == [X10]
    assert constant.indices() == [X12]
    assert inner_product(reconstruct(main), reconstruct(constant)).is_zero()
    assert hypercomplex_derivative(reconstruct(constant)).is_zero()


def test_derivative_and_primitive_series():
    derived = derivative_series(from_weights({BasisIndex(2, "X", 1): 1}))
    assert derived.weights == {BasisIndex(1, "X", 1): 4}
    assert derivative_series(from_weights({BasisIndex(0, "X", 0): 1, X12: 5})).is_empty()
    assert primitive_series(from_weights({BasisIndex(0, "X", 1): 1})).weights == {BasisIndex(1, "X", 1): Fraction(1, 3)}


def test_series_operations_match_polynomials(rng):
    c = random_grid_set(rng, 3)
    f = reconstruct(c)
    assert reconstruct(derivative_series(c)) == hypercomplex_derivative(f)
    assert derivative_series(primitive_series(c)).weights == c.weights
    up = reconstruct(primitive_series(c))
    assert all(inner_product(up, basis_poly(BasisIndex(n, fam, n + 1))).is_zero()
               for n in range(5) for fam in ("X", "Y"))


def test_coefficient_from_derivative(rng):
    c = random_grid_set(rng, 4)
    f = reconstruct(c)
    for idx in (BasisIndex(2, "X", 0), BasisIndex(3, "Y", 2), BasisIndex(4, "X", 4)):
        assert coefficient_from_derivative(f, idx) == pytest.approx(c.coefficients.get(idx, 0.0), rel=1e-9)
    with pytest.raises(PreconditionError):
        coefficient_from_derivative(f, X10)
    with pytest.raises(PreconditionError):
        coefficient_from_derivative(f, BasisIndex(2, "X", 3))


def test_from_weights_validation():
    assert from_weights({X10: 0}).is_empty()
    with pytest.raises(PreconditionError):
        from_weights({BasisIndex(3, "X", 0): 1}, degree_max=2)
    with pytest.raises(InvalidIndexError):
        from_weights({(1, "X", 0): 1})


def test_coefficient_set_json():
    data = from_weights({X10: Fraction(1, 2)}, Fraction(1, 2)).to_json()
    assert data["radius"] == {"num": 1, "den": 2}
    entry, = data["entries"]
    assert entry["weight"] == {"num": 1, "den": 2}
    assert entry["coefficient"] == pytest.approx(0.5 * math.sqrt(2 * math.pi / 5 / 32))


def test_function_from_spec_terms():
    f, radius = function_from_spec({
        "radius": "1/2",
        "terms": [
            {"n": 1, "family": "X", "m": 0, "coeff": "1"},
            {"n": 1, "family": "X", "m": 0, "coeff": 0.5},
        ],
    })
    assert radius == Fraction(1, 2)
    assert f == basis_poly(X10).scale(Fraction(3, 2))


def test_function_from_spec_components():
    f, radius = function_from_spec({"components": basis_poly(X10).to_json()})
    assert f == basis_poly(X10) and radius == 1
    raw, _ = function_from_spec(basis_poly(X12).to_json())
    assert raw == basis_poly(X12)
    with pytest.raises(NotMonogenicError):
        function_from_spec({"components": APoly(X0).to_json()})


@pytest.mark.parametrize("spec, message", [
    ({"terms": [{"n": 1, "family": "X", "m": 0}]}, "term 0"),
    ({"terms": [{"n": 1, "family": "X", "m": 0, "coeff": 1}, {"n": 1, "family": "Q", "m": 0, "coeff": 1}]}, "term 1"),
    ({"terms": [{"n": True, "family": "X", "m": 0, "coeff": 1}]}, "term 0"),
    ({"terms": [{"n": 1, "family": "X", "m": 5, "coeff": 1}]}, "term 0"),
    ({"terms": ["X_1^0"]}, "term 0"),
    ({"radius": 0, "terms": []}, "radius"),
    ({"radius": "abc", "terms": []}, "radius"),
    ({"coefficients": []}, "terms"),
    ({"radius": "0", "components": basis_poly(X10).to_json()}, "radius"),
    ({"radius": -0.5, "components": basis_poly(X10).to_json()}, "radius"),
    ({"radius": "1/0", "components": basis_poly(X10).to_json()}, "radius"),
])
def test_function_spec_errors(spec, message):
    with pytest.raises(FunctionSpecError, match=message):
        function_from_spec(spec)


def test_load_function_spec(write_spec, tmp_path):
    c = from_weights({X10: Fraction(2, 7), BasisIndex(2, "Y", 1): -1})
    f, radius = load_function_spec(write_spec(function_spec_json(c)))
    assert f == reconstruct(c) and radius == 1

    broken = tmp_path / "broken.json"
    broken.write_text('{"terms": [', encoding="utf-8")
    with pytest.raises(FunctionSpecError):
        load_function_spec(str(broken))
    with pytest.raises(OSError):
        load_function_spec(str(tmp_path / "missing.json"))


def test_function_spec_json_numbers():
    data = function_spec_json(from_weights({X10: Fraction(1, 2), BasisIndex(2, "Y", 1): -3}, Fraction(3, 4)))
    assert data["radius"] == 0.75
    assert [term["coeff"] for term in data["terms"]] == [0.5, -3.0]
    thirds = function_spec_json(from_weights({X10: Fraction(1, 3)}, Fraction(1, 3)))
    assert thirds["radius"] == "1/3" and thirds["terms"][0]["coeff"] == "1/3"
    f, radius = function_from_spec(thirds)
    assert radius == Fraction(1, 3) and f == basis_poly(X10).scale(Fraction(1, 3))
