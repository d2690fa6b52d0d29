"""
Fourier expansion of monogenic polynomials in the solid spherical monogenics

A coefficient set stores, for each basis index, the exact weight
lambda = <e, f> / ||e||^2 so that f = sum e * lambda. The float coefficients
<e, f> / ||e|| with respect to the normalised elements are derived from it.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np

from ball_integration import inner_product
from harmonic_basis import InvalidIndexError
from monogenic_basis import BasisIndex, PreconditionError, basis_indices, basis_norm_sq, basis_poly
from poly_algebra import APoly, hypercomplex_derivative, is_monogenic, value_at
from quaternion_core import ReducedQuaternion
from utils import fraction_to_json, read_json, to_fraction

logger = logging.getLogger(__name__)


class NotMonogenicError(ValueError):
    """Raised when an operation requiring D f = 0 receives another function"""
    pass


class FunctionSpecError(ValueError):
    """Raised for malformed function-spec JSON"""
    pass


@dataclass(frozen=True)
class FourierCoefficientSet:
    radius: Fraction = Fraction(1)
    weights: Dict[BasisIndex, Fraction] = field(default_factory=dict)
    degree_max: int = 0

    @cached_property
    def coefficients(self) -> Dict[BasisIndex, float]:
        """Real coefficients against the normalised elements e / ||e||"""
        return {
            idx: float(w) * math.sqrt(basis_norm_sq(idx, self.radius).to_float())
            for idx, w in self.weights.items()
        }

    def indices(self) -> List[BasisIndex]:
        return sorted(self.weights, key=lambda idx: idx.sort_key)

    def __len__(self) -> int:
        return len(self.weights)

    def is_empty(self) -> bool:
        return not self.weights

    def to_json(self) -> Dict[str, Any]:
        coefficients = self.coefficients
        return {
            "radius": fraction_to_json(self.radius),
            "degree_max": self.degree_max,
            "entries": [
                dict(idx.to_json(), coefficient=coefficients[idx], weight=fraction_to_json(self.weights[idx]))
                for idx in self.indices()
            ],
        }


def from_weights(weights: Mapping[BasisIndex, Any], r: Any = 1,
                 degree_max: Optional[int] = None) -> FourierCoefficientSet:
    """Coefficient set from exact weights of the unnormalised elements"""
    clean = {}
    for idx, w in weights.items():
        if not isinstance(idx, BasisIndex):
            raise InvalidIndexError(f"{idx!r} is not a basis index")
        value = to_fraction(w)
        if value != 0:
            clean[idx] = value
    top = max((idx.n for idx in clean), default=0)
    if degree_max is None:
        degree_max = top
    elif top > degree_max:
        raise PreconditionError(f"entry of degree {top} exceeds degree_max {degree_max}")
    return FourierCoefficientSet(radius=to_fraction(r), weights=clean, degree_max=degree_max)


def expand(f: APoly, r: Any = 1, degree_max: Optional[int] = None) -> FourierCoefficientSet:
    """Project a monogenic polynomial onto the basis over B_r

    Homogeneous parts of f are monogenic on their own, and elements of
    different degrees are orthogonal, so each part is projected only onto the
    elements of its own degree.
    """
    if not is_monogenic(f):
        raise NotMonogenicError("expand requires a monogenic polynomial")
    radius = to_fraction(r)
    if radius <= 0:
        raise PreconditionError(f"radius must be positive, got {r}")
    d = f.degree()
    if degree_max is not None and d > degree_max:
        raise PreconditionError(f"degree {d} exceeds degree_max {degree_max}")

    weights: Dict[BasisIndex, Fraction] = {}
    for n, part in f.homogeneous_parts().items():
        for idx in basis_indices(n):
            projection = inner_product(basis_poly(idx), part, radius)
            if projection.is_zero():
                continue
            weights[idx] = projection.ratio(basis_norm_sq(idx, radius))
    logger.debug(f"Expanded degree {d} polynomial into {len(weights)} entries")
    top = degree_max if degree_max is not None else max(int(d), 0) if weights else 0
    return FourierCoefficientSet(radius=radius, weights=weights, degree_max=top)


def reconstruct(c: FourierCoefficientSet) -> APoly:
    out = APoly.zero()
    for idx in c.indices():
        out = out + basis_poly(idx).scale(c.weights[idx])
    return out


def series_values(c: FourierCoefficientSet, points: Any) -> np.ndarray:
    """Float values of the series at an (N, 3) point array"""
    return reconstruct(c).evaluate_many(points)


def split_main_constant(c: FourierCoefficientSet) -> Tuple[FourierCoefficientSet, FourierCoefficientSet]:
    """(main part g with m <= n, hyperholomorphic constant h with m = n + 1)"""
    main = {idx: w for idx, w in c.weights.items() if not idx.is_constant}
    constant = {idx: w for idx, w in c.weights.items() if idx.is_constant}
    return (FourierCoefficientSet(c.radius, main, c.degree_max),
            FourierCoefficientSet(c.radius, constant, c.degree_max))


def derivative_series(c: FourierCoefficientSet) -> FourierCoefficientSet:
    """Term-by-term hypercomplex derivative; constants and degree 0 drop out"""
    weights = {}
    for idx, w in c.weights.items():
        if idx.is_constant or idx.n == 0:
            continue
        weights[idx.shifted(-1)] = w * (idx.n + idx.m + 1)
    return FourierCoefficientSet(c.radius, weights, max(c.degree_max - 1, 0))


def primitive_series(c: FourierCoefficientSet) -> FourierCoefficientSet:
    """The primitive orthogonal to all hyperholomorphic constants"""
    weights = {}
    for idx, w in c.weights.items():
        weights[idx.shifted(1)] = w / (idx.n + idx.m + 2)
    degree_max = c.degree_max + 1 if weights else c.degree_max
    return FourierCoefficientSet(c.radius, weights, degree_max)


def value_at_origin(c: FourierCoefficientSet) -> ReducedQuaternion:
    """(1/2) sqrt(3 / (pi r^3)) (a_0^0 - a_0^1 i - b_0^1 j)"""
    coefficients = c.coefficients
    a00 = coefficients.get(BasisIndex(0, "X", 0), 0.0)
    a01 = coefficients.get(BasisIndex(0, "X", 1), 0.0)
    b01 = coefficients.get(BasisIndex(0, "Y", 1), 0.0)
    factor = 0.5 * math.sqrt(3.0 / (math.pi * float(c.radius) ** 3))
    return ReducedQuaternion(factor * a00, -factor * a01, -factor * b01)


def value_at_origin_exact(c: FourierCoefficientSet) -> ReducedQuaternion:
    """Exact f(0) from the weights of the three constant elements"""
    w = c.weights
    half = Fraction(1, 2)
    return ReducedQuaternion(half * w.get(BasisIndex(0, "X", 0), Fraction(0)),
                             -half * w.get(BasisIndex(0, "X", 1), Fraction(0)),
                             -half * w.get(BasisIndex(0, "Y", 1), Fraction(0)))


def norm_sq_sum(c: FourierCoefficientSet) -> float:
    """Sum of squared coefficients (Parseval side of ||f||^2)"""
    return math.fsum(v * v for v in c.coefficients.values())


def coefficient_from_derivative(f: APoly, idx: BasisIndex, r: Any = 1) -> float:
    """Coefficient of idx recovered from the derivative F = (1/2) Dbar f

    a = ||e_n|| / (||e_{n-1}||^2 (n+m+1)) * <e_{n-1}, F - F(0)>
    """
    if idx.n < 2 or idx.is_constant:
        raise PreconditionError(f"{idx.label()}: relation needs n >= 2 and m <= n")
    derivative = hypercomplex_derivative(f)
    centred = derivative - APoly.constant(value_at(derivative, (0, 0, 0)).to_reduced())
    lower = idx.shifted(-1)
    projection = inner_product(basis_poly(lower), centred, r)
    norm_n = math.sqrt(basis_norm_sq(idx, r).to_float())
    norm_lower_sq = basis_norm_sq(lower, r).to_float()
    return norm_n / (norm_lower_sq * (idx.n + idx.m + 1)) * projection.to_float()


def _parse_term(term: Any, position: int) -> Tuple[BasisIndex, Fraction]:
    if not isinstance(term, Mapping):
        raise FunctionSpecError(f"term {position}: expected an object, got {term!r}")
    missing = [k for k in ("n", "family", "m", "coeff") if k not in term]
    if missing:
        raise FunctionSpecError(f"term {position}: missing field(s) {', '.join(missing)}")
    try:
        n, m = term["n"], term["m"]
        if isinstance(n, bool) or isinstance(m, bool) or not isinstance(n, int) or not isinstance(m, int):
            raise ValueError("n and m must be integers")
        idx = BasisIndex(n, term["family"], m)
        coeff = to_fraction(term["coeff"])
    except (InvalidIndexError, ValueError, TypeError, ZeroDivisionError) as e:
        raise FunctionSpecError(f"term {position} ({term!r}): {e}")
    return idx, coeff


def _parse_radius(data: Mapping) -> Fraction:
    try:
        radius = to_fraction(data.get("radius", 1))
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise FunctionSpecError(f"invalid radius {data.get('radius')!r}: {e}")
    if radius <= 0:
        raise FunctionSpecError(f"radius must be positive, got {data.get('radius')!r}")
    return radius


def function_from_spec(data: Any) -> Tuple[APoly, Fraction]:
    """Build f and its radius from function-spec JSON or raw polynomial JSON"""
    if isinstance(data, list):
        poly_data, radius = data, Fraction(1)
    elif isinstance(data, Mapping) and "components" in data:
        poly_data, radius = data["components"], _parse_radius(data)
    elif isinstance(data, Mapping) and "terms" in data:
        radius = _parse_radius(data)
        weights: Dict[BasisIndex, Fraction] = {}
        for position, term in enumerate(data["terms"]):
            idx, coeff = _parse_term(term, position)
            weights[idx] = weights.get(idx, Fraction(0)) + coeff
        return reconstruct(from_weights(weights, radius)), radius
    else:
        raise FunctionSpecError("function spec needs 'terms' or 'components'")

    try:
        f = APoly.from_json(poly_data)
    except (KeyError, ValueError, TypeError) as e:
        raise FunctionSpecError(f"invalid polynomial JSON: {e}")
    if not is_monogenic(f):
        raise NotMonogenicError("polynomial in the function spec is not monogenic")
    return f, radius


def load_function_spec(path: Union[str, Path]) -> Tuple[APoly, Fraction]:
    try:
        data = read_json(path)
    except ValueError as e:
        raise FunctionSpecError(f"{path}: not valid JSON ({e})")
    logger.info(f"Loaded function spec from {path}")
    return function_from_spec(data)


def _spec_number(value: Fraction) -> Union[float, str]:
    # JSON number when the float reads back to the same rational, fraction text otherwise
    as_float = float(value)
    return as_float if to_fraction(as_float) == value else str(value)


def function_spec_json(c: FourierCoefficientSet) -> Dict[str, Any]:
    """Function-spec form of a coefficient set"""
    return {
        "radius": _spec_number(c.radius),
        "terms": [dict(idx.to_json(), coeff=_spec_number(c.weights[idx])) for idx in c.indices()],
    }
