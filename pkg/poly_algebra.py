"""
Exact trivariate polynomials over (x0, x1, x2) with A-valued and H-valued components.

Components are elements of the sparse sympy ring QQ[x0, x1, x2]; the
Cauchy-Riemann operator D, its conjugate, the Laplacian and the Riesz
residuals are all computed exactly on those coefficient tables.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import mpmath
import numpy as np
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, ring

from quaternion_core import UNIT_PRODUCTS, Quaternion, ReducedQuaternion
from utils import to_fraction

logger = logging.getLogger(__name__)

TRI_RING, X0, X1, X2 = ring("x0,x1,x2", QQ, lex)
GENERATORS = (X0, X1, X2)

# sparse table {(a, b, c): coefficient}, zero coefficients never stored
RealTriPoly = PolyElement
Exponent = Tuple[int, int, int]


def qq(value: Any):
    """Convert a rational-like value to an element of QQ"""
    f = to_fraction(value)
    return QQ(f.numerator, f.denominator)


def qq_to_float(value) -> float:
    return int(value.numerator) / int(value.denominator)


def poly_from_terms(terms: Mapping[Exponent, Any]) -> RealTriPoly:
    return TRI_RING.from_dict({tuple(e): qq(c) for e, c in terms.items()})


def poly_terms(p: RealTriPoly) -> List[Tuple[Exponent, Fraction]]:
    """Terms in lexicographic exponent order with Fraction coefficients"""
    return [(e, to_fraction(c)) for e, c in sorted(p.items())]


def degree(p: RealTriPoly) -> float:
    """Total degree, -inf for the zero polynomial"""
    if not p:
        return -math.inf
    return max(sum(e) for e in p.keys())


def is_homogeneous(p: RealTriPoly, n: Optional[int] = None) -> bool:
    degrees = {sum(e) for e in p.keys()}
    if not degrees:
        return True
    if len(degrees) > 1:
        return False
    return n is None or degrees == {n}


def homogeneous_parts(p: RealTriPoly) -> Dict[int, RealTriPoly]:
    parts: Dict[int, Dict[Exponent, Any]] = {}
    for e, c in p.items():
        parts.setdefault(sum(e), {})[e] = c
    return {d: TRI_RING.from_dict(terms) for d, terms in sorted(parts.items())}


def laplacian(p: RealTriPoly) -> RealTriPoly:
    out = TRI_RING.zero
    for gen in GENERATORS:
        out = out + p.diff(gen).diff(gen)
    return out


def reflect_x2(p: RealTriPoly) -> RealTriPoly:
    """p(x0, x1, -x2)"""
    return TRI_RING.from_dict({e: (-c if e[2] % 2 else c) for e, c in p.items()})


def translate_poly(p: RealTriPoly, shift: Sequence[Any]) -> RealTriPoly:
    """p(x + shift), computed exactly"""
    shifted = [gen + qq(s) for gen, s in zip(GENERATORS, shift)]
    top = [max((e[i] for e in p.keys()), default=0) for i in range(3)]
    powers = []
    for i in range(3):
        table = [TRI_RING.one]
        for _ in range(top[i]):
            table.append(table[-1] * shifted[i])
        powers.append(table)
    out = TRI_RING.zero
    for (a, b, c), coeff in p.items():
        out = out + powers[0][a] * powers[1][b] * powers[2][c] * coeff
    return out


def poly_to_json(p: RealTriPoly, component: int) -> Dict[str, Any]:
    return {
        "component": component,
        "terms": [
            {"e": list(e), "num": c.numerator, "den": c.denominator}
            for e, c in poly_terms(p)
        ],
    }


def poly_from_json(data: Mapping[str, Any]) -> Tuple[int, RealTriPoly]:
    terms = {}
    for term in data.get("terms", []):
        e = tuple(int(a) for a in term["e"])
        if len(e) != 3 or min(e) < 0:
            raise ValueError(f"invalid exponent triple {term['e']!r}")
        terms[e] = Fraction(int(term["num"]), int(term["den"]))
    return int(data["component"]), poly_from_terms(terms)


class _ComponentPolynomial:
    """Shared behaviour of APoly and HPoly: a tuple of RealTriPoly components"""

    @property
    def components(self) -> Tuple[RealTriPoly, ...]:
        raise NotImplementedError

    def is_zero(self) -> bool:
        return not any(self.components)

    def degree(self) -> float:
        return max(degree(p) for p in self.components)

    def is_homogeneous(self, n: Optional[int] = None) -> bool:
        degrees = {sum(e) for p in self.components for e in p.keys()}
        if not degrees:
            return True
        if len(degrees) > 1:
            return False
        return n is None or degrees == {n}

    def _map(self, fn):
        return type(self)(*(fn(p) for p in self.components))

    def __add__(self, other):
        return type(self)(*(p + q for p, q in zip(self.components, other.components)))

    def __sub__(self, other):
        return type(self)(*(p - q for p, q in zip(self.components, other.components)))

    def __neg__(self):
        return self._map(lambda p: -p)

    def scale(self, factor: Any):
        """Multiply by a real rational scalar"""
        value = qq(factor)
        return self._map(lambda p: p * value)

    @cached_property
    def _compiled(self) -> Tuple[np.ndarray, np.ndarray]:
        exps = sorted(set().union(*(p.keys() for p in self.components)))
        width = len(self.components)
        if not exps:
            return np.zeros((0, 3), dtype=int), np.zeros((0, width))
        index = {e: t for t, e in enumerate(exps)}
        coeffs = np.zeros((len(exps), width))
        for comp, p in enumerate(self.components):
            for e, c in p.items():
                coeffs[index[e], comp] = qq_to_float(c)
        return np.array(exps, dtype=int), coeffs

    def evaluate_many(self, points: Any) -> np.ndarray:
        """Evaluate on an (N, 3) array of points; returns (N, components) floats"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        exps, coeffs = self._compiled
        if exps.shape[0] == 0:
            return np.zeros((pts.shape[0], coeffs.shape[1]))
        monomials = np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)
        return monomials @ coeffs

    def modulus_many(self, points: Any) -> np.ndarray:
        return np.linalg.norm(self.evaluate_many(points), axis=1)

    def to_json(self) -> List[Dict[str, Any]]:
        return [poly_to_json(p, i) for i, p in enumerate(self.components)]


@dataclass(frozen=True)
class APoly(_ComponentPolynomial):
    """[f]_0 + [f]_1 i + [f]_2 j"""
    c0: RealTriPoly = field(default_factory=lambda: TRI_RING.zero)
    c1: RealTriPoly = field(default_factory=lambda: TRI_RING.zero)
    c2: RealTriPoly = field(default_factory=lambda: TRI_RING.zero)

    @property
    def components(self) -> Tuple[RealTriPoly, RealTriPoly, RealTriPoly]:
        return (self.c0, self.c1, self.c2)

    @classmethod
    def zero(cls) -> "APoly":
        return cls()

    @classmethod
    def constant(cls, value: ReducedQuaternion) -> "APoly":
        return cls(*(TRI_RING.ground_new(qq(v)) for v in value.components))

    @classmethod
    def from_json(cls, data: Sequence[Mapping[str, Any]]) -> "APoly":
        comps = [TRI_RING.zero] * 3
        for entry in data:
            index, p = poly_from_json(entry)
            if index not in (0, 1, 2):
                raise ValueError(f"component index {index} outside 0..2")
            comps[index] = p
        return cls(*comps)

    def homogeneous_parts(self) -> Dict[int, "APoly"]:
        parts: Dict[int, List[RealTriPoly]] = {}
        for i, p in enumerate(self.components):
            for d, piece in homogeneous_parts(p).items():
                parts.setdefault(d, [TRI_RING.zero] * 3)[i] = piece
        return {d: APoly(*comps) for d, comps in sorted(parts.items())}

    def translate(self, shift: Sequence[Any]) -> "APoly":
        return self._map(lambda p: translate_poly(p, shift))


@dataclass(frozen=True)
class HPoly(_ComponentPolynomial):
    """[f]_0 + [f]_1 i + [f]_2 j + [f]_3 k"""
    c0: RealTriPoly = field(default_factory=lambda: TRI_RING.zero)
    c1: RealTriPoly = field(default_factory=lambda: TRI_RING.zero)
    c2: RealTriPoly = field(default_factory=lambda: TRI_RING.zero)
    c3: RealTriPoly = field(default_factory=lambda: TRI_RING.zero)

    @property
    def components(self) -> Tuple[RealTriPoly, RealTriPoly, RealTriPoly, RealTriPoly]:
        return (self.c0, self.c1, self.c2, self.c3)

    def in_reduced_span(self) -> bool:
        return not self.c3

    def to_apoly(self) -> APoly:
        if self.c3:
            raise ValueError("k-component is nonzero; value is not A-valued")
        return APoly(self.c0, self.c1, self.c2)


def _apply_operator(f: _ComponentPolynomial, unit_signs: Tuple[int, int, int],
                    scale: Fraction = Fraction(1), right: bool = False) -> HPoly:
    """sum_a sign_a e_a d_a f (left) or sum_a d_a f sign_a e_a (right)"""
    out = [TRI_RING.zero] * 4
    for a, (gen, sign) in enumerate(zip(GENERATORS, unit_signs)):
        for b, comp in enumerate(f.components):
            if not comp:
                continue
            d = comp.diff(gen)
            if not d:
                continue
            prod_sign, c = UNIT_PRODUCTS[(b, a)] if right else UNIT_PRODUCTS[(a, b)]
            out[c] = out[c] + d * (sign * prod_sign)
    if scale != 1:
        factor = qq(scale)
        out = [p * factor for p in out]
    return HPoly(*out)


def apply_D(f: _ComponentPolynomial) -> HPoly:
    """D f = d_x0 f + i d_x1 f + j d_x2 f (left multiplication)"""
    return _apply_operator(f, (1, 1, 1))


def apply_D_right(f: _ComponentPolynomial) -> HPoly:
    """f D = d_x0 f + d_x1 f i + d_x2 f j"""
    return _apply_operator(f, (1, 1, 1), right=True)


def apply_Dbar(f: _ComponentPolynomial) -> HPoly:
    return _apply_operator(f, (1, -1, -1))


def apply_half_Dbar(f: _ComponentPolynomial) -> HPoly:
    """Hypercomplex derivative (1/2)(d_x0 - i d_x1 - j d_x2) f"""
    return _apply_operator(f, (1, -1, -1), scale=Fraction(1, 2))


def hypercomplex_derivative(f: APoly) -> APoly:
    """(1/2) Dbar f as an A-valued polynomial (always A-valued for A-valued f)"""
    return apply_half_Dbar(f).to_apoly()


def is_monogenic(f: APoly) -> bool:
    return apply_D(f).is_zero()


def riesz_residual(f: APoly) -> Tuple[RealTriPoly, RealTriPoly, RealTriPoly, RealTriPoly]:
    """(div residual, (0,1) mixed, (0,2) mixed, (1,2) curl) of the Riesz system

    The four entries are the 1, i, j, k parts of D f, derived here directly from
    the partial derivatives of the components.
    """
    d = [[p.diff(gen) for gen in GENERATORS] for p in f.components]  # d[comp][var]
    div = d[0][0] - d[1][1] - d[2][2]
    mixed_01 = d[0][1] + d[1][0]
    mixed_02 = d[0][2] + d[2][0]
    curl_12 = d[2][1] - d[1][2]
    return div, mixed_01, mixed_02, curl_12


def factorization_holds(f: APoly) -> bool:
    """Dbar(D f) equals the componentwise Laplacian of f"""
    expected = HPoly(*(laplacian(p) for p in f.components), TRI_RING.zero)
    return apply_Dbar(apply_D(f)) == expected


def kernel_agreement(samples: Iterable[APoly]) -> bool:
    """Left and right monogenicity agree on every sample"""
    return all(apply_D(f).is_zero() == apply_D_right(f).is_zero() for f in samples)


def evaluate(f: APoly, point: Sequence[Any], precision: Optional[int] = None) -> ReducedQuaternion:
    """Value of f at a point; double precision unless a digit count is given"""
    if precision is None:
        values = f.evaluate_many([point])[0]
        return ReducedQuaternion(*(float(v) for v in values))
    with mpmath.workdps(precision):
        x = [mpmath.mpf(str(v)) if isinstance(v, (int, float)) else
             mpmath.mpf(to_fraction(v).numerator) / to_fraction(v).denominator for v in point]
        out = []
        for p in f.components:
            total = mpmath.mpf(0)
            for (a, b, c), coeff in p.items():
                total += (mpmath.mpf(int(coeff.numerator)) / int(coeff.denominator)) \
                    * x[0] ** a * x[1] ** b * x[2] ** c
            out.append(total)
    return ReducedQuaternion(*out)


def value_at(f: _ComponentPolynomial, point: Sequence[Any]) -> Quaternion:
    """Exact value at a rational point (as a full quaternion)"""
    x = [qq(v) for v in point]
    values = [p(*x) if p else QQ(0) for p in f.components]
    values = [to_fraction(v) for v in values] + [Fraction(0)] * (4 - len(values))
    return Quaternion(*values)


def random_apoly(rng: np.random.Generator, degree_max: int, terms: int = 6) -> APoly:
    """Sparse APoly with small random rational coefficients, total degree <= degree_max"""
    comps = []
    for _ in range(3):
        table: Dict[Exponent, Fraction] = {}
        for _ in range(terms):
            a = int(rng.integers(0, degree_max + 1))
            b = int(rng.integers(0, degree_max - a + 1))
            c = int(rng.integers(0, degree_max - a - b + 1))
            table[(a, b, c)] = table.get((a, b, c), Fraction(0)) \
                + Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
        comps.append(poly_from_terms({e: v for e, v in table.items() if v != 0}))
    return APoly(*comps)
