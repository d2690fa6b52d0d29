"""
Legendre polynomials and the solid spherical harmonics built from them

Associated Legendre functions are taken without the Condon-Shortley phase:
P_l^m(t) = (1 - t^2)^(m/2) d^m P_l / dt^m.
The solid harmonic of degree l and order m is
    [d^m P_l](x0 / r) * r^(l - m) * Re or Im (x1 + i x2)^m
where the residual powers of r are even and are expanded as powers of
x0^2 + x1^2 + x2^2, so every harmonic is an exact polynomial.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, ring

from poly_algebra import TRI_RING, X0, X1, X2, RealTriPoly, laplacian, reflect_x2
from utils import to_fraction

logger = logging.getLogger(__name__)

LEGENDRE_RING, T = ring("t", QQ, lex)

KINDS = ("U", "V")


class InvalidIndexError(ValueError):
    """Raised for degree/order combinations outside the harmonic or monogenic systems"""
    pass


@dataclass(frozen=True, order=True)
class SolidHarmonicIndex:
    l: int
    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidIndexError(f"kind must be U or V, got {self.kind!r}")
        if self.l < 0:
            raise InvalidIndexError(f"degree l={self.l} must be non-negative")
        if not 0 <= self.m <= self.l:
            raise InvalidIndexError(f"order m={self.m} outside 0..{self.l}")
        if self.kind == "V" and self.m == 0:
            raise InvalidIndexError("(V, m=0) is not a harmonic of the system")


def solid_harmonic_indices(l: int) -> List[SolidHarmonicIndex]:
    """The 2l+1 indices of degree l: U^0, U^1, V^1, ..., U^l, V^l"""
    indices = [SolidHarmonicIndex(l, "U", 0)]
    for m in range(1, l + 1):
        indices.append(SolidHarmonicIndex(l, "U", m))
        indices.append(SolidHarmonicIndex(l, "V", m))
    return indices


@lru_cache(maxsize=None)
def legendre(n: int) -> PolyElement:
    """P_n by the Bonnet recurrence (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}"""
    if n < 0:
        raise InvalidIndexError(f"Legendre degree must be non-negative, got {n}")
    if n == 0:
        return LEGENDRE_RING.one
    p_prev, p = LEGENDRE_RING.one, T
    for k in range(1, n):
        p_prev, p = p, (T * p * (2 * k + 1) - p_prev * k) * QQ(1, k + 1)
    return p


def legendre_value(n: int, t) -> Fraction:
    """Exact value of P_n at a rational point"""
    return to_fraction(legendre(n)(QQ(to_fraction(t).numerator, to_fraction(t).denominator)))


@lru_cache(maxsize=None)
def associated_legendre_derivative(l: int, m: int) -> PolyElement:
    """d^m P_l / dt^m (the polynomial factor of P_l^m)"""
    if not 0 <= m <= l:
        raise InvalidIndexError(f"order m={m} outside 0..{l}")
    p = legendre(l)
    for _ in range(m):
        p = p.diff(T)
    return p


def _complex_power_part(m: int, imaginary: bool) -> RealTriPoly:
    """Re or Im of (x1 + i x2)^m as a polynomial in x1, x2"""
    terms = {}
    for s in range(m + 1):
        if (s % 2 == 1) != imaginary:
            continue
        sign = -1 if (s // 2) % 2 else 1
        terms[(0, m - s, s)] = QQ(sign * comb(m, s))
    return TRI_RING.from_dict(terms)


@lru_cache(maxsize=None)
def solid_harmonic(idx: SolidHarmonicIndex) -> RealTriPoly:
    """Homogeneous harmonic polynomial r^l P_l^m(cos theta) cos(m phi) (U) or sin(m phi) (V)"""
    l, m = idx.l, idx.m
    r_sq = X0 ** 2 + X1 ** 2 + X2 ** 2
    radial = TRI_RING.zero
    for (k,), coeff in associated_legendre_derivative(l, m).items():
        # parity of d^m P_l leaves l - m - k even
        radial = radial + X0 ** k * r_sq ** ((l - m - k) // 2) * coeff
    angular = _complex_power_part(m, imaginary=(idx.kind == "V"))
    harmonic = radial * angular
    logger.debug(f"Built solid harmonic {idx} with {len(harmonic)} terms")
    return harmonic


def check_harmonicity(idx: SolidHarmonicIndex) -> bool:
    return not laplacian(solid_harmonic(idx))


def check_homogeneity(idx: SolidHarmonicIndex) -> bool:
    """Every stored exponent triple has total degree l"""
    return all(sum(e) == idx.l for e in solid_harmonic(idx).keys())


def check_parity(idx: SolidHarmonicIndex) -> bool:
    """x2 -> -x2 fixes U-harmonics and negates V-harmonics"""
    p = solid_harmonic(idx)
    expected = p if idx.kind == "U" else -p
    return reflect_x2(p) == expected
