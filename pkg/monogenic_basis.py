"""
Solid spherical monogenics X_n^m and Y_n^m

Each element is the hypercomplex derivative (1/2) Dbar of a solid harmonic of
degree n + 1. Elements with m = n + 1 are hyperholomorphic constants.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from ball_integration import ExactBallScalar, inner_product
from config import CONFIG
from harmonic_basis import InvalidIndexError, SolidHarmonicIndex, solid_harmonic
from poly_algebra import APoly, hypercomplex_derivative, is_monogenic, poly_terms
from utils import fraction_to_json, to_fraction

logger = logging.getLogger(__name__)

FAMILIES = ("X", "Y")


class PreconditionError(ValueError):
    """Raised when an operation is applied outside its stated preconditions"""
    pass


@dataclass(frozen=True)
class BasisIndex:
    n: int
    family: str
    m: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidIndexError(f"family must be X or Y, got {self.family!r}")
        if self.n < 0:
            raise InvalidIndexError(f"degree n={self.n} must be non-negative")
        low = 0 if self.family == "X" else 1
        if not low <= self.m <= self.n + 1:
            raise InvalidIndexError(
                f"order m={self.m} outside {low}..{self.n + 1} for family {self.family}")
        if self.n > CONFIG["basis_degree_cap"]:
            raise InvalidIndexError(
                f"degree n={self.n} exceeds the basis degree cap {CONFIG['basis_degree_cap']}")

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (self.n, self.m, FAMILIES.index(self.family))

    @property
    def is_constant(self) -> bool:
        """True for the hyperholomorphic constants (m = n + 1)"""
        return self.m == self.n + 1

    @property
    def harmonic(self) -> SolidHarmonicIndex:
        return SolidHarmonicIndex(self.n + 1, "U" if self.family == "X" else "V", self.m)

    def shifted(self, dn: int) -> "BasisIndex":
        return BasisIndex(self.n + dn, self.family, self.m)

    def label(self) -> str:
        return f"{self.family}_{self.n}^{self.m}"

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "family": self.family, "m": self.m}


@dataclass(frozen=True)
class BasisElement:
    index: BasisIndex
    poly: APoly
    norm_sq: ExactBallScalar


def basis_indices(n: int) -> List[BasisIndex]:
    """The 2n+3 indices of degree n: X^0, X^1, Y^1, ..., X^{n+1}, Y^{n+1}"""
    indices = [BasisIndex(n, "X", 0)]
    for m in range(1, n + 2):
        indices.append(BasisIndex(n, "X", m))
        indices.append(BasisIndex(n, "Y", m))
    return indices


def basis_indices_upto(n_max: int) -> List[BasisIndex]:
    return [idx for n in range(n_max + 1) for idx in basis_indices(n)]


def hyperholomorphic_constants(n: int) -> List[BasisIndex]:
    return [BasisIndex(n, "X", n + 1), BasisIndex(n, "Y", n + 1)]


@lru_cache(maxsize=None)
def basis_poly(idx: BasisIndex) -> APoly:
    return hypercomplex_derivative(APoly(solid_harmonic(idx.harmonic)))


def basis_norm_sq(idx: BasisIndex, r: Any = 1) -> ExactBallScalar:
    """Closed form of the squared L2(B_r) norm, pi * rational * r^(2n+3)"""
    radius = to_fraction(r)
    if radius <= 0:
        raise PreconditionError(f"radius must be positive, got {r}")
    n, m = idx.n, idx.m
    if m == 0:
        coeff = Fraction(n + 1, 2 * n + 3)
    else:
        coeff = Fraction((n + 1) * math.factorial(n + 1 + m),
                         math.factorial(n + 1 - m) * 2 * (2 * n + 3))
    return ExactBallScalar(coeff, 1, 2 * n + 3, radius)


def build_basis_element(idx: BasisIndex, r: Any = 1) -> BasisElement:
    return BasisElement(index=idx, poly=basis_poly(idx), norm_sq=basis_norm_sq(idx, r))


def check_monogenic(idx: BasisIndex) -> bool:
    poly = basis_poly(idx)
    return is_monogenic(poly) and poly.is_homogeneous(idx.n)


def check_norm_closed_form(idx: BasisIndex, r: Any = 1) -> bool:
    """Exact quadrature of the element equals the closed form"""
    poly = basis_poly(idx)
    return inner_product(poly, poly, r) == basis_norm_sq(idx, r)


def check_derivative_relation(idx: BasisIndex) -> bool:
    """(1/2) Dbar of the element is (n+m+1) times its degree n-1 partner"""
    if idx.n < 1 or idx.m > idx.n:
        raise PreconditionError(f"{idx.label()} has no derivative partner (needs n >= 1, m <= n)")
    derivative = hypercomplex_derivative(basis_poly(idx))
    return derivative == basis_poly(idx.shifted(-1)).scale(idx.n + idx.m + 1)


def check_hyperholomorphic_constant(idx: BasisIndex) -> bool:
    """The derivative vanishes exactly when m = n + 1 (or n = 0, where every element is constant)"""
    vanishes = hypercomplex_derivative(basis_poly(idx)).is_zero()
    return vanishes == (idx.is_constant or idx.n == 0)


def primitive_of_basis(idx: BasisIndex) -> Tuple[BasisIndex, Fraction]:
    """Index one degree up and the factor 1/(n+m+2) whose multiple has derivative idx"""
    return idx.shifted(1), Fraction(1, idx.n + idx.m + 2)


def check_primitive(idx: BasisIndex) -> bool:
    up, factor = primitive_of_basis(idx)
    return hypercomplex_derivative(basis_poly(up).scale(factor)) == basis_poly(idx)


def pointwise_bound_constant(idx: BasisIndex) -> float:
    n, m = idx.n, idx.m
    return 0.5 * (n + 1) * math.sqrt(math.factorial(n + 1 + m) / math.factorial(n + 1 - m))


def check_pointwise_bound(idx: BasisIndex, samples: np.ndarray) -> float:
    """Minimal slack of |element(x)| <= C |x|^n over the samples"""
    pts = np.atleast_2d(np.asarray(samples, dtype=float))
    values = basis_poly(idx).modulus_many(pts)
    bound = pointwise_bound_constant(idx) * np.linalg.norm(pts, axis=1) ** idx.n
    return float(np.min(bound - values))


def coefficient_matrix(indices: Sequence[BasisIndex]) -> sympy.Matrix:
    """Rows of exact coefficients over a shared (component, exponent) column set"""
    tables = []
    columns = set()
    for idx in indices:
        table = {}
        for comp, p in enumerate(basis_poly(idx).components):
            for e, c in poly_terms(p):
                table[(comp, e)] = c
        tables.append(table)
        columns.update(table)
    ordered = sorted(columns)
    return sympy.Matrix([
        [sympy.Rational(t[col].numerator, t[col].denominator) if col in t else 0
         for col in ordered]
        for t in tables
    ])


def dimension_check(n: int) -> bool:
    """The 2n+3 elements of degree n are linearly independent over the rationals"""
    indices = basis_indices(n)
    rank = coefficient_matrix(indices).rank()
    logger.debug(f"degree {n}: {len(indices)} elements, rank {rank}")
    return len(indices) == 2 * n + 3 and rank == 2 * n + 3


def check_orthogonality(n_max: int, r: Any = 1,
                        indices: Optional[Iterable[BasisIndex]] = None) -> List[Tuple[BasisIndex, BasisIndex]]:
    """Pairs of distinct elements of degree <= n_max whose inner product is not exactly zero"""
    elements = list(indices) if indices is not None else basis_indices_upto(n_max)
    failures = []
    for a, idx_a in enumerate(elements):
        for idx_b in elements[a + 1:]:
            if not inner_product(basis_poly(idx_a), basis_poly(idx_b), r).is_zero():
                logger.warning(f"{idx_a.label()} and {idx_b.label()} are not orthogonal")
                failures.append((idx_a, idx_b))
    return failures


def basis_dump(idx: BasisIndex, r: Any = 1) -> Dict[str, Any]:
    norm_sq = basis_norm_sq(idx, r)
    dump = idx.to_json()
    dump.update({
        "components": basis_poly(idx).to_json(),
        "norm_sq_pi_rational": fraction_to_json(norm_sq.coefficient),
        "radius_power": norm_sq.r_power,
    })
    return dump
