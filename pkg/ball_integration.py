"""
Integration over balls B_r and maximum modulus search

Exact path: every monomial integral over B_r is a rational multiple of
pi * r^(a+b+c+3), so the L2 inner product of two polynomials is an exact
ExactBallScalar. Numeric path: quasi-uniform golden-spiral sampling of the
sphere followed by Nelder-Mead refinement around the best candidates.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from config import CONFIG
from poly_algebra import APoly, TRI_RING
from utils import to_fraction

logger = logging.getLogger(__name__)

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


class NonFiniteEvaluationError(ValueError):
    """Raised when a sampled modulus is nan or infinite"""
    pass


@dataclass(frozen=True)
class ExactBallScalar:
    """coefficient * pi^pi_power * radius^r_power

    Integrals of homogeneous integrands keep the radius power symbolic; mixed
    degrees are folded into the coefficient with r_power = 0.
    """
    coefficient: Fraction
    pi_power: int = 1
    r_power: int = 0
    radius: Fraction = Fraction(1)

    @classmethod
    def zero(cls, radius: Any = 1) -> "ExactBallScalar":
        return cls(Fraction(0), 1, 0, to_fraction(radius))

    def is_zero(self) -> bool:
        return self.coefficient == 0

    def folded(self) -> "ExactBallScalar":
        """Same value with the radius power moved into the coefficient"""
        return ExactBallScalar(self.coefficient * self.radius ** self.r_power,
                               self.pi_power, 0, self.radius)

    def __add__(self, other: "ExactBallScalar") -> "ExactBallScalar":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.radius != other.radius or self.pi_power != other.pi_power:
            raise ValueError(f"cannot add ball scalars {self} and {other}")
        if self.r_power == other.r_power:
            return ExactBallScalar(self.coefficient + other.coefficient,
                                   self.pi_power, self.r_power, self.radius)
        a, b = self.folded(), other.folded()
        return ExactBallScalar(a.coefficient + b.coefficient, self.pi_power, 0, self.radius)

    def __neg__(self) -> "ExactBallScalar":
        return ExactBallScalar(-self.coefficient, self.pi_power, self.r_power, self.radius)

    def __sub__(self, other: "ExactBallScalar") -> "ExactBallScalar":
        return self + (-other)

    def scale(self, factor: Any) -> "ExactBallScalar":
        return ExactBallScalar(self.coefficient * to_fraction(factor),
                               self.pi_power, self.r_power, self.radius)

    def ratio(self, other: "ExactBallScalar") -> Fraction:
        """Exact quotient of two values sharing the pi power"""
        if self.pi_power != other.pi_power or self.radius != other.radius:
            raise ValueError("ratio needs matching pi power and radius")
        return self.folded().coefficient / other.folded().coefficient

    def rational_value(self) -> Fraction:
        """Value divided by pi^pi_power"""
        return self.folded().coefficient

    def to_float(self) -> float:
        return float(self.folded().coefficient) * math.pi ** self.pi_power

    def to_json(self) -> Dict[str, int]:
        return {
            "num": self.coefficient.numerator,
            "den": self.coefficient.denominator,
            "pi_power": self.pi_power,
            "r_power": self.r_power,
        }

    def __str__(self) -> str:
        pi = "pi" if self.pi_power else ""
        r = f"*r^{self.r_power}" if self.r_power else ""
        return f"{self.coefficient}*{pi}{r}"


def _half_integer_gamma_ratio(p: int) -> Fraction:
    """Gamma(p + 1/2) / sqrt(pi) = (2p)! / (4^p p!)"""
    return Fraction(math.factorial(2 * p), 4 ** p * math.factorial(p))


def monomial_ball_integral(a: int, b: int, c: int, r: Any = 1) -> ExactBallScalar:
    """Integral of x0^a x1^b x2^c over B_r"""
    if min(a, b, c) < 0:
        raise ValueError(f"exponents must be non-negative, got {(a, b, c)}")
    radius = to_fraction(r)
    if a % 2 or b % 2 or c % 2:
        return ExactBallScalar.zero(radius)
    halves = (a // 2, b // 2, c // 2)
    total = sum(halves)
    n = a + b + c
    sphere = Fraction(2)
    for p in halves:
        sphere *= _half_integer_gamma_ratio(p)
    sphere /= _half_integer_gamma_ratio(total + 1)
    return ExactBallScalar(sphere / (n + 3), 1, n + 3, radius)


def scalar_product_poly(f: APoly, g: APoly):
    """Sc(conj(f) g) for reduced-quaternion valued f, g"""
    out = TRI_RING.zero
    for p, q in zip(f.components, g.components):
        if p and q:
            out = out + p * q
    return out


def integrate_poly(p, r: Any = 1) -> ExactBallScalar:
    radius = to_fraction(r)
    by_power: Dict[int, Fraction] = {}
    for (a, b, c), coeff in p.items():
        term = monomial_ball_integral(a, b, c, radius)
        if term.is_zero():
            continue
        by_power[term.r_power] = by_power.get(term.r_power, Fraction(0)) \
            + term.coefficient * to_fraction(coeff)
    by_power = {k: v for k, v in by_power.items() if v != 0}
    if not by_power:
        return ExactBallScalar.zero(radius)
    if len(by_power) == 1:
        (power, coeff), = by_power.items()
        return ExactBallScalar(coeff, 1, power, radius)
    folded = sum((v * radius ** k for k, v in by_power.items()), Fraction(0))
    return ExactBallScalar(folded, 1, 0, radius)


def inner_product(f: APoly, g: APoly, r: Any = 1) -> ExactBallScalar:
    """<f, g> = integral over B_r of Sc(conj(f) g)"""
    return integrate_poly(scalar_product_poly(f, g), r)


def quadrature_inner_product(f: APoly, g: APoly, r: float = 1.0, order: int = 24) -> float:
    """Gauss-Legendre tensor rule in spherical coordinates, float oracle for inner_product"""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    rho = 0.5 * r * (nodes + 1.0)
    w_rho = 0.5 * r * weights * rho ** 2
    cos_t, w_t = nodes, weights
    sin_t = np.sqrt(1.0 - cos_t ** 2)
    n_phi = 2 * order
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    w_phi = np.full(n_phi, 2.0 * np.pi / n_phi)

    R, C, P = np.meshgrid(rho, np.arange(order), np.arange(n_phi), indexing="ij")
    ct, st, ph = cos_t[C], sin_t[C], phi[P]
    pts = np.stack([R * ct, R * st * np.cos(ph), R * st * np.sin(ph)], axis=-1).reshape(-1, 3)
    weight = (w_rho[:, None, None] * w_t[None, :, None] * w_phi[None, None, :]).reshape(-1)

    values = np.sum(f.evaluate_many(pts) * g.evaluate_many(pts), axis=1)
    return float(np.dot(weight, values))


@dataclass(frozen=True)
class SphereSampling:
    points: int = CONFIG["sphere_points"]
    rounds: int = CONFIG["refinement_rounds"]
    shrink: float = CONFIG["refinement_shrink"]
    candidates: int = CONFIG["refinement_candidates"]
    steps: int = CONFIG["refinement_steps"]
    seed: int = CONFIG["seed"]
    full_ball: bool = False


@dataclass(frozen=True)
class SearchResult:
    sampled: float
    refined: float
    point: np.ndarray = field(compare=False)

    @property
    def value(self) -> float:
        return self.refined


def golden_sphere_points(n: int, r: float = 1.0, center: Optional[Sequence[float]] = None) -> np.ndarray:
    """Golden-section spiral on the sphere |x - center| = r, shape (n, 3)"""
    k = np.arange(n)
    x0 = 1.0 - (2.0 * k + 1.0) / n
    ring_radius = np.sqrt(1.0 - x0 ** 2)
    phi = k * GOLDEN_ANGLE
    pts = r * np.stack([x0, ring_radius * np.cos(phi), ring_radius * np.sin(phi)], axis=1)
    if center is not None:
        pts = pts + np.asarray(center, dtype=float)
    return pts


def ball_points(n: int, r: float, seed: int, center: Optional[Sequence[float]] = None) -> np.ndarray:
    """Golden-spiral directions with seeded radii r * u^(1/3), plus the center"""
    rng = np.random.default_rng(seed)
    dirs = golden_sphere_points(n, 1.0)
    radii = r * rng.random(n) ** (1.0 / 3.0)
    pts = np.vstack([np.zeros((1, 3)), dirs * radii[:, None]])
    if center is not None:
        pts = pts + np.asarray(center, dtype=float)
    return pts


def _local_refine(func_many: Callable[[np.ndarray], np.ndarray], start: np.ndarray,
                  center: np.ndarray, radius: float, delta: float,
                  sampling: SphereSampling, on_sphere: bool, maximize: bool) -> Tuple[float, np.ndarray]:
    """Nelder-Mead restarts from start, simplex shrunk by sampling.shrink each round

    Coordinates are x = (point - center) / radius. On the sphere they are
    projected radially onto |x| = 1, in the ball clipped to |x| <= 1.
    """
    sign = -1.0 if maximize else 1.0

    def to_point(v: np.ndarray) -> np.ndarray:
        length = float(np.linalg.norm(v))
        if on_sphere or length > 1.0:
            v = v / max(length, 1e-300)
        return center + radius * v

    def objective(v: np.ndarray) -> float:
        value = float(func_many(to_point(v)[None, :])[0])
        if not math.isfinite(value):
            raise NonFiniteEvaluationError("non-finite value during refinement")
        return sign * value

    x = (np.asarray(start, dtype=float) - center) / radius
    best_x, best_obj = x, objective(x)
    for _ in range(sampling.rounds):
        simplex = np.vstack([best_x, best_x + delta * np.eye(3)])
        res = optimize.minimize(objective, best_x, method="Nelder-Mead",
                                options={"initial_simplex": simplex, "maxiter": 40 * sampling.steps,
                                         "xatol": 1e-12, "fatol": 1e-15})
        if res.fun < best_obj:
            best_x, best_obj = np.asarray(res.x, dtype=float), float(res.fun)
        delta *= sampling.shrink
    return sign * best_obj, to_point(best_x)


def search(func_many: Callable[[np.ndarray], np.ndarray], radius: float,
           sampling: SphereSampling = SphereSampling(), center: Optional[Sequence[float]] = None,
           maximize: bool = True, full_ball: Optional[bool] = None) -> SearchResult:
    """Extremum of a vectorised function over the sphere (or ball) of the given radius"""
    full_ball = sampling.full_ball if full_ball is None else full_ball
    c = np.zeros(3) if center is None else np.asarray(center, dtype=float)
    if full_ball:
        pts = ball_points(sampling.points, radius, sampling.seed, c)
    else:
        pts = golden_sphere_points(sampling.points, radius, c)
    values = func_many(pts)
    if not np.all(np.isfinite(values)):
        raise NonFiniteEvaluationError(f"non-finite sample among {len(pts)} points")
    order = np.argsort(-values if maximize else values, kind="stable")
    sampled = float(values[order[0]])
    delta = math.sqrt(4.0 * math.pi / sampling.points)

    best_value, best_point = sampled, pts[order[0]]
    for k in order[:sampling.candidates]:
        if not full_ball and np.allclose(pts[k], c):
            continue
        value, point = _local_refine(func_many, pts[k], c, radius, delta, sampling,
                                     on_sphere=not full_ball, maximize=maximize)
        if (value > best_value) if maximize else (value < best_value):
            best_value, best_point = value, point
    return SearchResult(sampled=sampled, refined=best_value, point=best_point)


def max_modulus(f: APoly, r: float, sampling: SphereSampling = SphereSampling()) -> SearchResult:
    """M(f, r) = max over |x| <= r of |f(x)|

    Components of a monogenic f are harmonic, so |f|^2 is subharmonic and the
    maximum sits on the sphere; the full-ball mode samples the interior too.
    sampled is the grid maximum, refined the Nelder-Mead value (>= sampled).
    """
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if f.is_zero():
        return SearchResult(0.0, 0.0, np.zeros(3))
    return search(f.modulus_many, float(r), sampling)
