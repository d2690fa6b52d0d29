"""
Real quaternions and reduced quaternions (span{1, i, j})
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple, Union

import numpy as np

Real = Union[int, Fraction, float]

# (left unit, right unit) -> (sign, resulting unit); units 0=1, 1=i, 2=j, 3=k
UNIT_PRODUCTS: Dict[Tuple[int, int], Tuple[int, int]] = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}

UNIT_NAMES = ("", "i", "j", "k")


class QuaternionError(ValueError):
    """Raised when a value cannot be represented in the requested algebra"""
    pass


@dataclass(frozen=True)
class Quaternion:
    """z0 + z1 i + z2 j + z3 k"""
    z0: Real = 0
    z1: Real = 0
    z2: Real = 0
    z3: Real = 0

    @property
    def components(self) -> Tuple[Real, Real, Real, Real]:
        return (self.z0, self.z1, self.z2, self.z3)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        other = as_quaternion(other)
        return Quaternion(*(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return self + (-as_quaternion(other))

    def __neg__(self) -> "Quaternion":
        return Quaternion(*(-a for a in self.components))

    def __mul__(self, other):
        if isinstance(other, (Quaternion, ReducedQuaternion)):
            return quat_mul(self, other)
        return Quaternion(*(a * other for a in self.components))

    def __rmul__(self, scalar):
        return Quaternion(*(scalar * a for a in self.components))

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.z0, -self.z1, -self.z2, -self.z3)

    def norm_sq(self) -> Real:
        return sum(a * a for a in self.components)

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def inverse(self) -> "Quaternion":
        n2 = self.norm_sq()
        if n2 == 0:
            raise QuaternionError("zero quaternion has no inverse")
        if isinstance(n2, float):
            return Quaternion(*(a / n2 for a in self.conjugate().components))
        return Quaternion(*(Fraction(a) / n2 for a in self.conjugate().components))

    @property
    def scalar(self) -> Real:
        return self.z0

    @property
    def vector(self) -> "Quaternion":
        return Quaternion(0, self.z1, self.z2, self.z3)

    def to_reduced(self) -> "ReducedQuaternion":
        if self.z3 != 0:
            raise QuaternionError(f"k-component {self.z3} is nonzero; value leaves span{{1,i,j}}")
        return ReducedQuaternion(self.z0, self.z1, self.z2)

    def as_array(self) -> np.ndarray:
        return np.array([float(a) for a in self.components])

    def __str__(self) -> str:
        return _format(self.components)


@dataclass(frozen=True)
class ReducedQuaternion:
    """x0 + x1 i + x2 j, identified with the point (x0, x1, x2) of R^3"""
    x0: Real = 0
    x1: Real = 0
    x2: Real = 0

    @property
    def components(self) -> Tuple[Real, Real, Real]:
        return (self.x0, self.x1, self.x2)

    def to_quaternion(self) -> Quaternion:
        return Quaternion(self.x0, self.x1, self.x2, 0)

    def __add__(self, other: "ReducedQuaternion") -> "ReducedQuaternion":
        return ReducedQuaternion(*(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "ReducedQuaternion") -> "ReducedQuaternion":
        return ReducedQuaternion(*(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "ReducedQuaternion":
        return ReducedQuaternion(*(-a for a in self.components))

    def __mul__(self, other):
        # span{1, i, j} is not closed under the product, so results live in H
        if isinstance(other, (Quaternion, ReducedQuaternion)):
            return quat_mul(self, other)
        return ReducedQuaternion(*(a * other for a in self.components))

    def __rmul__(self, scalar):
        return ReducedQuaternion(*(scalar * a for a in self.components))

    def conjugate(self) -> "ReducedQuaternion":
        return conjugate(self)

    def norm_sq(self) -> Real:
        return sum(a * a for a in self.components)

    def norm(self) -> float:
        return norm(self)

    def as_array(self) -> np.ndarray:
        return np.array([float(a) for a in self.components])

    def __str__(self) -> str:
        return _format(self.components)


def as_quaternion(value) -> Quaternion:
    """Embed a ReducedQuaternion or a real number into H"""
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, ReducedQuaternion):
        return value.to_quaternion()
    if isinstance(value, (int, float, Fraction)):
        return Quaternion(value, 0, 0, 0)
    raise QuaternionError(f"cannot interpret {value!r} as a quaternion")


def quat_mul(p, q) -> Quaternion:
    """Hamilton product by expansion over the sixteen unit products"""
    p, q = as_quaternion(p), as_quaternion(q)
    out = [0, 0, 0, 0]
    for a, pa in enumerate(p.components):
        for b, qb in enumerate(q.components):
            sign, c = UNIT_PRODUCTS[(a, b)]
            out[c] += sign * pa * qb
    return Quaternion(*out)


def conjugate(x):
    if isinstance(x, Quaternion):
        return x.conjugate()
    return ReducedQuaternion(x.x0, -x.x1, -x.x2)


def norm(x) -> float:
    """Euclidean norm; coincides with sqrt(x conj(x))"""
    return math.sqrt(sum(a * a for a in x.components))


def scalar_vector_parts(x):
    """Return (Sc(x), Vec(x)); works for reduced and full quaternions"""
    if isinstance(x, Quaternion):
        return x.scalar, x.vector
    return x.x0, ReducedQuaternion(0, x.x1, x.x2)


def quat_mul_arrays(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorised Hamilton product of (..., 4) float arrays"""
    out = np.zeros(np.broadcast_shapes(p.shape, q.shape), dtype=float)
    for (a, b), (sign, c) in UNIT_PRODUCTS.items():
        out[..., c] += sign * p[..., a] * q[..., b]
    return out


def _format(components) -> str:
    parts = []
    for value, unit in zip(components, UNIT_NAMES):
        if value != 0:
            parts.append(f"{value}{unit}")
    return " + ".join(parts) if parts else "0"
