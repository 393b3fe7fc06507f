"""Quaternion arithmetic and the slice decomposition ``q = x + yI``.

Scalar values are :class:`Quaternion` instances.  Hot loops elsewhere in the
package work on ``numpy`` arrays whose last axis holds the ``[w, x, y, z]``
components; the ``*_array`` helpers below are the vectorised counterparts of
the scalar operations and broadcast over all leading axes.

Example
-------
>>> from src.algebra.quat import E1, E2, qmul
>>> qmul(E1, E2)
Quaternion(w=0.0, x=0.0, y=0.0, z=1.0)
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

FloatArray = NDArray[np.float64]

UNIT_TOLERANCE = 1e-12


class DomainError(ValueError):
    """Raised when an operation is applied outside its mathematical domain."""


@dataclass(frozen=True)
class Quaternion:
    """Element of the quaternion field with basis ``{1, e1, e2, e3}``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, values: ArrayLike) -> Quaternion:
        arr = np.asarray(values, dtype=float)
        if arr.shape != (4,):
            raise ValueError(f"Quaternion expects 4 components, got shape {arr.shape}")
        return cls(float(arr[0]), float(arr[1]), float(arr[2]), float(arr[3]))

    @classmethod
    def real(cls, value: float) -> Quaternion:
        return cls(float(value), 0.0, 0.0, 0.0)

    def as_array(self) -> FloatArray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def to_list(self) -> list[float]:
        """Serialise as ``[w, x, y, z]``."""
        return [self.w, self.x, self.y, self.z]

    @property
    def scalar(self) -> float:
        return self.w

    @property
    def vector(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z)

    def __abs__(self) -> float:
        return self.norm()

    def __add__(self, other: object) -> Quaternion:
        if isinstance(other, Quaternion):
            return Quaternion(
                self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z
            )
        if isinstance(other, (int, float)):
            return Quaternion(self.w + other, self.x, self.y, self.z)
        return NotImplemented

    def __radd__(self, other: object) -> Quaternion:
        return self.__add__(other)

    def __sub__(self, other: object) -> Quaternion:
        if isinstance(other, Quaternion):
            return Quaternion(
                self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z
            )
        if isinstance(other, (int, float)):
            return Quaternion(self.w - other, self.x, self.y, self.z)
        return NotImplemented

    def __rsub__(self, other: object) -> Quaternion:
        if isinstance(other, (int, float)):
            return Quaternion(other - self.w, -self.x, -self.y, -self.z)
        return NotImplemented

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: object) -> Quaternion:
        if isinstance(other, Quaternion):
            return qmul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other: object) -> Quaternion:
        # Reals are central, so left and right scaling agree.
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other: object) -> Quaternion:
        if isinstance(other, (int, float)):
            if other == 0:
                raise DomainError("Division of a quaternion by zero")
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return NotImplemented


ZERO = Quaternion()
ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
E1 = Quaternion(0.0, 1.0, 0.0, 0.0)
E2 = Quaternion(0.0, 0.0, 1.0, 0.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class UnitImaginary:
    """An imaginary unit ``I`` in the sphere ``S``; ``I**2 == -1``."""

    direction: tuple[float, float, float]

    def __post_init__(self) -> None:
        if len(self.direction) != 3:
            raise ValueError("direction must have exactly three components")
        length = math.sqrt(sum(float(c) * float(c) for c in self.direction))
        if abs(length - 1.0) > UNIT_TOLERANCE * 1e3:
            raise DomainError(f"direction must be a unit vector, got length {length:.6g}")
        object.__setattr__(self, "direction", tuple(float(c) / length for c in self.direction))

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> UnitImaginary:
        """Normalise an arbitrary non-zero 3-vector into an imaginary unit."""
        length = math.sqrt(sum(float(c) * float(c) for c in vector))
        if length == 0.0:
            raise DomainError("Cannot build an imaginary unit from the zero vector")
        x, y, z = (float(c) / length for c in vector)
        return cls((x, y, z))

    def as_quaternion(self) -> Quaternion:
        x, y, z = self.direction
        return Quaternion(0.0, x, y, z)

    def as_array(self) -> FloatArray:
        return self.as_quaternion().as_array()


@dataclass(frozen=True)
class SlicePoint:
    """The coordinates ``(x, y, I)`` of ``q = x + yI`` with ``y >= 0``."""

    xcoord: float
    ycoord: float
    unit: UnitImaginary

    def __post_init__(self) -> None:
        if self.ycoord < 0:
            raise DomainError("ycoord must be non-negative")

    def reassemble(self) -> Quaternion:
        ux, uy, uz = self.unit.direction
        y = self.ycoord
        return Quaternion(self.xcoord, y * ux, y * uy, y * uz)


E1_UNIT = UnitImaginary((1.0, 0.0, 0.0))


# ----------------------------------------------------------------------
# Scalar operations
# ----------------------------------------------------------------------
def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Return the Hamilton product ``p q`` (``e1 e2 = e3``)."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def qinv(q: Quaternion) -> Quaternion:
    """Return ``q**-1 = conj(q) / |q|**2``."""
    norm_sq = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z
    if norm_sq == 0.0:
        raise DomainError("The zero quaternion has no inverse")
    return Quaternion(q.w / norm_sq, -q.x / norm_sq, -q.y / norm_sq, -q.z / norm_sq)


def slice_decompose(q: Quaternion) -> SlicePoint:
    """Split ``q`` as ``x + yI``; real quaternions get ``I = e1``."""
    y = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    if y == 0.0:
        return SlicePoint(xcoord=q.w, ycoord=0.0, unit=E1_UNIT)
    unit = UnitImaginary((q.x / y, q.y / y, q.z / y))
    return SlicePoint(xcoord=q.w, ycoord=y, unit=unit)


def imaginary_from_angles(theta1: float, theta2: float) -> UnitImaginary:
    """Imaginary unit ``e1 cos t1 + e2 sin t1 cos t2 + e3 sin t1 sin t2``."""
    for name, angle in (("theta1", theta1), ("theta2", theta2)):
        if not 0.0 <= angle <= math.pi:
            raise DomainError(f"{name} must lie in [0, pi], got {angle!r}")
    s1 = math.sin(theta1)
    return UnitImaginary((math.cos(theta1), s1 * math.cos(theta2), s1 * math.sin(theta2)))


def orthonormal_frame(unit: UnitImaginary) -> tuple[UnitImaginary, UnitImaginary]:
    """Return ``(J, K)`` with ``J`` orthogonal to ``I`` and ``K = I J``."""
    ix, iy, iz = unit.direction
    # Cross with the basis axis least aligned with I.
    axes = np.eye(3)
    pivot = axes[int(np.argmin(np.abs([ix, iy, iz])))]
    j_vec = np.cross([ix, iy, iz], pivot)
    j_unit = UnitImaginary.from_vector(j_vec.tolist())
    k = qmul(unit.as_quaternion(), j_unit.as_quaternion())
    return j_unit, UnitImaginary((k.x, k.y, k.z))


# ----------------------------------------------------------------------
# Vectorised kernels on [..., 4] arrays
# ----------------------------------------------------------------------
def as_components(values: Quaternion | ArrayLike) -> FloatArray:
    """Coerce a quaternion or an array-like of quaternions to a ``[..., 4]`` array."""
    if isinstance(values, Quaternion):
        return values.as_array()
    arr = np.asarray(values, dtype=float)
    if arr.shape[-1:] != (4,):
        raise ValueError(f"Quaternion arrays need a trailing axis of length 4, got {arr.shape}")
    return arr


def hamilton(p: FloatArray, q: FloatArray) -> FloatArray:
    """Broadcasting Hamilton product of two ``[..., 4]`` arrays."""
    pw, px, py, pz = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    qw, qx, qy, qz = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        (
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ),
        axis=-1,
    )


def conj_array(q: FloatArray) -> FloatArray:
    out = np.array(q, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def norm_array(q: FloatArray) -> FloatArray:
    return np.sqrt(np.sum(q * q, axis=-1))


def inv_array(q: FloatArray) -> FloatArray:
    """Element-wise inverse; raises :class:`DomainError` on any zero entry."""
    norm_sq = np.sum(q * q, axis=-1)
    if np.any(norm_sq == 0.0):
        raise DomainError("The zero quaternion has no inverse")
    return conj_array(q) / norm_sq[..., None]


def conjugate_by(q: FloatArray, rotor: FloatArray) -> FloatArray:
    """Return ``rotor**-1 q rotor``, the twist of ``q`` inside its sphere ``[q]``."""
    return hamilton(inv_array(rotor), hamilton(q, rotor))


def quaternions_to_array(values: Iterable[Quaternion]) -> FloatArray:
    rows = [value.as_array() for value in values]
    if not rows:
        return np.zeros((0, 4), dtype=float)
    return np.stack(rows)


def slice_powers(q: Quaternion, order: int) -> FloatArray:
    """Return ``[q**0, ..., q**order]`` as an ``(order + 1, 4)`` array.

    Powers stay inside the slice of ``q``, so they are computed from the
    complex powers of ``x + iy`` and lifted back with the unit ``I``.
    """
    point = slice_decompose(q)
    n = np.arange(order + 1)
    z_powers = complex(point.xcoord, point.ycoord) ** n
    out = np.zeros((order + 1, 4), dtype=float)
    out[:, 0] = z_powers.real
    out[:, 1:] = np.outer(z_powers.imag, point.unit.direction)
    return out


__all__ = [
    "DomainError",
    "E1",
    "E1_UNIT",
    "E2",
    "E3",
    "ONE",
    "Quaternion",
    "SlicePoint",
    "UnitImaginary",
    "ZERO",
    "as_components",
    "conj_array",
    "conjugate_by",
    "hamilton",
    "imaginary_from_angles",
    "inv_array",
    "norm_array",
    "orthonormal_frame",
    "qinv",
    "qmul",
    "quaternions_to_array",
    "slice_decompose",
    "slice_powers",
]
