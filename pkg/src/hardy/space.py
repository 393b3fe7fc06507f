"""The slice Hardy space on the unit ball.

The inner product ``<f, g> = (1/2pi) int conj(g) f dt`` over any boundary circle
``e^{It}`` reduces coefficientwise to ``sum_n conj(b_n) a_n``; the quadrature routines
below integrate the boundary values directly and serve as an independent oracle.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from src.algebra.quat import (
    DomainError,
    FloatArray,
    Quaternion,
    UnitImaginary,
    as_components,
    conj_array,
    hamilton,
    imaginary_from_angles,
    orthonormal_frame,
    slice_powers,
)
from src.algebra.sliceseries import SliceSeries, evaluate_many
from src.services.diagnostics import get_logger

_LOGGER = get_logger("slice_afd.hardy", service="slice-afd", component="hardy")


@dataclass(frozen=True)
class BallPoint:
    """A parameter ``a`` of the open unit ball, ``|a| < 1``."""

    value: Quaternion

    def __post_init__(self) -> None:
        if not self.value.norm() < 1.0:
            raise DomainError(f"Ball points need |a| < 1, got |a| = {self.value.norm():.6g}")

    @classmethod
    def from_sequence(cls, values: Sequence[float] | ArrayLike) -> BallPoint:
        return cls(Quaternion.from_array(values))

    @property
    def modulus(self) -> float:
        return self.value.norm()

    def as_array(self) -> FloatArray:
        return self.value.as_array()

    def to_list(self) -> list[float]:
        return self.value.to_list()


ORIGIN = BallPoint(Quaternion())


@dataclass(frozen=True)
class QuadratureEstimate:
    """Result of the quadrature inner product with its precision metadata."""

    value: Quaternion
    max_slice_deviation: float
    warnings: tuple[str, ...] = field(default_factory=tuple)


def _common(f: SliceSeries, g: SliceSeries) -> tuple[FloatArray, FloatArray]:
    order = max(f.trunc_order, g.trunc_order)
    return f.resize(order).coeffs, g.resize(order).coeffs


def inner_product(f: SliceSeries, g: SliceSeries) -> Quaternion:
    """Return ``<f, g> = sum_n conj(b_n) a_n``; right-linear in ``f``."""
    a, b = _common(f, g)
    return Quaternion.from_array(np.sum(hamilton(conj_array(b), a), axis=0))


def boundary_circle(unit: UnitImaginary, n_t: int) -> FloatArray:
    """Return the ``n_t`` uniform samples ``e^{It}`` of the boundary circle of ``C_I``."""
    if n_t <= 0:
        raise ValueError("n_t must be positive")
    t = 2.0 * np.pi * np.arange(n_t) / n_t
    points = np.zeros((n_t, 4))
    points[:, 0] = np.cos(t)
    points[:, 1:] = np.outer(np.sin(t), unit.direction)
    return points


def slice_inner_product(
    f: SliceSeries, g: SliceSeries, unit: UnitImaginary, n_t: int
) -> Quaternion:
    """Trapezoid rule for ``(1/2pi) int conj(g(e^{It})) f(e^{It}) dt`` on one slice."""
    points = boundary_circle(unit, n_t)
    values = hamilton(conj_array(evaluate_many(g, points)), evaluate_many(f, points))
    return Quaternion.from_array(np.mean(values, axis=0))


def inner_product_quadrature(
    f: SliceSeries, g: SliceSeries, n_t: int, n_theta: int
) -> QuadratureEstimate:
    """Average the per-slice boundary integrals over the imaginary sphere.

    Slices are parameterised by ``I(theta1, theta2)`` on a midpoint grid of
    ``[0, pi]**2`` with weight ``sin(theta1)``, normalised so the weights sum to 1.
    """
    if n_theta <= 0:
        raise ValueError("n_theta must be positive")
    order = max(f.trunc_order, g.trunc_order)
    warnings: list[str] = []
    if n_t < 2 * order + 2:
        warnings.append(f"n_t={n_t} is below 2N+2={2 * order + 2}; boundary modes may alias")
        _LOGGER.warning("quadrature_undersampled", n_t=n_t, trunc_order=order)

    theta = (np.arange(n_theta) + 0.5) * np.pi / n_theta
    weights = np.repeat(np.sin(theta), n_theta)
    weights /= weights.sum()
    units = [imaginary_from_angles(t1, t2) for t1 in theta for t2 in theta]

    # On every boundary circle h(e^{It}) = sum cos(nt) h_n + I sum sin(nt) h_n, so the two
    # trigonometric sums are shared by all slices.
    circle = 2.0 * np.pi * np.arange(n_t) / n_t
    modes = np.outer(circle, np.arange(order + 1))
    cos_table, sin_table = np.cos(modes), np.sin(modes)
    lifted = np.zeros((len(units), 1, 4))
    lifted[:, 0, 1:] = np.array([unit.direction for unit in units])

    def boundary_values(h: SliceSeries) -> FloatArray:
        coeffs = h.resize(order).coeffs
        return (cos_table @ coeffs)[None] + hamilton(lifted, (sin_table @ coeffs)[None])

    products = hamilton(conj_array(boundary_values(g)), boundary_values(f))
    per_slice = products.mean(axis=1)

    value = np.sum(weights[:, None] * per_slice, axis=0)
    deviation = float(np.max(np.abs(per_slice - per_slice[0])))
    return QuadratureEstimate(
        value=Quaternion.from_array(value),
        max_slice_deviation=deviation,
        warnings=tuple(warnings),
    )


def szego_kernel(a: BallPoint, trunc_order: int) -> SliceSeries:
    """Normalised Szego kernel ``e_a`` with coefficients ``sqrt(1 - |a|**2) conj(a)**n``."""
    scale = math.sqrt(1.0 - a.modulus**2)
    return SliceSeries(scale * slice_powers(a.value.conj(), trunc_order))


def szego_projection(
    neg_coeffs: Sequence[Quaternion] | ArrayLike,
    pos_coeffs: Sequence[Quaternion] | ArrayLike,
    trunc_order: int | None = None,
) -> SliceSeries:
    """Project two-sided boundary coefficients onto the Hardy space.

    Negative modes are discarded; the non-negative modes become the power series.
    """
    del neg_coeffs  # annihilated by the projection
    positive = _coefficient_rows(pos_coeffs)
    if positive.shape[0] == 0:
        return SliceSeries.zeros(0 if trunc_order is None else trunc_order)
    return SliceSeries.from_quaternions(positive, trunc_order)


def _coefficient_rows(values: Sequence[Quaternion] | ArrayLike) -> FloatArray:
    if isinstance(values, Sequence) and values and isinstance(values[0], Quaternion):
        return np.stack([value.as_array() for value in values])  # type: ignore[union-attr]
    return np.asarray(values, dtype=float).reshape(-1, 4)


def boundary_coefficients(
    samples: ArrayLike, unit: UnitImaginary
) -> tuple[FloatArray, FloatArray]:
    """Two-sided Fourier coefficients of boundary values sampled on ``e^{It}``.

    ``samples[k]`` is the value at ``t = 2 pi k / n``.  Each value splits as
    ``F + G J`` with ``F, G`` in ``C_I`` and ``J`` orthogonal to ``I``, so both parts are
    ordinary complex signals.  Returns ``(neg, pos)`` where ``neg[k - 1]`` is the
    coefficient of ``e^{-Ikt}`` and ``pos[k]`` the coefficient of ``e^{Ikt}``, each
    placed on the right of the exponential.
    """
    values = as_components(samples)
    if values.ndim != 2:
        raise ValueError("samples must be a (n_t, 4) array")
    n_t = values.shape[0]
    unit_j, unit_k = orthonormal_frame(unit)
    i_dir = np.asarray(unit.direction)
    j_dir = np.asarray(unit_j.direction)
    k_dir = np.asarray(unit_k.direction)
    vec = values[:, 1:]
    first = values[:, 0] + 1j * (vec @ i_dir)
    second = vec @ j_dir + 1j * (vec @ k_dir)
    first_hat = np.fft.fft(first) / n_t
    second_hat = np.fft.fft(second) / n_t

    def lift(index: FloatArray) -> FloatArray:
        out = np.zeros((index.shape[0], 4))
        f_k = first_hat[index]
        g_k = second_hat[index]
        out[:, 0] = f_k.real
        out[:, 1:] = (
            np.outer(f_k.imag, i_dir) + np.outer(g_k.real, j_dir) + np.outer(g_k.imag, k_dir)
        )
        return out

    max_mode = (n_t - 1) // 2
    pos = lift(np.arange(0, max_mode + 1))
    neg = lift((n_t - np.arange(1, max_mode + 1)) % n_t)
    return neg, pos


def project_boundary_samples(
    samples: ArrayLike, unit: UnitImaginary, trunc_order: int | None = None
) -> SliceSeries:
    """Szego projection of uniformly sampled boundary values on the slice ``C_I``."""
    neg, pos = boundary_coefficients(samples, unit)
    return szego_projection(neg, pos, trunc_order)


__all__ = [
    "BallPoint",
    "ORIGIN",
    "QuadratureEstimate",
    "boundary_circle",
    "boundary_coefficients",
    "inner_product",
    "inner_product_quadrature",
    "project_boundary_samples",
    "slice_inner_product",
    "szego_kernel",
    "szego_projection",
]
