"""Truncated slice power series ``f(q) = sum_n q**n a_n`` and the *-product calculus.

A :class:`SliceSeries` stores its right coefficients as an ``(N + 1, 4)`` array.
Every binary operation returns a series at the larger of the two input orders and
drops the modes above it; the tail is of size ``rho**N`` for content concentrated
at radius ``rho``.

Pointwise evaluation of *-products and *-quotients goes through the twist
formulas, so no divergent reciprocal series is ever built on the hot path:

* ``(f * g)(q) = f(q) g(f(q)**-1 q f(q))`` when ``f(q) != 0``, else ``0``;
* ``(f**-* * g)(q) = f(q_hat)**-1 g(q_hat)`` with ``q_hat = f^c(q)**-1 q f^c(q)``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy.signal import lfilter

from .quat import (
    DomainError,
    FloatArray,
    Quaternion,
    UnitImaginary,
    as_components,
    conj_array,
    hamilton,
    inv_array,
    norm_array,
    qinv,
    qmul,
)

DEFAULT_TRUNC_ORDER = 256
ZERO_TOL = 1e-13
EVAL_CHUNK = 2048

# Component pairs (left, right) contributing to each output component of a
# Hamilton product, with their signs.
_HAMILTON_TABLE: tuple[tuple[tuple[int, int, float], ...], ...] = (
    ((0, 0, 1.0), (1, 1, -1.0), (2, 2, -1.0), (3, 3, -1.0)),
    ((0, 1, 1.0), (1, 0, 1.0), (2, 3, 1.0), (3, 2, -1.0)),
    ((0, 2, 1.0), (1, 3, -1.0), (2, 0, 1.0), (3, 1, 1.0)),
    ((0, 3, 1.0), (1, 2, 1.0), (2, 1, -1.0), (3, 0, 1.0)),
)


class ZeroSetError(DomainError):
    """Raised when a *-quotient is evaluated on the zero set of ``f^s``.

    ``sphere`` holds ``(x, y)`` of the offending sphere ``x + y S``.
    """

    def __init__(self, sphere: tuple[float, float]) -> None:
        self.sphere = sphere
        super().__init__(
            f"Point lies on the zero set of the symmetrization: sphere x={sphere[0]:.6g}, "
            f"y={sphere[1]:.6g}"
        )


class TwistUndefinedError(DomainError):
    """Raised when ``f^c(q) = 0`` so the twist ``q_hat`` of a *-quotient is undefined."""


@dataclass(frozen=True, eq=False)
class SliceSeries:
    """Right-coefficient power series truncated at order ``N``."""

    coeffs: FloatArray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=float, copy=True)
        if arr.ndim != 2 or arr.shape[1] != 4 or arr.shape[0] == 0:
            raise ValueError(f"coeffs must have shape (N + 1, 4), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coeffs must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def zeros(cls, trunc_order: int = DEFAULT_TRUNC_ORDER) -> SliceSeries:
        _check_order(trunc_order)
        return cls(np.zeros((trunc_order + 1, 4)))

    @classmethod
    def constant(
        cls, value: Quaternion | float, trunc_order: int = DEFAULT_TRUNC_ORDER
    ) -> SliceSeries:
        return cls.monomial(0, value, trunc_order)

    @classmethod
    def monomial(
        cls, degree: int, value: Quaternion | float = 1.0, trunc_order: int = DEFAULT_TRUNC_ORDER
    ) -> SliceSeries:
        """Return ``q**degree value``."""
        _check_order(trunc_order)
        if not 0 <= degree <= trunc_order:
            raise DomainError(f"degree {degree} outside [0, {trunc_order}]")
        coeffs = np.zeros((trunc_order + 1, 4))
        coeffs[degree] = _coerce(value)
        return cls(coeffs)

    @classmethod
    def from_quaternions(
        cls, values: Sequence[Quaternion] | ArrayLike, trunc_order: int | None = None
    ) -> SliceSeries:
        """Build a series from ``a_0, a_1, ...``, zero-padding up to ``trunc_order``."""
        if isinstance(values, Sequence) and values and isinstance(values[0], Quaternion):
            arr = np.stack([value.as_array() for value in values])  # type: ignore[union-attr]
        else:
            arr = np.asarray(values, dtype=float).reshape(-1, 4)
        order = arr.shape[0] - 1 if trunc_order is None else trunc_order
        if order < 0:
            raise ValueError("At least one coefficient is required")
        return cls(_resize(arr, order))

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------
    @property
    def trunc_order(self) -> int:
        return int(self.coeffs.shape[0] - 1)

    def coefficient(self, n: int) -> Quaternion:
        if n > self.trunc_order:
            return Quaternion()
        return Quaternion.from_array(self.coeffs[n])

    def norm(self) -> float:
        """Hardy-space norm ``sqrt(sum |a_n|**2)``."""
        return float(np.sqrt(np.sum(self.coeffs * self.coeffs)))

    def resize(self, trunc_order: int) -> SliceSeries:
        """Zero-pad or truncate to ``trunc_order``."""
        _check_order(trunc_order)
        if trunc_order == self.trunc_order:
            return self
        return SliceSeries(_resize(self.coeffs, trunc_order))

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.coeffs)) <= tol)

    def right_mul(self, value: Quaternion | float) -> SliceSeries:
        """Return ``f . value``, i.e. coefficients ``a_n value``."""
        return SliceSeries(hamilton(self.coeffs, _coerce(value)[None, :]))

    def left_mul(self, value: Quaternion | float) -> SliceSeries:
        """Return the series with coefficients ``value a_n`` (the *-product ``value * f``)."""
        return SliceSeries(hamilton(_coerce(value)[None, :], self.coeffs))

    def allclose(self, other: SliceSeries, atol: float = 1e-12) -> bool:
        order = max(self.trunc_order, other.trunc_order)
        diff = _resize(self.coeffs, order) - _resize(other.coeffs, order)
        return bool(np.max(np.abs(diff)) <= atol)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------
    def __add__(self, other: object) -> SliceSeries:
        if not isinstance(other, SliceSeries):
            return NotImplemented
        order = max(self.trunc_order, other.trunc_order)
        return SliceSeries(_resize(self.coeffs, order) + _resize(other.coeffs, order))

    def __sub__(self, other: object) -> SliceSeries:
        if not isinstance(other, SliceSeries):
            return NotImplemented
        order = max(self.trunc_order, other.trunc_order)
        return SliceSeries(_resize(self.coeffs, order) - _resize(other.coeffs, order))

    def __neg__(self) -> SliceSeries:
        return SliceSeries(-self.coeffs)

    def __mul__(self, other: object) -> SliceSeries:
        if isinstance(other, SliceSeries):
            return star_mul(self, other)
        if isinstance(other, (Quaternion, int, float)):
            return self.right_mul(other)
        return NotImplemented

    # ------------------------------------------------------------------
    # Serialisation
    # ------------------------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        return {"trunc_order": self.trunc_order, "coeffs": self.coeffs.tolist()}

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> SliceSeries:
        order = int(payload["trunc_order"])
        return cls.from_quaternions(np.asarray(payload["coeffs"], dtype=float), order)


@dataclass(frozen=True)
class TwistedPoint:
    """A point ``q`` and its rotation inside the sphere ``[q]``."""

    original: Quaternion
    twisted: Quaternion


def _check_order(trunc_order: int) -> None:
    if trunc_order < 0:
        raise ValueError("trunc_order must be non-negative")


def _coerce(value: Quaternion | float | ArrayLike) -> FloatArray:
    if isinstance(value, (int, float)):
        return np.array([float(value), 0.0, 0.0, 0.0])
    return as_components(value)


def _resize(coeffs: FloatArray, trunc_order: int) -> FloatArray:
    rows = coeffs.shape[0]
    if rows == trunc_order + 1:
        return np.array(coeffs, dtype=float)
    if rows > trunc_order + 1:
        return np.array(coeffs[: trunc_order + 1], dtype=float)
    out = np.zeros((trunc_order + 1, 4))
    out[:rows] = coeffs
    return out


def _quaternion(values: FloatArray) -> Quaternion:
    return Quaternion.from_array(values)


def convolve_coefficients(left: FloatArray, right: FloatArray, trunc_order: int) -> FloatArray:
    """Quaternionic Cauchy convolution ``sum_k left_k right_{n-k}`` up to ``trunc_order``."""
    size = trunc_order + 1
    out = np.zeros((size, 4))
    products: dict[tuple[int, int], FloatArray] = {}
    for component, terms in enumerate(_HAMILTON_TABLE):
        for i, j, sign in terms:
            key = (i, j)
            if key not in products:
                products[key] = np.convolve(left[:, i], right[:, j])[:size]
            partial = products[key]
            out[: partial.shape[0], component] += sign * partial
    return out


# ----------------------------------------------------------------------
# *-product calculus
# ----------------------------------------------------------------------
def star_mul(f: SliceSeries, g: SliceSeries) -> SliceSeries:
    """Return ``f * g`` with coefficients ``sum_k a_k b_{n-k}`` at the larger input order."""
    order = max(f.trunc_order, g.trunc_order)
    return SliceSeries(convolve_coefficients(f.coeffs, g.coeffs, order))


def regular_conj(f: SliceSeries) -> SliceSeries:
    """Return ``f^c(q) = sum q**n conj(a_n)``."""
    return SliceSeries(conj_array(f.coeffs))


def symmetrize(f: SliceSeries) -> SliceSeries:
    """Return ``f^s = f * f^c``.

    The imaginary parts of ``a_k conj(a_{n-k}) + a_{n-k} conj(a_k)`` cancel in pairs, so
    only the real component is accumulated and the result is exactly real.
    """
    size = f.trunc_order + 1
    real = np.zeros(size)
    for column in range(4):
        real += np.convolve(f.coeffs[:, column], f.coeffs[:, column])[:size]
    out = np.zeros((size, 4))
    out[:, 0] = real
    return SliceSeries(out)


def regular_reciprocal(f: SliceSeries) -> SliceSeries:
    """Return ``f**-* = (1 / f^s) f^c`` through order ``N``.

    Raises
    ------
    DomainError
        If ``a_0 = 0``; the reciprocal then has no power-series expansion at 0.
    """
    a0 = f.coeffs[0]
    if float(np.sqrt(np.dot(a0, a0))) <= ZERO_TOL:
        raise DomainError("Reciprocal has no power-series expansion at 0 (a_0 = 0)")
    size = f.trunc_order + 1
    real_sym = symmetrize(f).coeffs[:, 0]
    impulse = np.zeros(size)
    impulse[0] = 1.0
    inverse_sym = lfilter([1.0], real_sym, impulse)
    conj_coeffs = conj_array(f.coeffs)
    out = np.zeros((size, 4))
    for column in range(4):
        out[:, column] = np.convolve(inverse_sym, conj_coeffs[:, column])[:size]
    return SliceSeries(out)


# ----------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------
def evaluate(f: SliceSeries, q: Quaternion) -> Quaternion:
    """Horner value ``a_0 + q (a_1 + q (a_2 + ...))``.

    The truncation error is ``O(|q|**(N + 1))`` for ``|q| < 1``.
    """
    return _quaternion(horner_array(f.coeffs, q.as_array()))


def horner_array(coeffs: FloatArray, points: FloatArray) -> FloatArray:
    """Vectorised left Horner scheme over a ``[..., 4]`` array of points."""
    acc = np.broadcast_to(coeffs[-1], points.shape).copy()
    for n in range(coeffs.shape[0] - 2, -1, -1):
        acc = hamilton(points, acc) + coeffs[n]
    return acc


def slice_power_table(points: FloatArray, trunc_order: int) -> tuple[FloatArray, FloatArray]:
    """Return ``(alpha, beta)`` with ``q**n = alpha_n + beta_n I`` for each point.

    Both tables have shape ``(M, N + 1)``; ``I`` is the imaginary unit of each point.
    """
    x = points[:, 0]
    y = norm_array(points[:, 1:])
    radius = np.hypot(x, y)
    angle = np.arctan2(y, x)
    n = np.arange(trunc_order + 1)
    magnitude = np.power(radius[:, None], n[None, :])
    phase = angle[:, None] * n[None, :]
    return magnitude * np.cos(phase), magnitude * np.sin(phase)


def evaluate_many(f: SliceSeries, points: ArrayLike) -> FloatArray:
    """Evaluate ``f`` at every quaternion of a ``[..., 4]`` array.

    Uses ``q**n = alpha_n + beta_n I`` so that ``f(q) = A + I B`` with two real matrix
    products ``A = sum alpha_n a_n`` and ``B = sum beta_n a_n``.
    """
    arr = as_components(points)
    flat = arr.reshape(-1, 4)
    out = np.empty_like(flat)
    for start in range(0, flat.shape[0], EVAL_CHUNK):
        chunk = flat[start : start + EVAL_CHUNK]
        alpha, beta = slice_power_table(chunk, f.trunc_order)
        real_part = alpha @ f.coeffs
        imag_part = beta @ f.coeffs
        y = norm_array(chunk[:, 1:])
        units = np.zeros_like(chunk)
        nonzero = y > 0.0
        units[nonzero, 1:] = chunk[nonzero, 1:] / y[nonzero, None]
        # beta vanishes when y == 0, so the placeholder unit never contributes.
        out[start : start + EVAL_CHUNK] = real_part + hamilton(units, imag_part)
    return out.reshape(arr.shape)


def twist_point(f: SliceSeries, q: Quaternion) -> TwistedPoint:
    """Return ``q_tilde = f(q)**-1 q f(q)``; ``q`` itself when ``f(q)`` vanishes."""
    value = evaluate(f, q)
    if value.norm() <= ZERO_TOL:
        return TwistedPoint(original=q, twisted=q)
    return TwistedPoint(original=q, twisted=qmul(qinv(value), qmul(q, value)))


def eval_star_pointwise(f: SliceSeries, g: SliceSeries, q: Quaternion) -> Quaternion:
    """Return ``(f * g)(q) = f(q) g(q_tilde)``, or ``0`` when ``|f(q)| <= 1e-13``."""
    value = evaluate(f, q)
    if value.norm() <= ZERO_TOL:
        return Quaternion()
    twisted = qmul(qinv(value), qmul(q, value))
    return qmul(value, evaluate(g, twisted))


def eval_reciprocal_star(f: SliceSeries, g: SliceSeries, q: Quaternion) -> Quaternion:
    """Return ``(f**-* * g)(q) = f(q_hat)**-1 g(q_hat)``.

    Raises
    ------
    ZeroSetError
        If ``q`` lies on the zero set of ``f^s``.
    TwistUndefinedError
        If ``f^c(q) = 0`` while ``f^s(q) != 0``.
    """
    conj_series = regular_conj(f)
    sym_value = eval_star_pointwise(f, conj_series, q)
    if sym_value.norm() <= ZERO_TOL:
        raise ZeroSetError((q.w, float(np.linalg.norm(q.vector))))
    conj_value = evaluate(conj_series, q)
    if conj_value.norm() <= ZERO_TOL:
        raise TwistUndefinedError(
            "f^c vanishes at the evaluation point; the twisted point is undefined"
        )
    q_hat = qmul(qinv(conj_value), qmul(q, conj_value))
    f_hat = evaluate(f, q_hat)
    if f_hat.norm() <= ZERO_TOL:
        raise ZeroSetError((q.w, float(np.linalg.norm(q.vector))))
    return qmul(qinv(f_hat), evaluate(g, q_hat))


def slice_extension_eval(
    f: SliceSeries, x: float, y: float, unit_i: UnitImaginary, unit_j: UnitImaginary
) -> Quaternion:
    """Value at ``x + yJ`` from the two conjugate values on the slice ``C_I``.

    ``f(x + yJ) = (v1 + v2) / 2 + (J I / 2)(v2 - v1)`` with ``v1 = f(x + yI)`` and
    ``v2 = f(x - yI)``.
    """
    i_quat = unit_i.as_quaternion()
    v1 = evaluate(f, Quaternion.real(x) + i_quat * y)
    v2 = evaluate(f, Quaternion.real(x) - i_quat * y)
    ji = qmul(unit_j.as_quaternion(), i_quat)
    return (v1 + v2) * 0.5 + qmul(ji, v2 - v1) * 0.5


def evaluate_star_pointwise_many(
    f: SliceSeries, g: SliceSeries, points: FloatArray
) -> FloatArray:
    """Vectorised :func:`eval_star_pointwise` over a ``(M, 4)`` array."""
    values = evaluate_many(f, points)
    norms = norm_array(values)
    out = np.zeros_like(points)
    mask = norms > ZERO_TOL
    if np.any(mask):
        rot = values[mask]
        twisted = hamilton(inv_array(rot), hamilton(points[mask], rot))
        out[mask] = hamilton(rot, evaluate_many(g, twisted))
    return out


def series_sum(terms: Iterable[SliceSeries], trunc_order: int) -> SliceSeries:
    """Sum a sequence of series at a common order (zero for an empty sequence)."""
    acc = np.zeros((trunc_order + 1, 4))
    for term in terms:
        acc += _resize(term.coeffs, trunc_order)
    return SliceSeries(acc)


__all__ = [
    "DEFAULT_TRUNC_ORDER",
    "SliceSeries",
    "TwistUndefinedError",
    "TwistedPoint",
    "ZERO_TOL",
    "ZeroSetError",
    "convolve_coefficients",
    "eval_reciprocal_star",
    "eval_star_pointwise",
    "evaluate",
    "evaluate_many",
    "evaluate_star_pointwise_many",
    "horner_array",
    "regular_conj",
    "regular_reciprocal",
    "series_sum",
    "slice_extension_eval",
    "slice_power_table",
    "star_mul",
    "symmetrize",
    "twist_point",
]
