"""Blaschke factors, Takenaka-Malmquist systems and the hyperbolic backward shift."""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from src.algebra.quat import (
    DomainError,
    FloatArray,
    Quaternion,
    as_components,
    conj_array,
    hamilton,
    inv_array,
    norm_array,
    slice_powers,
)
from src.algebra.sliceseries import SliceSeries, star_mul

from .space import BallPoint, inner_product, szego_kernel

_ONE = np.array([1.0, 0.0, 0.0, 0.0])


def blaschke_factor(a: BallPoint, trunc_order: int) -> SliceSeries:
    """Series of ``B_a(q) = (1 - q conj(a))**-* * (a - q) (a / |a|)``; ``B_0(q) = q``."""
    if a.modulus == 0.0:
        return SliceSeries.monomial(1, 1.0, trunc_order)
    a_arr = a.as_array()
    unit = a_arr / a.modulus
    powers = slice_powers(a.value.conj(), trunc_order)
    coeffs = hamilton(powers, a_arr[None, :])
    coeffs[1:] -= powers[:-1]
    return SliceSeries(hamilton(coeffs, unit[None, :]))


def blaschke_eval_array(a: FloatArray, points: FloatArray) -> FloatArray:
    """Closed-form Blaschke values at a ``(M, 4)`` array of points.

    With ``h(q) = 1 - q conj(a)`` the value is ``h(q_hat)**-1 (a - q_hat) (a / |a|)`` where
    ``q_hat = h^c(q)**-1 q h^c(q)`` and ``h^c(q) = 1 - q a``.  No truncation is involved.
    """
    modulus = float(np.sqrt(np.dot(a, a)))
    if modulus == 0.0:
        return np.array(points, dtype=float, copy=True)
    unit = a / modulus
    a_conj = conj_array(a)
    h_conj = _ONE - hamilton(points, a)
    q_hat = hamilton(inv_array(h_conj), hamilton(points, h_conj))
    denominator = _ONE - hamilton(q_hat, a_conj)
    numerator = hamilton(a - q_hat, unit)
    return hamilton(inv_array(denominator), numerator)


def blaschke_eval(a: BallPoint, q: Quaternion) -> Quaternion:
    """Pointwise value of ``B_a`` at ``q``; exact to rounding on the closed ball."""
    return Quaternion.from_array(blaschke_eval_array(a.as_array(), q.as_array()[None, :])[0])


def blaschke_product(params: Sequence[BallPoint], trunc_order: int) -> SliceSeries:
    """Left-to-right *-product of Blaschke factors; the empty product is 1."""
    product = SliceSeries.constant(1.0, trunc_order)
    for a in params:
        product = star_mul(product, blaschke_factor(a, trunc_order))
    return product


def blaschke_product_eval_array(params: FloatArray, points: FloatArray) -> FloatArray:
    """Pointwise value of ``B_{a_1} * ... * B_{a_k}`` at a ``(M, 4)`` array of points.

    Uses ``(f * g)(q) = f(q) g(f(q)**-1 q f(q))`` repeatedly; once a factor vanishes the
    product is zero at that point.
    """
    pts = as_components(points).reshape(-1, 4)
    result = np.broadcast_to(_ONE, pts.shape).copy()
    current = np.array(pts, dtype=float, copy=True)
    active = np.ones(pts.shape[0], dtype=bool)
    for a in np.asarray(params, dtype=float).reshape(-1, 4):
        if not np.any(active):
            break
        values = blaschke_eval_array(a, current[active])
        result[active] = hamilton(result[active], values)
        nonzero = norm_array(values) > 0.0
        idx = np.flatnonzero(active)
        rot = values[nonzero]
        current[idx[nonzero]] = hamilton(
            inv_array(rot), hamilton(current[idx[nonzero]], rot)
        )
        active[idx[~nonzero]] = False
    result[~active] = 0.0
    return result


def blaschke_product_eval(params: Sequence[BallPoint], q: Quaternion) -> Quaternion:
    """Exact pointwise value of a Blaschke product at ``q``."""
    arr = _params_array(params)
    return Quaternion.from_array(blaschke_product_eval_array(arr, q.as_array()[None, :])[0])


# ----------------------------------------------------------------------
# Stem pairs
# ----------------------------------------------------------------------
# A slice function takes the value ``alpha + I beta`` at ``x + I y`` for every unit
# ``I``, with quaternion-valued ``(alpha, beta)`` depending on ``(x, y)`` only.  Under the
# *-product these pairs multiply like ``alpha + iota beta`` with a central ``iota``.
Stem = tuple[FloatArray, FloatArray]


def _stem_mul(left: Stem, right: Stem) -> Stem:
    p1, q1 = left
    p2, q2 = right
    return hamilton(p1, p2) - hamilton(q1, q2), hamilton(p1, q2) + hamilton(q1, p2)


def _stem_inv(stem: Stem) -> Stem:
    """*-inverse: the conjugate pair divided by the complex symmetrisation ``c0 + iota c1``."""
    p, q = stem
    c0 = np.sum(p * p, axis=-1) - np.sum(q * q, axis=-1)
    c1 = 2.0 * np.sum(p * q, axis=-1)
    scale = c0 * c0 + c1 * c1
    d0 = (c0 / scale)[..., None]
    d1 = (-c1 / scale)[..., None]
    pc, qc = conj_array(p), conj_array(q)
    return pc * d0 - qc * d1, pc * d1 + qc * d0


def imaginary_units(points: FloatArray) -> FloatArray:
    """Unit imaginary part of each row; rows on the real axis get zero."""
    pts = as_components(points).reshape(-1, 4)
    y = norm_array(pts[:, 1:])
    units = np.zeros_like(pts)
    nonzero = y > 0.0
    units[nonzero, 1:] = pts[nonzero, 1:] / y[nonzero, None]
    return units


def blaschke_product_stems(params: FloatArray, points: FloatArray) -> Stem:
    """Stem pair of ``B_{a_1} * ... * B_{a_k}`` at the ``(x, |Im q|)`` of each point.

    Factors are built in closed form, ``(1 - q conj(a))**-* * (a - q) * (a / |a|)``, and
    multiplied in order by pairwise halving, so one call costs ``O(log k)`` array operations.
    """
    pts = as_components(points).reshape(-1, 4)
    arr = np.asarray(params, dtype=float).reshape(-1, 4)
    count = pts.shape[0]
    if arr.shape[0] == 0:
        return np.broadcast_to(_ONE, (count, 4)).copy(), np.zeros((count, 4))

    x = pts[:, 0][:, None, None]
    y = norm_array(pts[:, 1:])[:, None, None]
    a = arr[None, :, :]
    a_conj = conj_array(a)
    modulus = norm_array(arr)
    zero = modulus == 0.0
    unit = np.where(zero[:, None], _ONE, arr / np.where(zero, 1.0, modulus)[:, None])

    denominator = _stem_inv((_ONE - x * a_conj, -y * a_conj))
    numerator = (a - x * _ONE, np.broadcast_to(-y * _ONE, (count, arr.shape[0], 4)))
    p, q = _stem_mul(denominator, numerator)
    p, q = hamilton(p, unit[None, :, :]), hamilton(q, unit[None, :, :])
    if np.any(zero):
        p[:, zero] = (x * _ONE)[:, 0, None, :]
        q[:, zero] = (y * _ONE)[:, 0, None, :]

    while p.shape[1] > 1:
        if p.shape[1] % 2:
            p = np.concatenate((p, np.broadcast_to(_ONE, (count, 1, 4))), axis=1)
            q = np.concatenate((q, np.zeros((count, 1, 4))), axis=1)
        p, q = _stem_mul((p[:, 0::2], q[:, 0::2]), (p[:, 1::2], q[:, 1::2]))
    return p[:, 0], q[:, 0]


def stem_value(stem: Stem, points: FloatArray) -> FloatArray:
    """Value ``alpha + I beta`` at each point, ``I`` being the point's imaginary unit."""
    alpha, beta = stem
    return alpha + hamilton(imaginary_units(points), beta)


def conjugate_stem_value(stem: Stem, points: FloatArray) -> FloatArray:
    """Value of the regular conjugate, whose stem pair is ``(conj(alpha), conj(beta))``."""
    alpha, beta = stem
    return conj_array(alpha) + hamilton(imaginary_units(points), conj_array(beta))


def _params_array(params: Sequence[BallPoint]) -> FloatArray:
    if not params:
        return np.zeros((0, 4))
    return np.stack([a.as_array() for a in params])


@dataclass(frozen=True, eq=False)
class TMSystem:
    """Ordered parameters with their partial Blaschke products and TM functions.

    ``partial_products[k]`` is ``B_{k+1} = B_{a_1} * ... * B_{a_k}`` (so the first entry
    is the constant 1) and ``tm_functions[k] = partial_products[k] * e_{a_{k+1}}``.
    ``tail_product`` is the product over all parameters, the next partial product.
    """

    params: tuple[BallPoint, ...]
    partial_products: tuple[SliceSeries, ...]
    tm_functions: tuple[SliceSeries, ...]
    tail_product: SliceSeries
    trunc_order: int

    @classmethod
    def empty(cls, trunc_order: int) -> TMSystem:
        return cls(
            params=(),
            partial_products=(),
            tm_functions=(),
            tail_product=SliceSeries.constant(1.0, trunc_order),
            trunc_order=trunc_order,
        )

    def __len__(self) -> int:
        return len(self.params)

    def extend(self, a: BallPoint) -> TMSystem:
        """Append ``a``: ``T_{n+1} = B_{n+1} * e_a`` and ``B_{n+2} = B_{n+1} * B_a``."""
        product = self.tail_product
        tm_function = star_mul(product, szego_kernel(a, self.trunc_order))
        next_product = star_mul(product, blaschke_factor(a, self.trunc_order))
        return TMSystem(
            params=(*self.params, a),
            partial_products=(*self.partial_products, product),
            tm_functions=(*self.tm_functions, tm_function),
            tail_product=next_product,
            trunc_order=self.trunc_order,
        )

    def gram(self) -> FloatArray:
        """Return ``G[k, l] = <T_k, T_l>`` as an ``(n, n, 4)`` array."""
        if not self.tm_functions:
            return np.zeros((0, 0, 4))
        stacked = np.stack([t.coeffs for t in self.tm_functions])
        return np.sum(
            hamilton(conj_array(stacked)[None, :, :, :], stacked[:, None, :, :]), axis=2
        )

    def gram_deviation(self) -> float:
        """Largest entrywise deviation of the Gram matrix from the identity."""
        gram = self.gram()
        if gram.shape[0] == 0:
            return 0.0
        identity = np.zeros_like(gram)
        identity[np.arange(gram.shape[0]), np.arange(gram.shape[0]), 0] = 1.0
        return float(np.max(np.abs(gram - identity)))

    def to_dict(self) -> dict[str, Any]:
        return {"params": [a.to_list() for a in self.params], "trunc_order": self.trunc_order}

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> TMSystem:
        params = [BallPoint.from_sequence(p) for p in payload["params"]]
        return tm_system(params, int(payload["trunc_order"]))


def tm_system(
    params: Iterable[BallPoint], trunc_order: int, rho_max: float | None = None
) -> TMSystem:
    """Build the TM system incrementally; every ``|a_k|`` must respect ``rho_max`` if given."""
    system = TMSystem.empty(trunc_order)
    for a in params:
        if rho_max is not None and a.modulus > rho_max:
            raise DomainError(f"|a| = {a.modulus:.6g} exceeds rho_max = {rho_max:.6g}")
        system = system.extend(a)
    return system


def backward_shift(f: SliceSeries, a: BallPoint) -> SliceSeries:
    """Reduced remainder ``S_a f = B_a**-* * (f - e_a <f, e_a>)``.

    The division by ``B_a`` deflates ``h = (1 - q conj(a)) * r`` by ``(a - q)`` with the
    backward recurrence ``y_{n-1} = a y_n - h_n`` started above the top mode, then
    left-multiplies by ``conj(a / |a|)``.  For ``a = 0`` it is the coefficient shift.
    """
    order = f.trunc_order
    kernel = szego_kernel(a, order)
    remainder = (f - kernel.right_mul(inner_product(f, kernel))).coeffs
    if a.modulus == 0.0:
        shifted = np.zeros_like(remainder)
        shifted[:-1] = remainder[1:]
        return SliceSeries(shifted)

    a_arr = a.as_array()
    unit_conj = conj_array(a_arr / a.modulus)
    lifted = np.zeros((order + 2, 4))
    lifted[: order + 1] = remainder
    lifted[1:] -= hamilton(conj_array(a_arr)[None, :], remainder)

    quotient = np.zeros((order + 1, 4))
    y = -lifted[order + 1]
    quotient[order] = y
    for n in range(order, 0, -1):
        y = hamilton(a_arr, y) - lifted[n]
        quotient[n - 1] = y
    return SliceSeries(hamilton(unit_conj[None, :], quotient))


def reduced_remainder_norm(f: SliceSeries, a: BallPoint) -> float:
    """``sqrt(||f||**2 - |<f, e_a>|**2)``, the norm of ``S_a f`` by the energy identity."""
    projection = inner_product(f, szego_kernel(a, f.trunc_order)).norm()
    return math.sqrt(max(f.norm() ** 2 - projection**2, 0.0))


__all__ = [
    "TMSystem",
    "backward_shift",
    "blaschke_eval",
    "blaschke_eval_array",
    "blaschke_factor",
    "blaschke_product",
    "blaschke_product_eval",
    "blaschke_product_eval_array",
    "blaschke_product_stems",
    "conjugate_stem_value",
    "imaginary_units",
    "reduced_remainder_norm",
    "stem_value",
    "tm_system",
]
