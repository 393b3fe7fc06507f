from __future__ import annotations

import math

import numpy as np
import pytest

from src.algebra.quat import (
    E1,
    E1_UNIT,
    E2,
    E3,
    ONE,
    DomainError,
    Quaternion,
    UnitImaginary,
    conjugate_by,
    hamilton,
    imaginary_from_angles,
    inv_array,
    norm_array,
    orthonormal_frame,
    qinv,
    qmul,
    slice_decompose,
    slice_powers,
)

pytestmark = pytest.mark.afd_unit


def _close(p: Quaternion, q: Quaternion, tol: float = 1e-15) -> bool:
    return (p - q).norm() <= tol


def test_basis_products_follow_hamilton_rules() -> None:
    assert qmul(E1, E2) == E3
    assert qmul(E2, E3) == E1
    assert qmul(E3, E1) == E2
    assert qmul(E2, E1) == -E3
    for unit in (E1, E2, E3):
        assert qmul(unit, unit) == -ONE


def test_distributive_expansion_and_identity() -> None:
    product = qmul(ONE + E1, ONE + E2)
    assert product == Quaternion(1.0, 1.0, 1.0, 1.0)

    q = Quaternion(0.3, -1.2, 2.5, 0.7)
    assert qmul(ONE, q) == q
    assert qmul(q, ONE) == q


def test_inverse_examples() -> None:
    assert qinv(Quaternion.real(2.0)) == Quaternion.real(0.5)
    assert qinv(E1) == -E1
    assert _close(qinv(ONE + E1), Quaternion(0.5, -0.5, 0.0, 0.0))

    q = Quaternion(0.3, -1.2, 2.5, 0.7)
    assert _close(qmul(q, qinv(q)), ONE)
    assert _close(qmul(qinv(q), q), ONE)


def test_zero_has_no_inverse() -> None:
    with pytest.raises(DomainError):
        qinv(Quaternion())
    with pytest.raises(DomainError):
        Quaternion(1.0, 2.0, 3.0, 4.0) / 0


def test_slice_decomposition_examples() -> None:
    point = slice_decompose(Quaternion(1.0, 0.0, 2.0, 0.0))
    assert point.xcoord == 1.0
    assert point.ycoord == 2.0
    assert point.unit.direction == (0.0, 1.0, 0.0)

    real = slice_decompose(Quaternion.real(3.0))
    assert (real.xcoord, real.ycoord) == (3.0, 0.0)
    assert real.unit == E1_UNIT

    diagonal = slice_decompose(E1 + E2)
    assert diagonal.ycoord == pytest.approx(math.sqrt(2.0))
    assert diagonal.unit.direction == pytest.approx((1 / math.sqrt(2.0), 1 / math.sqrt(2.0), 0.0))
    assert _close(diagonal.reassemble(), E1 + E2)


@pytest.mark.parametrize(
    ("theta1", "theta2", "expected"),
    [
        (0.0, 1.3, (1.0, 0.0, 0.0)),
        (math.pi / 2, 0.0, (0.0, 1.0, 0.0)),
        (math.pi / 2, math.pi / 2, (0.0, 0.0, 1.0)),
    ],
)
def test_imaginary_from_angles(theta1: float, theta2: float, expected: tuple[float, ...]) -> None:
    unit = imaginary_from_angles(theta1, theta2)
    assert unit.direction == pytest.approx(expected, abs=1e-15)
    square = qmul(unit.as_quaternion(), unit.as_quaternion())
    assert _close(square, -ONE, 1e-14)


def test_imaginary_angles_out_of_range() -> None:
    with pytest.raises(DomainError):
        imaginary_from_angles(-0.1, 0.0)
    with pytest.raises(DomainError):
        imaginary_from_angles(0.0, 4.0)


def test_unit_imaginary_rejects_non_unit_vectors() -> None:
    with pytest.raises(DomainError):
        UnitImaginary((1.0, 1.0, 0.0))
    with pytest.raises(DomainError):
        UnitImaginary.from_vector([0.0, 0.0, 0.0])
    assert UnitImaginary.from_vector([0.0, 0.0, 5.0]).direction == (0.0, 0.0, 1.0)


def test_orthonormal_frame_spans_quaternions() -> None:
    unit = UnitImaginary.from_vector([0.2, -0.5, 0.8])
    unit_j, unit_k = orthonormal_frame(unit)
    i_vec, j_vec, k_vec = (np.array(u.direction) for u in (unit, unit_j, unit_k))
    assert abs(np.dot(i_vec, j_vec)) < 1e-15
    assert abs(np.dot(i_vec, k_vec)) < 1e-15
    assert abs(np.dot(j_vec, k_vec)) < 1e-15
    assert np.allclose(np.cross(i_vec, j_vec), k_vec, atol=1e-15)


def test_array_kernels_match_scalar_operations() -> None:
    rng = np.random.default_rng(3)
    p = rng.standard_normal((16, 4))
    q = rng.standard_normal((16, 4))
    products = hamilton(p, q)
    for row_p, row_q, row in zip(p, q, products, strict=True):
        scalar = qmul(Quaternion.from_array(row_p), Quaternion.from_array(row_q))
        assert np.allclose(row, scalar.as_array(), atol=1e-14)
    assert np.allclose(hamilton(p, inv_array(p)), [1.0, 0.0, 0.0, 0.0], atol=1e-14)
    assert np.allclose(norm_array(conjugate_by(q, p)), norm_array(q), atol=1e-13)


def test_slice_powers_match_repeated_products() -> None:
    q = Quaternion(0.3, 0.4, -0.2, 0.5)
    powers = slice_powers(q, 6)
    running = ONE
    for n in range(7):
        assert np.allclose(powers[n], running.as_array(), atol=1e-14)
        running = qmul(running, q)
