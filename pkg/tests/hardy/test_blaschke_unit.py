from __future__ import annotations

import numpy as np
import pytest

from src.algebra.quat import (
    ONE,
    DomainError,
    Quaternion,
    UnitImaginary,
    conj_array,
    norm_array,
    qmul,
)
from src.algebra.sliceseries import SliceSeries, evaluate, star_mul
from src.hardy.blaschke import (
    TMSystem,
    backward_shift,
    blaschke_eval,
    blaschke_eval_array,
    blaschke_factor,
    blaschke_product,
    blaschke_product_eval,
    blaschke_product_eval_array,
    blaschke_product_stems,
    conjugate_stem_value,
    reduced_remainder_norm,
    stem_value,
    tm_system,
)
from src.hardy.space import ORIGIN, BallPoint, boundary_circle, inner_product, szego_kernel

pytestmark = pytest.mark.afd_unit

N = 128


@pytest.fixture()
def param() -> BallPoint:
    return BallPoint.from_sequence([0.3, -0.2, 0.4, 0.1])


def test_factor_at_origin_is_identity_map() -> None:
    assert blaschke_factor(ORIGIN, 8).allclose(SliceSeries.monomial(1, 1.0, 8), 0.0)
    q = Quaternion(0.1, 0.2, 0.3, 0.4)
    assert blaschke_eval(ORIGIN, q) == q


def test_factor_vanishes_at_parameter(param: BallPoint) -> None:
    assert blaschke_eval(param, param.value).norm() < 1e-14
    series_value = evaluate(blaschke_factor(param, N), param.value)
    assert series_value.norm() < 1e-12


def test_factor_constant_term(param: BallPoint) -> None:
    constant = blaschke_factor(param, N).coefficient(0)
    expected = qmul(param.value, param.value) / param.modulus
    assert (constant - expected).norm() < 1e-15
    assert constant.norm() == pytest.approx(param.modulus)


def test_factor_is_unimodular_on_boundary(param: BallPoint) -> None:
    for direction in ([1.0, 0.0, 0.0], [0.2, 0.7, -0.4], [0.0, -1.0, 1.0]):
        unit = UnitImaginary.from_vector(direction)
        values = blaschke_eval_array(param.as_array(), boundary_circle(unit, 64))
        assert np.allclose(norm_array(values), 1.0, atol=1e-13, rtol=0.0)


def test_closed_form_matches_series(param: BallPoint) -> None:
    series = blaschke_factor(param, N)
    for point in ([0.1, 0.2, -0.3, 0.0], [-0.5, 0.1, 0.1, 0.4], [0.6, 0.0, 0.0, 0.0]):
        q = Quaternion.from_array(point)
        assert (evaluate(series, q) - blaschke_eval(param, q)).norm() < 1e-10


def test_product_conventions(param: BallPoint) -> None:
    assert blaschke_product([], 6).allclose(SliceSeries.constant(1.0, 6), 0.0)
    assert blaschke_product([param], N).allclose(blaschke_factor(param, N), 0.0)
    assert blaschke_product_eval([], Quaternion(0.2, 0.0, 0.0, 0.0)) == ONE


def test_product_pointwise_matches_series(param: BallPoint) -> None:
    other = BallPoint.from_sequence([-0.1, 0.5, 0.0, -0.2])
    series = blaschke_product([param, other, param], N)
    q = Quaternion(0.2, -0.1, 0.3, 0.25)
    assert (evaluate(series, q) - blaschke_product_eval([param, other, param], q)).norm() < 1e-10
    assert blaschke_product_eval([param, other], param.value).norm() < 1e-14


def test_stem_pair_matches_composed_product(param: BallPoint) -> None:
    other = BallPoint.from_sequence([-0.1, 0.5, 0.0, -0.2])
    params = np.stack([param.as_array(), other.as_array(), ORIGIN.as_array(), param.as_array()])
    rng = np.random.default_rng(7)
    points = np.vstack([rng.uniform(-0.45, 0.45, (40, 4)), [[0.3, 0.0, 0.0, 0.0]]])

    stem = blaschke_product_stems(params, points)
    composed = blaschke_product_eval_array(params, points)
    assert np.max(np.abs(stem_value(stem, points) - composed)) < 1e-12

    conjugate = blaschke_product_eval_array(conj_array(params[::-1]), points)
    assert np.max(np.abs(conjugate_stem_value(stem, points) - conjugate)) < 1e-12


def test_empty_stem_pair_is_one() -> None:
    points = np.array([[0.1, 0.2, 0.0, 0.3], [0.0, 0.0, 0.0, 0.0]])
    alpha, beta = blaschke_product_stems(np.zeros((0, 4)), points)
    assert np.array_equal(stem_value((alpha, beta), points), np.tile(ONE.as_array(), (2, 1)))
    assert not np.any(beta)


def test_tm_system_with_zero_parameters_is_fourier_basis() -> None:
    system = tm_system([ORIGIN] * 5, 8)
    for k, tm_function in enumerate(system.tm_functions):
        assert tm_function.allclose(SliceSeries.monomial(k, 1.0, 8), 0.0)
    assert system.tail_product.allclose(SliceSeries.monomial(5, 1.0, 8), 0.0)


def test_tm_system_extend_and_rho_bound(param: BallPoint) -> None:
    empty = TMSystem.empty(N)
    assert len(empty) == 0
    assert empty.gram().shape == (0, 0, 4)
    assert empty.gram_deviation() == 0.0

    one = empty.extend(param)
    assert len(one) == 1
    assert one.tm_functions[0].allclose(szego_kernel(param, N), 0.0)
    assert one.partial_products[0].allclose(SliceSeries.constant(1.0, N), 0.0)

    with pytest.raises(DomainError):
        tm_system([param], N, rho_max=0.5)


def test_tm_system_round_trips_through_dict(param: BallPoint) -> None:
    system = tm_system([param, ORIGIN], 32)
    rebuilt = TMSystem.from_dict(system.to_dict())
    assert [a.to_list() for a in rebuilt.params] == [a.to_list() for a in system.params]
    for left, right in zip(rebuilt.tm_functions, system.tm_functions, strict=True):
        assert left.allclose(right, 0.0)


def test_backward_shift_at_origin_is_coefficient_shift() -> None:
    f = SliceSeries(np.arange(20, dtype=float).reshape(5, 4))
    shifted = backward_shift(f, ORIGIN)
    assert np.array_equal(shifted.coeffs[:-1], f.coeffs[1:])
    assert np.array_equal(shifted.coeffs[-1], np.zeros(4))


def test_backward_shift_reconstruction(param: BallPoint) -> None:
    rng = np.random.default_rng(17)
    f = SliceSeries(rng.standard_normal((N + 1, 4)) * 0.8 ** np.arange(N + 1)[:, None])
    kernel = szego_kernel(param, N)
    projection = inner_product(f, kernel)
    shifted = backward_shift(f, param)
    rebuilt = kernel.right_mul(projection) + star_mul(blaschke_factor(param, N), shifted)
    assert np.max(np.abs(rebuilt.coeffs[:N] - f.coeffs[:N])) < 1e-9 * f.norm()
    assert shifted.norm() == pytest.approx(reduced_remainder_norm(f, param), rel=1e-10)


def test_backward_shift_annihilates_kernel(param: BallPoint) -> None:
    kernel = szego_kernel(param, N)
    assert backward_shift(kernel, param).norm() < 1e-12
