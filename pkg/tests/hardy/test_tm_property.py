from __future__ import annotations

import numpy as np
import pytest

from src.algebra.sliceseries import star_mul
from src.hardy.blaschke import backward_shift, blaschke_factor, tm_system
from src.hardy.space import inner_product, szego_kernel
from src.synthesis import random_ball_points, random_series

pytestmark = pytest.mark.afd_property

ORDER = 256


@pytest.fixture(params=[0, 1])
def rng(request: pytest.FixtureRequest) -> np.random.Generator:
    return np.random.default_rng(2000 + request.param)


def test_tm_gram_is_identity(rng: np.random.Generator) -> None:
    for count in (1, 5, 12):
        params = random_ball_points(rng, count, 0.9)
        assert tm_system(params, ORDER).gram_deviation() < 1e-8


def test_tm_gram_with_repeated_parameters(rng: np.random.Generator) -> None:
    a, b = random_ball_points(rng, 2, 0.8)
    assert tm_system([a, a, b, a], ORDER).gram_deviation() < 1e-8


def test_blaschke_multiplication_is_isometric(rng: np.random.Generator) -> None:
    for a in random_ball_points(rng, 5, 0.9):
        f = random_series(rng, ORDER, degree=20)
        product = star_mul(blaschke_factor(a, ORDER), f)
        assert product.norm() == pytest.approx(f.norm(), rel=1e-9)


def test_shift_energy_identity(rng: np.random.Generator) -> None:
    for a in random_ball_points(rng, 10, 0.9):
        f = random_series(rng, ORDER, decay=0.9)
        projection = inner_product(f, szego_kernel(a, ORDER)).norm()
        shifted = backward_shift(f, a).norm()
        assert shifted**2 == pytest.approx(f.norm() ** 2 - projection**2, abs=1e-10 * f.norm() ** 2)
