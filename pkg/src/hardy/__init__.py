"""Slice Hardy space: inner products, Szego kernels, Blaschke products and TM systems."""

from .blaschke import (
    TMSystem,
    backward_shift,
    blaschke_eval,
    blaschke_factor,
    blaschke_product,
    blaschke_product_eval,
    tm_system,
)
from .space import (
    ORIGIN,
    BallPoint,
    QuadratureEstimate,
    boundary_coefficients,
    inner_product,
    inner_product_quadrature,
    project_boundary_samples,
    slice_inner_product,
    szego_kernel,
    szego_projection,
)

__all__ = [
    "BallPoint",
    "ORIGIN",
    "QuadratureEstimate",
    "TMSystem",
    "backward_shift",
    "blaschke_eval",
    "blaschke_factor",
    "blaschke_product",
    "blaschke_product_eval",
    "boundary_coefficients",
    "inner_product",
    "inner_product_quadrature",
    "project_boundary_samples",
    "slice_inner_product",
    "szego_kernel",
    "szego_projection",
    "tm_system",
]
