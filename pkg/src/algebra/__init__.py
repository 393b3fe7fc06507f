"""Quaternion arithmetic and slice regular power series."""

from .quat import (
    DomainError,
    Quaternion,
    SlicePoint,
    UnitImaginary,
    imaginary_from_angles,
    qinv,
    qmul,
    slice_decompose,
)
from .sliceseries import (
    DEFAULT_TRUNC_ORDER,
    SliceSeries,
    TwistedPoint,
    TwistUndefinedError,
    ZeroSetError,
    eval_reciprocal_star,
    eval_star_pointwise,
    evaluate,
    evaluate_many,
    regular_conj,
    regular_reciprocal,
    slice_extension_eval,
    star_mul,
    symmetrize,
    twist_point,
)

__all__ = [
    "DEFAULT_TRUNC_ORDER",
    "DomainError",
    "Quaternion",
    "SlicePoint",
    "SliceSeries",
    "TwistUndefinedError",
    "TwistedPoint",
    "UnitImaginary",
    "ZeroSetError",
    "eval_reciprocal_star",
    "eval_star_pointwise",
    "evaluate",
    "evaluate_many",
    "imaginary_from_angles",
    "qinv",
    "qmul",
    "regular_conj",
    "regular_reciprocal",
    "slice_decompose",
    "slice_extension_eval",
    "star_mul",
    "symmetrize",
    "twist_point",
]
