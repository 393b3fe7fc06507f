"""Seeded invariant suites behind the ``verify`` subcommand.

Each suite returns :class:`PropertyResult` rows with the worst deviation seen and the
tolerance it is held to.  Seeds are fixed so repeated runs print identical reports.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np

from src.afd.config import SearchConfig
from src.afd.decompose import afd_decompose
from src.afd.rate import check_recurrence, rate_report
from src.algebra.quat import (
    Quaternion,
    hamilton,
    imaginary_from_angles,
    norm_array,
    slice_decompose,
)
from src.algebra.sliceseries import (
    SliceSeries,
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
from src.hardy.blaschke import (
    backward_shift,
    blaschke_eval_array,
    blaschke_factor,
    tm_system,
)
from src.hardy.space import (
    BallPoint,
    boundary_circle,
    inner_product,
    inner_product_quadrature,
    project_boundary_samples,
    szego_kernel,
)
from src.synthesis import (
    random_atomic_signal,
    random_ball_points,
    random_series,
    random_unit_imaginary,
)

SUITE_NAMES = ("algebra", "kernels", "tm", "shift", "afd", "rate")
ALL_SUITES = "all"

# Smaller grid for multi-step runs inside the suites.
_LOOP_SEARCH = SearchConfig(radial_levels=12, sphere_points=256)
AFD_ENERGY_TOL = 1e-10


@dataclass(frozen=True)
class SuiteSizes:
    """Case counts for the suites; the defaults are the release-gate sizes."""

    series_cases: int = 1000
    pointwise_cases: int = 100
    kernel_cases: int = 100
    quadrature_pairs: int = 50
    quadrature_theta: int = 32
    tm_lists: int = 20
    shift_cases: int = 100
    atom_recoveries: int = 3
    afd_signals: int = 20
    afd_iters: int = 100
    rate_signals: int = 10
    rate_iters: int = 50
    recurrence_sequences: int = 100


FULL = SuiteSizes()
QUICK = SuiteSizes(
    series_cases=100,
    pointwise_cases=20,
    kernel_cases=20,
    quadrature_pairs=5,
    quadrature_theta=16,
    tm_lists=5,
    shift_cases=20,
    atom_recoveries=1,
    afd_signals=2,
    rate_signals=2,
    rate_iters=12,
    recurrence_sequences=20,
)


@dataclass(frozen=True)
class PropertyResult:
    suite: str
    name: str
    passed: bool
    worst_deviation: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status} {self.suite}.{self.name} "
            f"worst={self.worst_deviation:.3e} tol={self.tolerance:.1e}"
        )


def _result(suite: str, name: str, deviations: Iterable[float], tolerance: float) -> PropertyResult:
    worst = max((float(d) for d in deviations), default=0.0)
    passed = math.isfinite(worst) and worst <= tolerance
    return PropertyResult(suite, name, passed, worst, tolerance)


def _max_abs(a: SliceSeries, b: SliceSeries) -> float:
    order = max(a.trunc_order, b.trunc_order)
    return float(np.max(np.abs(a.resize(order).coeffs - b.resize(order).coeffs)))


def _one(order: int) -> SliceSeries:
    return SliceSeries.constant(1.0, order)


# ----------------------------------------------------------------------
# Suites
# ----------------------------------------------------------------------
def algebra_suite(seed: int = 0, sizes: SuiteSizes = FULL) -> list[PropertyResult]:
    rng = np.random.default_rng(11 + seed)
    suite = "algebra"
    results: list[PropertyResult] = []

    p = rng.standard_normal((10_000, 4))
    q = rng.standard_normal((10_000, 4))
    r = rng.standard_normal((10_000, 4))
    norms = norm_array(hamilton(p, q))
    expected = norm_array(p) * norm_array(q)
    relative = np.abs(norms - expected) / expected
    results.append(_result(suite, "norm_multiplicative", relative, 1e-12))
    assoc = hamilton(hamilton(p, q), r) - hamilton(p, hamilton(q, r))
    results.append(_result(suite, "qmul_associative", np.max(np.abs(assoc), axis=1), 1e-12))
    distrib = hamilton(p, q + r) - hamilton(p, q) - hamilton(p, r)
    results.append(_result(suite, "qmul_distributive", np.max(np.abs(distrib), axis=1), 1e-12))

    points = rng.uniform(-1.0, 1.0, (1000, 4))
    reassembly = []
    for row in points:
        rebuilt = slice_decompose(Quaternion.from_array(row)).reassemble()
        reassembly.append(float(np.max(np.abs(rebuilt.as_array() - row))))
    results.append(_result(suite, "slice_reassembly", reassembly, 1e-15))

    angles = np.linspace(0.0, np.pi, 9)
    squares = []
    for t1 in angles:
        for t2 in angles:
            unit = imaginary_from_angles(float(t1), float(t2)).as_quaternion()
            squares.append((unit * unit + 1.0).norm())
    results.append(_result(suite, "imaginary_square", squares, 1e-14))

    order = 64
    assoc_dev, conj_dev, sym_dev, sym_imag, recip_dev = [], [], [], [], []
    for _ in range(sizes.series_cases):
        f, g, h = (random_series(rng, order, decay=0.9) for _ in range(3))
        assoc_dev.append(_max_abs(star_mul(star_mul(f, g), h), star_mul(f, star_mul(g, h))))
        conj_dev.append(
            _max_abs(regular_conj(star_mul(f, g)), star_mul(regular_conj(g), regular_conj(f)))
        )
        direct = star_mul(f, regular_conj(f))
        sym_imag.append(float(np.max(np.abs(direct.coeffs[:, 1:]))))
        sym_dev.append(_max_abs(symmetrize(f), star_mul(regular_conj(f), f)))
    for _ in range(sizes.series_cases):
        f = random_series(rng, order, decay=0.3, min_constant=2.0)
        inverse = regular_reciprocal(f)
        recip_dev.append(_max_abs(star_mul(f, inverse), _one(order)))
        recip_dev.append(_max_abs(star_mul(inverse, f), _one(order)))
    results.append(_result(suite, "star_associative", assoc_dev, 1e-11))
    results.append(_result(suite, "conj_reverses_products", conj_dev, 1e-10))
    results.append(_result(suite, "symmetrization_real", sym_imag, 1e-12))
    results.append(_result(suite, "symmetrization_two_sided", sym_dev, 1e-12))
    results.append(_result(suite, "reciprocal_two_sided", recip_dev, 1e-10))

    twist_dev, star_dev, ext_dev = [], [], []
    for _ in range(sizes.pointwise_cases):
        f = random_series(rng, order, degree=8)
        g = random_series(rng, order, degree=8)
        point = random_ball_points(rng, 1, 0.8)[0].value
        twisted = twist_point(f, point).twisted
        twist_dev.append(abs(twisted.w - point.w))
        twist_dev.append(abs(np.linalg.norm(twisted.vector) - np.linalg.norm(point.vector)))
        expected_q = evaluate(star_mul(f, g), point)
        star_dev.append((eval_star_pointwise(f, g, point) - expected_q).norm())
        unit_i = random_unit_imaginary(rng)
        unit_j = random_unit_imaginary(rng)
        radius = 0.9 * math.sqrt(rng.random())
        angle = rng.uniform(0.0, math.pi)
        x, y = radius * math.cos(angle), radius * math.sin(angle)
        direct_value = evaluate(f, Quaternion.real(x) + unit_j.as_quaternion() * y)
        ext_dev.append((slice_extension_eval(f, x, y, unit_i, unit_j) - direct_value).norm())
    results.append(_result(suite, "twist_same_sphere", twist_dev, 1e-12))
    results.append(_result(suite, "star_pointwise_matches_series", star_dev, 1e-9))
    results.append(_result(suite, "slice_extension", ext_dev, 1e-10))
    return results


def kernels_suite(seed: int = 0, sizes: SuiteSizes = FULL) -> list[PropertyResult]:
    rng = np.random.default_rng(12 + seed)
    suite = "kernels"
    results: list[PropertyResult] = []
    order = 256

    reproducing, kernel_norm, schwarz, symmetry = [], [], [], []
    for a in random_ball_points(rng, sizes.kernel_cases, 0.9):
        f = random_series(rng, order, decay=0.9)
        g = random_series(rng, order, decay=0.9)
        kernel = szego_kernel(a, order)
        value = inner_product(f, kernel) - evaluate(f, a.value) * math.sqrt(1.0 - a.modulus**2)
        reproducing.append(value.norm() / f.norm())
        kernel_norm.append(abs(kernel.norm() - 1.0))
        fg = inner_product(f, g)
        schwarz.append(max(fg.norm() ** 2 - f.norm() ** 2 * g.norm() ** 2, 0.0))
        symmetry.append((fg - inner_product(g, f).conj()).norm())
    results.append(_result(suite, "reproducing_property", reproducing, 1e-10))
    results.append(_result(suite, "kernel_normalised", kernel_norm, 1e-12))
    results.append(_result(suite, "cauchy_schwarz", schwarz, 1e-12))
    results.append(_result(suite, "conjugate_symmetry", symmetry, 1e-12))

    quad_order = 64
    oracle, slice_spread = [], []
    for _ in range(sizes.quadrature_pairs):
        f = random_series(rng, quad_order, decay=0.9)
        g = random_series(rng, quad_order, decay=0.9)
        estimate = inner_product_quadrature(f, g, 2 * quad_order + 2, sizes.quadrature_theta)
        oracle.append((estimate.value - inner_product(f, g)).norm())
        slice_spread.append(estimate.max_slice_deviation)
    results.append(_result(suite, "quadrature_oracle", oracle, 1e-8))
    results.append(_result(suite, "slice_independence", slice_spread, 1e-10))

    unimodular, zeros, series_match = [], [], []
    for a in random_ball_points(rng, 16, 0.95):
        unit = random_unit_imaginary(rng)
        boundary = blaschke_eval_array(a.as_array(), boundary_circle(unit, 16))
        unimodular.extend(np.abs(norm_array(boundary) - 1.0))
        zeros.append(float(norm_array(blaschke_eval_array(a.as_array(), a.as_array()[None, :]))[0]))
    for a in random_ball_points(rng, 20, 0.9):
        series = blaschke_factor(a, order)
        point = random_ball_points(rng, 1, 0.8)[0].value
        closed = blaschke_eval_array(a.as_array(), point.as_array()[None, :])[0]
        series_match.append(float(np.max(np.abs(evaluate(series, point).as_array() - closed))))
    results.append(_result(suite, "blaschke_unimodular", unimodular, 1e-12))
    results.append(_result(suite, "blaschke_zero", zeros, 1e-12))
    results.append(_result(suite, "blaschke_series_match", series_match, 1e-9))

    projection = []
    for _ in range(10):
        f = random_series(rng, 32)
        unit = random_unit_imaginary(rng)
        samples = boundary_circle(unit, 128)
        recovered = project_boundary_samples(evaluate_many(f, samples), unit, 32)
        projection.append(_max_abs(recovered, f))
    results.append(_result(suite, "szego_projection_recovers", projection, 1e-10))
    return results


def tm_suite(seed: int = 0, sizes: SuiteSizes = FULL) -> list[PropertyResult]:
    rng = np.random.default_rng(13 + seed)
    suite = "tm"
    order = 256
    results: list[PropertyResult] = []

    gram = []
    for _ in range(sizes.tm_lists):
        count = int(rng.integers(1, 21))
        params = random_ball_points(rng, count, 0.9)
        gram.append(tm_system(params, order).gram_deviation())
    for _ in range(5):
        a, b = random_ball_points(rng, 2, 0.8)
        gram.append(tm_system([a, a, b, a], order).gram_deviation())
    results.append(_result(suite, "gram_identity", gram, 1e-8))

    origin = BallPoint(Quaternion())
    fourier = tm_system([origin] * 8, 16)
    fourier_dev = [
        _max_abs(t, SliceSeries.monomial(k, 1.0, 16)) for k, t in enumerate(fourier.tm_functions)
    ]
    results.append(_result(suite, "fourier_basis", fourier_dev, 1e-15))

    isometry = []
    for a in random_ball_points(rng, 50, 0.9):
        f = random_series(rng, order, degree=20)
        isometry.append(abs(star_mul(blaschke_factor(a, order), f).norm() - f.norm()))
    results.append(_result(suite, "blaschke_isometry", isometry, 1e-9))
    return results


def shift_suite(seed: int = 0, sizes: SuiteSizes = FULL) -> list[PropertyResult]:
    rng = np.random.default_rng(14 + seed)
    suite = "shift"
    order = 256
    reconstruction, energy = [], []
    for a in random_ball_points(rng, sizes.shift_cases, 0.9):
        f = random_series(rng, order, decay=0.9)
        kernel = szego_kernel(a, order)
        projection = inner_product(f, kernel)
        shifted = backward_shift(f, a)
        rebuilt = kernel.right_mul(projection) + star_mul(blaschke_factor(a, order), shifted)
        diff = np.abs(rebuilt.coeffs[:order] - f.coeffs[:order])
        reconstruction.append(float(np.max(diff)) / f.norm())
        expected = f.norm() ** 2 - projection.norm() ** 2
        energy.append(abs(shifted.norm() ** 2 - expected) / f.norm() ** 2)

    classical = []
    for _ in range(10):
        f = random_series(rng, 32)
        shifted = backward_shift(f, BallPoint(Quaternion()))
        classical.append(float(np.max(np.abs(shifted.coeffs[:-1] - f.coeffs[1:]))))
    return [
        _result(suite, "shift_reconstruction", reconstruction, 1e-9),
        _result(suite, "shift_energy", energy, 1e-10),
        _result(suite, "classical_shift", classical, 0.0),
    ]


def afd_suite(seed: int = 0, sizes: SuiteSizes = FULL) -> list[PropertyResult]:
    rng = np.random.default_rng(15 + seed)
    suite = "afd"
    order = 256
    default_cfg = SearchConfig()

    param_error, one_step = [], []
    for _ in range(sizes.atom_recoveries):
        signal = random_atomic_signal(rng, 1, 0.8)
        atom = signal.atoms[0]
        f = signal.synthesize(order)
        state = afd_decompose(f, 1, 0.0, default_cfg)
        selected = state.tm.params[0].as_array()
        param_error.append(float(np.linalg.norm(selected - atom.point.as_array())))
        one_step.append(state.remainder_norms[-1] / state.signal_norm)

    energy, monotone, lemma, orthogonal, converged = [], [], [], [], []
    for _ in range(sizes.afd_signals):
        f = random_series(rng, order, degree=4)
        state = afd_decompose(f, sizes.afd_iters, AFD_ENERGY_TOL, _LOOP_SEARCH)
        total = f.norm() ** 2
        converged.append(state.remainder_norms[-1] ** 2 / (AFD_ENERGY_TOL * total))
        captured = np.cumsum(state.energies)
        for k, norm in enumerate(state.remainder_norms[1:]):
            energy.append(abs(total - captured[k] - norm**2) / total)
        steps = np.diff(state.remainder_norms)
        monotone.append(float(max(np.max(steps, initial=0.0), 0.0)) / f.norm())
        lemma.extend(dev / f.norm() for dev in state.lemma_deviations)
        for tm_function in state.tm.tm_functions:
            orthogonal.append(inner_product(state.std_remainder, tm_function).norm() / f.norm())

    return [
        _result(suite, "one_atom_parameter", param_error, 1e-4),
        _result(suite, "one_atom_remainder", one_step, 1e-6),
        _result(suite, "energy_identity", energy, 1e-9),
        _result(suite, "remainders_non_increasing", monotone, 1e-12),
        _result(suite, "coefficient_identity", lemma, 1e-8),
        _result(suite, "residual_orthogonal", orthogonal, 1e-8),
        _result(suite, "converges_within_max_iters", converged, 1.0),
    ]


def rate_suite(seed: int = 0, sizes: SuiteSizes = FULL) -> list[PropertyResult]:
    rng = np.random.default_rng(16 + seed)
    suite = "rate"
    ratios, norm_excess = [], []
    for _ in range(sizes.rate_signals):
        count = int(rng.integers(1, 11))
        signal = random_atomic_signal(rng, count, 0.8)
        report = rate_report(signal, sizes.rate_iters, _LOOP_SEARCH)
        ratios.append(report.worst_ratio)
        norm_excess.append(max(report.signal_norm - report.certificate, 0.0))

    recurrence = []
    for _ in range(sizes.recurrence_sequences):
        bound_constant = float(rng.uniform(0.1, 10.0))
        d = [bound_constant * float(rng.random())]
        for _ in range(49):
            d.append(d[-1] * (1.0 - d[-1] / bound_constant) * float(rng.uniform(0.5, 1.0)))
        check = check_recurrence(d, bound_constant)
        recurrence.append(0.0 if check.hypothesis_holds and check.bound_holds else math.inf)
    return [
        _result(suite, "remainder_within_bound", ratios, 1.0),
        _result(suite, "norm_within_certificate", norm_excess, 0.0),
        _result(suite, "recurrence_lemma", recurrence, 0.0),
    ]


SUITES: dict[str, Callable[[int, SuiteSizes], list[PropertyResult]]] = {
    "algebra": algebra_suite,
    "kernels": kernels_suite,
    "tm": tm_suite,
    "shift": shift_suite,
    "afd": afd_suite,
    "rate": rate_suite,
}


def run_suite(name: str, seed: int = 0, *, quick: bool = False) -> list[PropertyResult]:
    """Run one suite by name, or every suite for ``all``; ``seed`` offsets the base seeds.

    ``quick`` swaps the release-gate case counts for the much smaller :data:`QUICK` ones.
    """
    sizes = QUICK if quick else FULL
    if name == ALL_SUITES:
        return [result for suite in SUITE_NAMES for result in SUITES[suite](seed, sizes)]
    try:
        runner = SUITES[name]
    except KeyError as exc:
        raise ValueError(f"Unknown verify suite: {name}") from exc
    return runner(seed, sizes)


__all__ = [
    "ALL_SUITES",
    "FULL",
    "QUICK",
    "PropertyResult",
    "SUITES",
    "SUITE_NAMES",
    "SuiteSizes",
    "run_suite",
]
