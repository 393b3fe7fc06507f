"""Deterministic signal fixtures used by the CLI, the verify suites and the tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

Quad = tuple[float, float, float, float]


@dataclass(frozen=True)
class AtomSpec:
    """Kernel parameter ``b`` and right coefficient ``c`` of one atom ``e_b c``."""

    point: Quad
    coeff: Quad


@dataclass(frozen=True)
class SignalScenario:
    """A named signal, given either by atoms or by power-series coefficients."""

    slug: str
    label: str
    description: str
    trunc_order: int
    atoms: tuple[AtomSpec, ...] = ()
    coeffs: tuple[Quad, ...] = ()

    @property
    def kind(self) -> str:
        return "atoms" if self.atoms else "coeffs"

    def to_spec(self) -> dict[str, Any]:
        """Return the signal in the CLI input format."""
        if self.atoms:
            return {
                "kind": "atoms",
                "trunc_order": self.trunc_order,
                "atoms": [
                    {"point": list(atom.point), "coeff": list(atom.coeff)} for atom in self.atoms
                ],
            }
        return {
            "kind": "coeffs",
            "trunc_order": self.trunc_order,
            "coeffs": [list(c) for c in self.coeffs],
        }


def _build_scenarios() -> dict[str, SignalScenario]:
    """Return the catalogue of baked-in signals."""

    single_atom = SignalScenario(
        slug="single_atom",
        label="Single atom",
        description="One normalised kernel at 0.4e1 + 0.2e2 with unit coefficient.",
        trunc_order=256,
        atoms=(AtomSpec(point=(0.0, 0.4, 0.2, 0.0), coeff=(1.0, 0.0, 0.0, 0.0)),),
    )

    quaternionic_atom = SignalScenario(
        slug="quaternionic_atom",
        label="Quaternionic atom",
        description="Off-axis kernel with a non-real coefficient; exercises the twist.",
        trunc_order=256,
        atoms=(AtomSpec(point=(0.3, -0.2, 0.1, 0.4), coeff=(0.5, -0.25, 0.75, 0.1)),),
    )

    cross_slice_pair = SignalScenario(
        slug="cross_slice_pair",
        label="Cross-slice pair",
        description="Two atoms on different slices; no single slice contains both.",
        trunc_order=256,
        atoms=(
            AtomSpec(point=(0.1, 0.5, 0.0, 0.0), coeff=(1.0, 0.0, 0.0, 0.0)),
            AtomSpec(point=(-0.2, 0.0, 0.0, 0.45), coeff=(0.0, 0.0, 0.6, 0.0)),
        ),
    )

    five_atoms = SignalScenario(
        slug="five_atoms",
        label="Five atoms",
        description="Five atoms spread across the ball with mixed coefficients.",
        trunc_order=256,
        atoms=(
            AtomSpec(point=(0.5, 0.1, 0.0, -0.2), coeff=(1.0, 0.0, 0.0, 0.0)),
            AtomSpec(point=(-0.3, 0.2, 0.4, 0.0), coeff=(0.0, 0.7, 0.0, 0.0)),
            AtomSpec(point=(0.0, -0.6, 0.0, 0.3), coeff=(0.2, 0.0, -0.4, 0.0)),
            AtomSpec(point=(0.1, 0.0, -0.1, 0.0), coeff=(0.0, 0.0, 0.0, 0.9)),
            AtomSpec(point=(-0.4, -0.3, 0.2, 0.2), coeff=(-0.3, 0.1, 0.1, 0.1)),
        ),
    )

    fourier_polynomial = SignalScenario(
        slug="fourier_polynomial",
        label="Fourier polynomial",
        description="Low-degree polynomial with quaternion coefficients.",
        trunc_order=64,
        coeffs=(
            (1.0, 0.0, 0.0, 0.0),
            (0.0, 0.5, 0.0, 0.0),
            (0.0, 0.0, 0.25, 0.0),
            (0.0, 0.0, 0.0, 0.125),
        ),
    )

    constant = SignalScenario(
        slug="constant",
        label="Constant",
        description="Constant quaternion; selected parameter is the origin.",
        trunc_order=32,
        coeffs=((0.5, 0.5, 0.5, 0.5),),
    )

    zero = SignalScenario(
        slug="zero",
        label="Zero",
        description="The zero series; decomposition takes no steps.",
        trunc_order=16,
        coeffs=((0.0, 0.0, 0.0, 0.0),),
    )

    return {
        scenario.slug: scenario
        for scenario in (
            single_atom,
            quaternionic_atom,
            cross_slice_pair,
            five_atoms,
            fourier_polynomial,
            constant,
            zero,
        )
    }


SCENARIOS = _build_scenarios()
