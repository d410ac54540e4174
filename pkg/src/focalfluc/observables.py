"""Atom-scale observables driven by the mean squared electric field.

Near the focal line <E^2> = lambda_coeff / a^4 with a dimensionless
coefficient, and the induced-dipole potential V = -alpha <E^2> / 2 turns
that into measurable numbers: a beam deflection, an interferometer phase
shift, and (when the coefficient is positive) a trapping temperature.

The scaling formulas below are anchored at a sodium-atom reference point:
coefficient 1e-3, polarizability and mass of sodium, a = 1 micron,
flight time 1 ms.  They are implemented with their reference coefficients
(0.25, 0.04, 2e-9 K) rather than re-derived from SI constants; the
reference numbers are the testable claims.

The static-polarizability treatment needs the observation distance to
exceed the wavelength of the atom's first transition; that condition is
species-dependent and left to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "SODIUM_MASS_GRAMS",
    "SODIUM_POLARIZABILITY_CM3",
    "AtomParams",
    "ObservableInputs",
    "lambda_coefficient",
    "casimir_polder_potential",
    "beam_deflection",
    "interferometer_phase",
    "trap_temperature",
]

# sodium reference constants (Gaussian-unit polarizability)
SODIUM_MASS_GRAMS = 3.8e-23
SODIUM_POLARIZABILITY_CM3 = 3.0e-22


@dataclass(frozen=True)
class AtomParams:
    """Atom properties relative to the sodium reference."""

    polarizability_ratio: float = 1.0
    mass_ratio: float = 1.0

    def __post_init__(self):
        if not self.polarizability_ratio > 0.0:
            raise ValueError("polarizability ratio must be positive")
        if not self.mass_ratio > 0.0:
            raise ValueError("mass ratio must be positive")


@dataclass(frozen=True)
class ObservableInputs:
    """Field coefficient and experiment scales in the reference units."""

    lambda_coeff: float
    a_microns: float = 1.0
    t_millis: float = 1.0

    def __post_init__(self):
        if not self.a_microns > 0.0:
            raise ValueError("observation distance must be positive")
        if not self.t_millis > 0.0:
            raise ValueError("flight time must be positive")


def lambda_coefficient(e_squared_scaled: float) -> float:
    """Dimensionless field coefficient: a^4 <E^2> (identity on the scaled
    field value)."""
    return e_squared_scaled


def casimir_polder_potential(polarizability: float, e_squared: float) -> float:
    """Induced-dipole potential V = -alpha <E^2> / 2 in natural units.

    ``polarizability`` is the Gaussian-unit volume; the Lorentz-Heaviside
    value used internally is 4*pi times larger.  Positive <E^2> gives a
    negative potential: attraction toward the focus.
    """
    return -0.5 * (4.0 * math.pi * polarizability) * e_squared


def beam_deflection(inputs: ObservableInputs, atom: AtomParams) -> float:
    """Fractional transverse deflection of a beam skimming the focal line:
    0.25 at the sodium reference point, scaling with the sixth inverse
    power of distance and the square of flight time."""
    return (0.25
            * (inputs.lambda_coeff / 1e-3)
            * atom.polarizability_ratio
            / atom.mass_ratio
            * (1.0 / inputs.a_microns) ** 6
            * inputs.t_millis ** 2)


def interferometer_phase(inputs: ObservableInputs, atom: AtomParams) -> float:
    """Phase difference (radians) between an interferometer arm along the
    focal line and a distant reference arm: 0.04 at the reference point."""
    return (0.04
            * (inputs.lambda_coeff / 1e-3)
            * atom.polarizability_ratio
            * (1.0 / inputs.a_microns) ** 4
            * inputs.t_millis)


def trap_temperature(inputs: ObservableInputs, atom: AtomParams) -> float:
    """Temperature (kelvin) below which atoms stay trapped near the focus.

    Requires a positive field coefficient (attractive potential well);
    mirrors with half-angle beyond pi/2 provide one around the
    perpendicular direction.
    """
    if not inputs.lambda_coeff > 0.0:
        raise ValueError(
            "no trap: trapping needs a positive field coefficient, "
            f"got {inputs.lambda_coeff!r}")
    return (2e-9
            * (inputs.lambda_coeff / 1e-3)
            * atom.polarizability_ratio
            * (1.0 / inputs.a_microns) ** 4)
