"""Translate the dimensionless model to physical waveguide dimensions.

Internally energies are measured in units of pi*c/a (a = wide transverse
dimension), so a dimensionless value x maps to

    ordinary frequency   f     = x * c / (2a)      [Hz]
    angular frequency    omega = x * pi * c / a    [rad/s]

Solving for the geometry: a = x*c/(2f) or a = x*pi*c/omega, b = a/r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .modes import ModeOrdering, WaveguideGeometry, cutoff_frequency

SPEED_OF_LIGHT = 299_792_458.0  # m/s


class FrequencyConvention(str, Enum):
    ORDINARY = "ordinary"  # f in Hz
    ANGULAR = "angular"    # omega in rad/s


@dataclass(frozen=True)
class PhysicalSizing:
    """Waveguide dimensions realizing a target frequency for a chosen
    dimensionless energy (the emitter frequency by default)."""

    target: float
    convention: FrequencyConvention
    dimensionless_energy: float
    a_m: float
    b_m: float

    @property
    def a_cm(self) -> float:
        return self.a_m * 100.0

    @property
    def b_cm(self) -> float:
        return self.b_m * 100.0


def midgap_energy(geometry: WaveguideGeometry | None = None) -> float:
    """Halfway between the two lowest coupled-mode cutoffs."""
    geom = geometry or WaveguideGeometry()
    return (cutoff_frequency(1, 1, geom) + cutoff_frequency(3, 1, geom)) / 2.0


def physical_sizing(
    target: float,
    convention: FrequencyConvention = FrequencyConvention.ORDINARY,
    geometry: WaveguideGeometry | None = None,
    dimensionless_energy: float | None = None,
) -> PhysicalSizing:
    """Size the waveguide so the given dimensionless energy lands on the
    target frequency."""
    geom = geometry or WaveguideGeometry()
    if target <= 0.0:
        raise ValueError("target frequency must be positive")
    x = midgap_energy(geom) if dimensionless_energy is None else dimensionless_energy
    if x <= 0.0:
        raise ValueError("dimensionless energy must be positive")
    if convention is FrequencyConvention.ORDINARY:
        a = x * SPEED_OF_LIGHT / (2.0 * target)
    else:
        a = x * math.pi * SPEED_OF_LIGHT / target
    return PhysicalSizing(
        target=target,
        convention=convention,
        dimensionless_energy=x,
        a_m=a,
        b_m=a / geom.aspect_ratio,
    )


@dataclass(frozen=True)
class CutoffRow:
    m: int
    n: int
    dimensionless: float
    frequency_hz: float
    angular_rad_s: float


def cutoff_report(sizing: PhysicalSizing, ordering: ModeOrdering) -> list[CutoffRow]:
    """Physical cutoff frequencies of the ordering's modes for a sizing,
    in both conventions."""
    rows = []
    for mode in ordering.modes:
        f = mode.cutoff * SPEED_OF_LIGHT / (2.0 * sizing.a_m)
        rows.append(
            CutoffRow(
                m=mode.m,
                n=mode.n,
                dimensionless=mode.cutoff,
                frequency_hz=f,
                angular_rad_s=2.0 * math.pi * f,
            )
        )
    return rows
