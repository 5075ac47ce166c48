"""Waveguide geometry, TM modes, dispersion, and on-shell couplings.

Everything runs in dimensionless units with hbar = c = 1 and energies
measured in multiples of pi/a, where a is the wide transverse dimension.
The cutoff of TM mode (m, n) in a guide with aspect ratio r = a/b is then
sqrt(m**2 + r**2 * n**2), and a photon of energy E in an open mode carries
longitudinal wavenumber k = sqrt(E**2 - cutoff**2).

The emitter couples only to modes with both indices odd; the coupling
carries a parity sign sin(m*pi/2) * sin(n*pi/2) and an on-shell magnitude
proportional to cutoff / sqrt(E).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import CutoffSingularity, Evanescent, NoOpenChannel

#: On-shell operations reject energies closer than this (absolute, pi/a
#: units) to any cutoff in the active ordering: the per-channel density of
#: states grows like (E - cutoff)**-0.5 there.
CUTOFF_EPSILON = 1e-9


@dataclass(frozen=True)
class WaveguideGeometry:
    """Rectangular cross section a x b, described only by its aspect ratio
    a/b since the energy unit pi/a = 1 absorbs the overall scale."""

    aspect_ratio: float = 2.0

    def __post_init__(self) -> None:
        if not self.aspect_ratio > 0:
            raise ValueError(f"aspect_ratio must be positive, got {self.aspect_ratio!r}")


def mode_sign(m: int, n: int) -> int:
    """sin(m*pi/2) * sin(n*pi/2) evaluated exactly: 0 for any even index,
    otherwise +1 or -1."""
    if m % 2 == 0 or n % 2 == 0:
        return 0
    sign = 1 if ((m - 1) // 2) % 2 == 0 else -1
    if ((n - 1) // 2) % 2 == 1:
        sign = -sign
    return sign


def cutoff_frequency(m: int, n: int, geom: WaveguideGeometry) -> float:
    """Cutoff energy of TM mode (m, n) in pi/a units."""
    if m < 1 or n < 1:
        raise ValueError(f"mode indices must be >= 1, got ({m}, {n})")
    r = geom.aspect_ratio
    return math.sqrt(m * m + r * r * n * n)


@dataclass(frozen=True)
class TmMode:
    m: int
    n: int
    cutoff: float
    sign: int

    @classmethod
    def from_indices(cls, m: int, n: int, geom: WaveguideGeometry) -> TmMode:
        return cls(m, n, cutoff_frequency(m, n, geom), mode_sign(m, n))

    @property
    def indices(self) -> tuple[int, int]:
        return (self.m, self.n)


class OrderingPolicy(str, Enum):
    """How coupled modes are enumerated and indexed.

    PHYSICAL lists every coupled (odd, odd) mode in ascending cutoff order,
    breaking exact ties lexicographically by (m, n).  FIGURE is the fixed
    five-mode sequence used by the bundled figure presets; it deliberately
    skips coupled modes such as (5, 1) that the presets omit.
    """

    PHYSICAL = "physical"
    FIGURE = "figure"


#: The fixed mode list behind OrderingPolicy.FIGURE.
FIGURE_MODE_INDICES: tuple[tuple[int, int], ...] = (
    (1, 1),
    (3, 1),
    (1, 3),
    (3, 3),
    (5, 3),
)


@dataclass(frozen=True)
class ModeOrdering:
    policy: OrderingPolicy
    modes: tuple[TmMode, ...]

    def cutoffs(self) -> tuple[float, ...]:
        return tuple(mode.cutoff for mode in self.modes)

    def index_of(self, m: int, n: int) -> int | None:
        for j, mode in enumerate(self.modes):
            if mode.m == m and mode.n == n:
                return j
        return None


def enumerate_modes(
    geom: WaveguideGeometry,
    e_max: float,
    policy: OrderingPolicy | str = OrderingPolicy.PHYSICAL,
) -> ModeOrdering:
    """Enumerate coupled TM modes with cutoff <= e_max under the given policy."""
    if not e_max > 0:
        raise ValueError(f"e_max must be positive, got {e_max!r}")
    policy = OrderingPolicy(policy)
    if policy is OrderingPolicy.FIGURE:
        modes = [
            mode
            for mode in (TmMode.from_indices(m, n, geom) for m, n in FIGURE_MODE_INDICES)
            if mode.cutoff <= e_max
        ]
    else:
        modes = []
        m = 1
        while cutoff_frequency(m, 1, geom) <= e_max:
            n = 1
            while (cut := cutoff_frequency(m, n, geom)) <= e_max:
                modes.append(TmMode(m, n, cut, mode_sign(m, n)))
                n += 2
            m += 2
        modes.sort(key=lambda mode: (mode.cutoff, mode.m, mode.n))
    return ModeOrdering(policy, tuple(modes))


@dataclass(frozen=True)
class CouplingConfig:
    """Emitter-field coupling strength.

    ``g_squared`` is the square of the overall coupling constant
    g = d / sqrt(pi * A) built from the dipole moment d and the cross
    section area A; the figure presets sweep it directly.
    """

    g_squared: float = 0.01

    def __post_init__(self) -> None:
        if not self.g_squared > 0:
            raise ValueError(f"g_squared must be positive, got {self.g_squared!r}")

    @property
    def g(self) -> float:
        return math.sqrt(self.g_squared)

    @classmethod
    def from_dipole(cls, dipole: float, area: float) -> CouplingConfig:
        if not area > 0:
            raise ValueError("area must be positive")
        return cls(dipole * dipole / (math.pi * area))


def wavenumber_at_energy(mode: TmMode, energy: float) -> float:
    """Longitudinal wavenumber k = sqrt(E**2 - cutoff**2) of an open mode."""
    if energy <= mode.cutoff:
        raise Evanescent(
            f"mode ({mode.m}, {mode.n}) with cutoff {mode.cutoff:.6g} "
            f"does not propagate at E={energy:.6g}"
        )
    # factored form keeps full precision just above the cutoff
    return math.sqrt((energy - mode.cutoff) * (energy + mode.cutoff))


@dataclass(frozen=True)
class Channel:
    """An open mode at a fixed energy: wavenumber, density-of-states weight
    rho = E/k, and the on-shell coupling amplitude."""

    mode: TmMode
    k: float
    rho: float
    g_onshell: float


@dataclass(frozen=True)
class ChannelSet:
    energy: float
    channels: tuple[Channel, ...]

    def __len__(self) -> int:
        return len(self.channels)

    def index_of(self, m: int, n: int) -> int | None:
        for j, ch in enumerate(self.channels):
            if ch.mode.m == m and ch.mode.n == n:
                return j
        return None


def channel_set(
    energy: float,
    geom: WaveguideGeometry,
    coupling: CouplingConfig,
    ordering: ModeOrdering,
) -> ChannelSet:
    """All open channels at the given energy, in ordering sequence.

    Raises CutoffSingularity if the energy is within CUTOFF_EPSILON of any
    cutoff in the ordering, and NoOpenChannel below the lowest cutoff.
    """
    for mode in ordering.modes:
        if abs(energy - mode.cutoff) <= CUTOFF_EPSILON:
            raise CutoffSingularity(
                f"E={energy!r} is within {CUTOFF_EPSILON} of the ({mode.m}, {mode.n}) "
                f"cutoff {mode.cutoff!r}"
            )
    open_modes = [mode for mode in ordering.modes if mode.cutoff < energy]
    if not open_modes:
        raise NoOpenChannel(f"no open channel at E={energy!r}")
    g = coupling.g
    sqrt_e = math.sqrt(energy)
    chans = []
    for mode in open_modes:
        k = wavenumber_at_energy(mode, energy)
        chans.append(
            Channel(
                mode=mode,
                k=k,
                rho=energy / k,
                g_onshell=-g * mode.cutoff * mode.sign / sqrt_e,
            )
        )
    return ChannelSet(energy, tuple(chans))


@dataclass(frozen=True)
class WaveguideContext:
    """Geometry + coupling + mode ordering: the static data every
    scattering operation needs."""

    geom: WaveguideGeometry
    coupling: CouplingConfig
    ordering: ModeOrdering

    def channel_set(self, energy: float) -> ChannelSet:
        return channel_set(energy, self.geom, self.coupling, self.ordering)

    def open_count(self, energy: float) -> int:
        return sum(1 for mode in self.ordering.modes if mode.cutoff < energy)

    def nearest_cutoff_distance(self, energy: float) -> float:
        return min(abs(energy - mode.cutoff) for mode in self.ordering.modes)

    def assert_off_cutoff(self, energy: float) -> None:
        for mode in self.ordering.modes:
            if abs(energy - mode.cutoff) <= CUTOFF_EPSILON:
                raise CutoffSingularity(
                    f"E={energy!r} is within {CUTOFF_EPSILON} of the "
                    f"({mode.m}, {mode.n}) cutoff {mode.cutoff!r}"
                )


def make_context(
    g_squared: float = 0.01,
    policy: OrderingPolicy | str = OrderingPolicy.FIGURE,
    e_max: float = 8.0,
    aspect_ratio: float = 2.0,
) -> WaveguideContext:
    """Convenience constructor bundling the usual pieces."""
    geom = WaveguideGeometry(aspect_ratio)
    return WaveguideContext(
        geom=geom,
        coupling=CouplingConfig(g_squared),
        ordering=enumerate_modes(geom, e_max, policy),
    )
