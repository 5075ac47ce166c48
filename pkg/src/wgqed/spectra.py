"""Reflectance/transmittance spectra over energy windows, with the preset
scan configurations used for the standard plots.

A scan walks a uniform energy grid, builds the incident channel vector at
each point, scatters it, and records total reflection R, total
transmission T, loss 1-R-T, the self-energy pair (delta, gamma), and the
open-channel count.  Grid points where the configuration is singular
(cutoff crossings, a requested mode not yet open, ...) are kept as flagged
rows with empty numeric fields rather than silently dropped.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .errors import (
    CutoffSingularity,
    DimensionMismatch,
    Evanescent,
    NoOpenChannel,
    TruncationTooSmall,
    UnknownPreset,
)
from .modes import (
    CouplingConfig,
    OrderingPolicy,
    WaveguideContext,
    WaveguideGeometry,
    cutoff_frequency,
    make_context,
)
from .scattering import (
    ChannelVector,
    _rank_one_outcome,
    cc_vector,
    transport_summary,
)
from .self_energy import TlsParams, self_energy


@dataclass(frozen=True)
class ModeIncidence:
    """Unit amplitude in one transverse mode (must be open)."""

    m: int = 1
    n: int = 1

    def build(self, energy: float, ctx: WaveguideContext) -> ChannelVector:
        channels = ctx.channel_set(energy)
        idx = channels.index_of(self.m, self.n)
        if idx is None:
            raise Evanescent(
                f"mode ({self.m},{self.n}) closed at E={energy!r}"
            )
        return ChannelVector.basis(energy, len(channels), idx)

    def label(self) -> str:
        return f"tm{self.m}{self.n}"


@dataclass(frozen=True)
class CcIncidence:
    """Incidence along the controllable channel at each energy."""

    def build(self, energy: float, ctx: WaveguideContext) -> ChannelVector:
        return cc_vector(energy, ctx)

    def label(self) -> str:
        return "cc"


@dataclass(frozen=True)
class VectorIncidence:
    """Fixed amplitude pattern over the open channels (renormalized)."""

    amplitudes: tuple[complex, ...]

    def build(self, energy: float, ctx: WaveguideContext) -> ChannelVector:
        return ChannelVector.incident(energy, self.amplitudes)

    def label(self) -> str:
        return "vector"


Incidence = ModeIncidence | CcIncidence | VectorIncidence


@dataclass(frozen=True)
class ScanSpec:
    """Everything needed to compute one spectrum."""

    e_min: float
    e_max: float
    points: int = 4000
    incident: Incidence = field(default_factory=ModeIncidence)
    tls: TlsParams = field(
        default_factory=lambda: TlsParams(omega_a=(_OMEGA_1 + _OMEGA_2) / 2.0)
    )
    coupling: CouplingConfig = field(default_factory=CouplingConfig)
    geometry: WaveguideGeometry = field(default_factory=WaveguideGeometry)
    ordering_policy: OrderingPolicy = OrderingPolicy.FIGURE
    #: None selects per-energy truncation at the open-channel count.
    n_modes_lamb: int | None = None

    def __post_init__(self) -> None:
        if not self.e_min < self.e_max:
            raise ValueError("scan needs e_min < e_max")
        if self.points < 2:
            raise ValueError("scan needs at least 2 points")

    def context(self) -> WaveguideContext:
        return make_context(
            g_squared=self.coupling.g_squared,
            policy=self.ordering_policy,
            e_max=self.e_max,
            aspect_ratio=self.geometry.aspect_ratio,
        )

    def energies(self) -> list[float]:
        step = (self.e_max - self.e_min) / (self.points - 1)
        return [self.e_min + i * step for i in range(self.points)]


@dataclass(frozen=True)
class SpectrumRow:
    energy: float
    total_r: float | None
    total_t: float | None
    loss: float | None
    delta: float | None
    gamma: float | None
    open_count: int | None
    flag: str | None = None

    @property
    def ok(self) -> bool:
        return self.flag is None


def _scan_row(
    energy: float,
    ctx: WaveguideContext,
    spec: ScanSpec,
) -> SpectrumRow:
    try:
        incident = spec.incident.build(energy, ctx)
        n_lamb = spec.n_modes_lamb
        if n_lamb is None:
            n_lamb = ctx.open_count(energy)
        se = self_energy(energy, ctx, n_lamb)
        outcome = _rank_one_outcome(
            incident, cc_vector(energy, ctx), se, spec.tls.omega_a
        )
        summary = transport_summary(outcome, incident, ctx)
    except CutoffSingularity:
        return SpectrumRow(energy, None, None, None, None, None, None, "cutoff")
    except NoOpenChannel:
        return SpectrumRow(
            energy, None, None, None, None, None, None, "no-open-channel"
        )
    except Evanescent:
        return SpectrumRow(energy, None, None, None, None, None, None, "mode-closed")
    except DimensionMismatch:
        return SpectrumRow(
            energy, None, None, None, None, None, None, "dimension-mismatch"
        )
    except TruncationTooSmall:
        return SpectrumRow(energy, None, None, None, None, None, None, "truncation")
    return SpectrumRow(
        energy=energy,
        total_r=summary.total_reflection,
        total_t=summary.total_transmission,
        loss=1.0 - summary.total_reflection - summary.total_transmission,
        delta=se.delta,
        gamma=se.gamma,
        open_count=se.open_count,
    )


def scan(spec: ScanSpec, threads: int = 1) -> list[SpectrumRow]:
    """Compute the spectrum row by row.

    With ``threads > 1`` rows are evaluated in a thread pool; results are
    assembled in grid order so the output is identical to a serial run.
    """
    ctx = spec.context()
    energies = spec.energies()
    if threads <= 1:
        return [_scan_row(e, ctx, spec) for e in energies]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda e: _scan_row(e, ctx, spec), energies))


@dataclass(frozen=True)
class Peak:
    energy: float
    value: float


def find_peaks(
    rows: list[SpectrumRow],
    min_height: float = 0.0,
) -> list[Peak]:
    """Strict local maxima of total_r, refined by fitting a parabola
    through each maximum and its neighbours.

    Flagged rows and open-channel-count changes break the grid into
    separate runs, so three points are never compared across a cutoff —
    the spectrum is discontinuous there (R jumps toward 1 as a channel
    opens) and a maximum straddling the jump is a sampling artifact, not
    a resonance.  The parabolic vertex is used only when it falls within
    half a grid step of the top sample — true for any quadratic — since
    a larger shift means the three points do not look locally quadratic
    and the vertex value would be an extrapolation artifact.
    """
    runs: list[list[SpectrumRow]] = [[]]
    for r in rows:
        if not r.ok:
            if runs[-1]:
                runs.append([])
            continue
        if runs[-1] and runs[-1][-1].open_count != r.open_count:
            runs.append([])
        runs[-1].append(r)
    peaks: list[Peak] = []
    for run in runs:
        for i in range(1, len(run) - 1):
            y0, y1, y2 = run[i - 1].total_r, run[i].total_r, run[i + 1].total_r
            if not (y1 > y0 and y1 > y2):
                continue
            if y1 < min_height:
                continue
            x0, x1, x2 = run[i - 1].energy, run[i].energy, run[i + 1].energy
            e_pk, v_pk = x1, y1
            denom = y0 - 2.0 * y1 + y2
            if denom < 0.0:
                h = (x2 - x0) / 2.0
                shift = 0.5 * (y0 - y2) / denom
                if abs(shift) <= 0.5000001:
                    e_pk = x1 + shift * h
                    v_pk = y1 - 0.25 * (y0 - y2) * shift
            peaks.append(Peak(float(e_pk), float(v_pk)))
    return peaks


# --- preset scan configurations for the standard plots -------------------

_OMEGA_1 = cutoff_frequency(1, 1, WaveguideGeometry())   # sqrt(5)
_OMEGA_2 = cutoff_frequency(3, 1, WaveguideGeometry())   # sqrt(13)
_OMEGA_3 = cutoff_frequency(1, 3, WaveguideGeometry())   # sqrt(37)
_OMEGA_5 = cutoff_frequency(5, 3, WaveguideGeometry())   # sqrt(61)

#: Coupling sweep drawn for the single-channel presets.
FIG4_G2_SWEEP = (0.005, 0.01, 0.02)

_PRESETS: dict[str, ScanSpec] = {
    # Single open channel between the first two cutoffs.
    "fig4a": ScanSpec(
        e_min=_OMEGA_1,
        e_max=_OMEGA_2,
        tls=TlsParams(omega_a=(_OMEGA_1 + _OMEGA_2) / 2.0),
    ),
    # TM11 incidence with two channels open.
    "fig4b": ScanSpec(
        e_min=_OMEGA_2,
        e_max=_OMEGA_3,
        tls=TlsParams(omega_a=(_OMEGA_2 + _OMEGA_3) / 2.0),
    ),
    "fig5a_tm11": ScanSpec(
        e_min=_OMEGA_2,
        e_max=_OMEGA_3,
        tls=TlsParams(omega_a=(_OMEGA_2 + _OMEGA_3) / 2.0),
    ),
    "fig5a_cc": ScanSpec(
        e_min=_OMEGA_2,
        e_max=_OMEGA_3,
        incident=CcIncidence(),
        tls=TlsParams(omega_a=(_OMEGA_2 + _OMEGA_3) / 2.0),
    ),
    # Emitter frequency and coupling variations of the cc scan.
    "fig5b_A": ScanSpec(
        e_min=_OMEGA_2,
        e_max=_OMEGA_3,
        incident=CcIncidence(),
        tls=TlsParams(omega_a=0.8 * _OMEGA_2 + 0.2 * _OMEGA_3),
    ),
    "fig5b_B": ScanSpec(
        e_min=_OMEGA_2,
        e_max=_OMEGA_3,
        incident=CcIncidence(),
        tls=TlsParams(omega_a=(_OMEGA_2 + _OMEGA_3) / 2.0),
    ),
    "fig5b_C": ScanSpec(
        e_min=_OMEGA_2,
        e_max=_OMEGA_3,
        incident=CcIncidence(),
        tls=TlsParams(omega_a=(_OMEGA_2 + _OMEGA_3) / 2.0),
        coupling=CouplingConfig(g_squared=0.02),
    ),
    # Wide five-channel window.
    "fig6a": ScanSpec(
        e_min=_OMEGA_1,
        e_max=_OMEGA_5,
        incident=CcIncidence(),
        tls=TlsParams(omega_a=(_OMEGA_1 + _OMEGA_5) / 2.0),
    ),
    "fig6b": ScanSpec(
        e_min=_OMEGA_1,
        e_max=_OMEGA_5,
        incident=CcIncidence(),
        tls=TlsParams(omega_a=(_OMEGA_2 + _OMEGA_5) / 2.0),
        coupling=CouplingConfig(g_squared=0.02),
    ),
}

#: Group names expanding to several curves drawn on one figure.
_GROUPS: dict[str, tuple[str, ...]] = {
    "fig5a": ("fig5a_tm11", "fig5a_cc"),
    "fig5b": ("fig5b_A", "fig5b_B", "fig5b_C"),
}


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS) + tuple(_GROUPS)


def figure_preset(name: str) -> ScanSpec:
    """Look up a single preset scan."""
    try:
        return _PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; expected one of {', '.join(preset_names())}"
        ) from None


def figure_curves(name: str) -> list[tuple[str, ScanSpec]]:
    """Expand a preset or group name into labelled curves.

    The single-channel presets fig4a/fig4b expand into one curve per
    coupling strength in FIG4_G2_SWEEP; groups expand to their members;
    other names give a single curve.
    """
    if name in _GROUPS:
        return [(member, figure_preset(member)) for member in _GROUPS[name]]
    spec = figure_preset(name)
    if name in ("fig4a", "fig4b"):
        return [
            (f"{name}_g2_{g2:g}", replace(spec, coupling=CouplingConfig(g_squared=g2)))
            for g2 in FIG4_G2_SWEEP
        ]
    return [(name, spec)]
