"""Single-photon scattering by a two-level emitter in a rectangular
waveguide with many transverse TM channels.

Energies are dimensionless multiples of pi*c/a, where a is the wide
transverse dimension.  The package computes mode cutoffs and couplings,
the emitter self-energy (level shift + decay rate), resonance energies,
the controllable-channel decomposition of the open channels, and full
reflection/transmission spectra, with a CLI that writes CSV/JSON tables
and PNG plots.
"""
from __future__ import annotations

from .errors import (
    ConfigError,
    CutoffSingularity,
    DimensionMismatch,
    Evanescent,
    NoOpenChannel,
    NonConvergence,
    OutOfSingleChannelWindow,
    PoleOutsideDomain,
    TruncationTooSmall,
    UnknownPreset,
    WaveguideError,
)
from .modes import (
    Channel,
    ChannelSet,
    CouplingConfig,
    ModeOrdering,
    OrderingPolicy,
    TmMode,
    WaveguideContext,
    WaveguideGeometry,
    channel_set,
    cutoff_frequency,
    enumerate_modes,
    make_context,
    mode_sign,
    wavenumber_at_energy,
)
from .physical import (
    FrequencyConvention,
    PhysicalSizing,
    cutoff_report,
    midgap_energy,
    physical_sizing,
)
from .scattering import (
    ChannelDecomposition,
    ChannelVector,
    ScatterOutcome,
    TransportSummary,
    cc_vector,
    channel_decomposition,
    s_matrix_element,
    scatter,
    sfc_basis,
    single_mode_reflection,
    transport_summary,
)
from .self_energy import (
    ResonanceResult,
    SelfEnergyValue,
    TlsParams,
    delta,
    delta_contributions,
    gamma,
    resonance_energies,
    self_energy,
)
from .spectra import (
    CcIncidence,
    ModeIncidence,
    Peak,
    ScanSpec,
    SpectrumRow,
    VectorIncidence,
    figure_curves,
    figure_preset,
    find_peaks,
    preset_names,
    scan,
)

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "ChannelDecomposition",
    "ChannelSet",
    "ChannelVector",
    "CcIncidence",
    "ConfigError",
    "CouplingConfig",
    "CutoffSingularity",
    "DimensionMismatch",
    "Evanescent",
    "FrequencyConvention",
    "ModeIncidence",
    "ModeOrdering",
    "NoOpenChannel",
    "NonConvergence",
    "OrderingPolicy",
    "OutOfSingleChannelWindow",
    "Peak",
    "PhysicalSizing",
    "PoleOutsideDomain",
    "ResonanceResult",
    "ScanSpec",
    "ScatterOutcome",
    "SelfEnergyValue",
    "SpectrumRow",
    "TlsParams",
    "TmMode",
    "TransportSummary",
    "TruncationTooSmall",
    "UnknownPreset",
    "VectorIncidence",
    "WaveguideContext",
    "WaveguideError",
    "WaveguideGeometry",
    "cc_vector",
    "channel_decomposition",
    "channel_set",
    "cutoff_frequency",
    "cutoff_report",
    "delta",
    "delta_contributions",
    "enumerate_modes",
    "figure_curves",
    "figure_preset",
    "find_peaks",
    "gamma",
    "make_context",
    "midgap_energy",
    "mode_sign",
    "physical_sizing",
    "preset_names",
    "resonance_energies",
    "s_matrix_element",
    "scan",
    "scatter",
    "self_energy",
    "sfc_basis",
    "single_mode_reflection",
    "transport_summary",
    "wavenumber_at_energy",
]
