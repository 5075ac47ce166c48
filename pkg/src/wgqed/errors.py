"""Exception types shared across the package."""


class WaveguideError(Exception):
    """Base class for every domain error raised by this package."""


class NoOpenChannel(WaveguideError):
    """Energy lies below every mode cutoff; nothing propagates."""


class CutoffSingularity(WaveguideError):
    """Energy sits within ``CUTOFF_EPSILON`` of a mode cutoff, where the
    on-shell density of states (and with it the decay rate) diverges."""


class Evanescent(WaveguideError):
    """The requested mode does not propagate at this energy."""


class NonConvergence(WaveguideError):
    """A quadrature or root refinement exhausted its budget before
    meeting the requested tolerance."""


class PoleOutsideDomain(WaveguideError):
    """A principal-value pole must lie strictly inside the interval."""


class TruncationTooSmall(WaveguideError):
    """The level-shift mode truncation would exclude an open channel."""


class OutOfSingleChannelWindow(WaveguideError):
    """Energy is outside the single-channel window between the first and
    second cutoffs."""


class DimensionMismatch(WaveguideError):
    """Channel-vector length does not match the open channels at its energy."""


class UnknownPreset(WaveguideError):
    """No bundled figure preset goes by the requested name."""


class ConfigError(WaveguideError):
    """Invalid command-line or config-file input."""
