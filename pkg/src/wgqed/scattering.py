"""Single-photon scattering off the emitter: rank-one channel map,
controllable-channel decomposition, and on-shell S-matrix elements.

At a fixed energy with open channels j, the emitter couples to exactly one
direction in channel space,

    w_j = g_onshell_j * sqrt(rho_j),      |w|**2 = gamma(E) / (2*pi),

so scattering is rank one: with cc = w / |w| (sign fixed to make the first
entry positive), denominator D(E) = E - omega_a - delta(E) + i*gamma(E),
and overlap c = <cc, incident>,

    phi_left  = -(i*gamma / D) * c * cc          (reflected amplitudes)
    phi_right = incident + phi_left              (transmitted amplitudes)

which conserves probability exactly.  Every unit vector orthogonal to cc
is scattering-free: it passes the emitter untouched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, Evanescent, OutOfSingleChannelWindow
from .modes import ChannelSet, TmMode, WaveguideContext
from .self_energy import DEFAULT_N_MODES_LAMB, SelfEnergyValue, TlsParams, self_energy


@dataclass(frozen=True)
class ChannelVector:
    """Complex amplitudes over the open channels at one energy, ordered as
    in the active mode ordering."""

    energy: float
    amplitudes: tuple[complex, ...]

    def __post_init__(self) -> None:
        if len(self.amplitudes) == 0:
            raise ValueError("channel vector needs at least one amplitude")
        object.__setattr__(
            self, "amplitudes", tuple(complex(a) for a in self.amplitudes)
        )

    def as_array(self) -> np.ndarray:
        return np.asarray(self.amplitudes, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def normalized(self) -> ChannelVector:
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize a zero channel vector")
        return ChannelVector(self.energy, tuple(a / n for a in self.amplitudes))

    @classmethod
    def incident(cls, energy: float, amplitudes) -> ChannelVector:
        """Construct and normalize an incident vector."""
        return cls(energy, tuple(amplitudes)).normalized()

    @classmethod
    def basis(cls, energy: float, size: int, index: int) -> ChannelVector:
        """Single-mode incidence: 1 in the given open-channel slot."""
        if not 0 <= index < size:
            raise ValueError(f"basis index {index} out of range for size {size}")
        amps = [0j] * size
        amps[index] = 1.0 + 0j
        return cls(energy, tuple(amps))


def _coupling_direction(channels: ChannelSet) -> np.ndarray:
    w = np.array(
        [ch.g_onshell * math.sqrt(ch.rho) for ch in channels.channels], dtype=float
    )
    if w[0] < 0.0:
        w = -w
    return w / np.linalg.norm(w)


def cc_vector(energy: float, ctx: WaveguideContext) -> ChannelVector:
    """The controllable channel: unit vector along the on-shell couplings
    weighted by sqrt(rho), real with positive first entry."""
    w = _coupling_direction(ctx.channel_set(energy))
    return ChannelVector(energy, tuple(complex(x) for x in w))


@dataclass(frozen=True)
class ChannelDecomposition:
    cc: ChannelVector
    sfc_basis: tuple[ChannelVector, ...]


def channel_decomposition(energy: float, ctx: WaveguideContext) -> ChannelDecomposition:
    """cc plus a deterministic orthonormal basis of its complement.

    The scattering-free vectors are columns 2..n of the Householder
    reflection exchanging e_1 with cc, so the whole frame is orthonormal
    and reproducible to the sign convention of that reflection.
    """
    w = _coupling_direction(ctx.channel_set(energy))
    n = w.size
    cc = ChannelVector(energy, tuple(complex(x) for x in w))
    if n == 1:
        return ChannelDecomposition(cc, ())
    v = -w
    v[0] += 1.0  # v = e_1 - cc
    vnorm2 = float(np.dot(v, v))
    basis = []
    if vnorm2 < 1e-30:  # cc coincides with e_1; complement is the rest of the frame
        for i in range(1, n):
            col = np.zeros(n)
            col[i] = 1.0
            basis.append(col)
    else:
        for i in range(1, n):
            col = -(2.0 * v[i] / vnorm2) * v
            col[i] += 1.0
            basis.append(col)
    return ChannelDecomposition(
        cc,
        tuple(ChannelVector(energy, tuple(complex(x) for x in col)) for col in basis),
    )


def sfc_basis(energy: float, ctx: WaveguideContext) -> tuple[ChannelVector, ...]:
    """Scattering-free channels: orthonormal complement of cc."""
    return channel_decomposition(energy, ctx).sfc_basis


@dataclass(frozen=True)
class ScatterOutcome:
    phi_right: ChannelVector
    phi_left: ChannelVector
    #: Emitter excitation amplitude <cc, incident> * sqrt(gamma/(2*pi)) / D.
    u_e: complex


def _denominator(energy: float, omega_a: float, se: SelfEnergyValue) -> complex:
    return complex(energy - omega_a - se.delta, se.gamma)


def _rank_one_outcome(
    incident: ChannelVector,
    cc: ChannelVector,
    se: SelfEnergyValue,
    omega_a: float,
) -> ScatterOutcome:
    if len(incident.amplitudes) != len(cc.amplitudes):
        raise DimensionMismatch(
            f"incident vector has {len(incident.amplitudes)} amplitudes but "
            f"{len(cc.amplitudes)} channels are open at E={incident.energy!r}"
        )
    energy = incident.energy
    d = _denominator(energy, omega_a, se)
    cc_arr = cc.as_array()
    inc = incident.as_array()
    overlap = complex(np.vdot(cc_arr, inc))
    left = (-1j * se.gamma / d) * overlap * cc_arr
    right = inc + left
    u_e = overlap * math.sqrt(se.gamma / (2.0 * math.pi)) / d
    return ScatterOutcome(
        phi_right=ChannelVector(energy, tuple(right)),
        phi_left=ChannelVector(energy, tuple(left)),
        u_e=complex(u_e),
    )


def scatter(
    incident: ChannelVector,
    tls: TlsParams,
    ctx: WaveguideContext,
    n_modes_lamb: int = DEFAULT_N_MODES_LAMB,
) -> ScatterOutcome:
    """Scatter a right-moving incident channel vector off the emitter."""
    channels = ctx.channel_set(incident.energy)
    if len(incident.amplitudes) != len(channels):
        raise DimensionMismatch(
            f"incident vector has {len(incident.amplitudes)} amplitudes but "
            f"{len(channels)} channels are open at E={incident.energy!r}"
        )
    se = self_energy(incident.energy, ctx, n_modes_lamb)
    cc = ChannelVector(incident.energy, tuple(
        complex(x) for x in _coupling_direction(channels)
    ))
    return _rank_one_outcome(incident, cc, se, tls.omega_a)


def single_mode_reflection(
    energy: float,
    tls: TlsParams,
    ctx: WaveguideContext,
    n_modes_lamb: int = DEFAULT_N_MODES_LAMB,
) -> complex:
    """Reflection amplitude -i*gamma/D in the single-channel window
    between the first and second cutoffs."""
    cutoffs = ctx.ordering.cutoffs()
    if not cutoffs:
        raise OutOfSingleChannelWindow("ordering contains no modes")
    hi = cutoffs[1] if len(cutoffs) > 1 else math.inf
    if not cutoffs[0] < energy < hi:
        raise OutOfSingleChannelWindow(
            f"E={energy!r} outside single-channel window ({cutoffs[0]!r}, {hi!r})"
        )
    se = self_energy(energy, ctx, n_modes_lamb)
    return -1j * se.gamma / _denominator(energy, tls.omega_a, se)


def _open_index(channels: ChannelSet, mode) -> int:
    mn = mode.indices if isinstance(mode, TmMode) else (int(mode[0]), int(mode[1]))
    idx = channels.index_of(*mn)
    if idx is None:
        raise Evanescent(f"mode {mn} is not an open channel at E={channels.energy!r}")
    return idx


def s_matrix_element(
    mode_out,
    k_out_sign: int,
    mode_in,
    energy: float,
    tls: TlsParams,
    ctx: WaveguideContext,
    n_modes_lamb: int = DEFAULT_N_MODES_LAMB,
) -> complex:
    """On-shell S-matrix element between open modes.

    ``k_out_sign`` +1 keeps the propagation direction (transmission side),
    -1 reverses it (reflection side).  Modes may be TmMode objects or
    (m, n) index pairs.  Columns over all incoming modes reproduce
    ``scatter`` applied to the corresponding basis vectors.
    """
    if k_out_sign not in (1, -1):
        raise ValueError(f"k_out_sign must be +1 or -1, got {k_out_sign!r}")
    channels = ctx.channel_set(energy)
    j_out = _open_index(channels, mode_out)
    j_in = _open_index(channels, mode_in)
    se = self_energy(energy, ctx, n_modes_lamb)
    d = _denominator(energy, tls.omega_a, se)
    ch_out = channels.channels[j_out]
    ch_in = channels.channels[j_in]
    amp = (
        -2j
        * math.pi
        * math.sqrt(ch_out.rho * ch_in.rho)
        * ch_out.g_onshell
        * ch_in.g_onshell
        / d
    )
    if j_out == j_in and k_out_sign == 1:
        amp += 1.0
    return complex(amp)


@dataclass(frozen=True)
class ChannelTransport:
    mode: TmMode
    reflected: float
    transmitted: float


@dataclass(frozen=True)
class TransportSummary:
    per_channel: tuple[ChannelTransport, ...]
    total_reflection: float
    total_transmission: float
    #: 1 - R_i - T_i for single-mode incidence in open channel i, else None.
    loss_from_incident_channel: float | None


def transport_summary(
    outcome: ScatterOutcome,
    incident: ChannelVector,
    ctx: WaveguideContext,
) -> TransportSummary:
    """Per-channel and total reflection/transmission probabilities."""
    channels = ctx.channel_set(incident.energy)
    n = len(channels)
    if not (len(incident.amplitudes) == len(outcome.phi_left.amplitudes) == n):
        raise DimensionMismatch(
            f"vector lengths do not match the {n} open channels "
            f"at E={incident.energy!r}"
        )
    refl = np.abs(outcome.phi_left.as_array()) ** 2
    trans = np.abs(outcome.phi_right.as_array()) ** 2
    per = tuple(
        ChannelTransport(ch.mode, float(r), float(t))
        for ch, r, t in zip(channels.channels, refl, trans)
    )
    nonzero = [j for j, a in enumerate(incident.amplitudes) if a != 0]
    loss = None
    if len(nonzero) == 1:
        j = nonzero[0]
        loss = float(
            abs(incident.amplitudes[j]) ** 2 - refl[j] - trans[j]
        )
    return TransportSummary(
        per_channel=per,
        total_reflection=float(refl.sum()),
        total_transmission=float(trans.sum()),
        loss_from_incident_channel=loss,
    )
