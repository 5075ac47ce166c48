"""Geometry, cutoffs, orderings, and on-shell channel data."""
from __future__ import annotations

import math

import pytest

from wgqed import (
    Channel,
    CouplingConfig,
    CutoffSingularity,
    Evanescent,
    NoOpenChannel,
    OrderingPolicy,
    TmMode,
    WaveguideGeometry,
    channel_set,
    cutoff_frequency,
    enumerate_modes,
    make_context,
    mode_sign,
    wavenumber_at_energy,
)


def test_cutoff_values_aspect_two():
    geom = WaveguideGeometry(aspect_ratio=2.0)
    assert cutoff_frequency(1, 1, geom) == pytest.approx(math.sqrt(5), rel=1e-15)
    assert cutoff_frequency(3, 1, geom) == pytest.approx(math.sqrt(13), rel=1e-15)
    assert cutoff_frequency(1, 3, geom) == pytest.approx(math.sqrt(37), rel=1e-15)
    assert cutoff_frequency(3, 3, geom) == pytest.approx(math.sqrt(45), rel=1e-15)
    assert cutoff_frequency(5, 3, geom) == pytest.approx(math.sqrt(61), rel=1e-15)


def test_cutoff_other_aspect():
    geom = WaveguideGeometry(aspect_ratio=1.0)
    assert cutoff_frequency(1, 1, geom) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_mode_sign_parity_pattern():
    # only odd-odd modes couple; the sign alternates per odd pair
    assert mode_sign(1, 1) == 1
    assert mode_sign(3, 1) == -1
    assert mode_sign(1, 3) == -1
    assert mode_sign(3, 3) == 1
    assert mode_sign(5, 3) == -1
    assert mode_sign(5, 1) == 1
    assert mode_sign(7, 1) == -1
    assert mode_sign(2, 1) == 0
    assert mode_sign(1, 2) == 0
    assert mode_sign(4, 6) == 0


def test_geometry_validation():
    with pytest.raises(ValueError):
        WaveguideGeometry(aspect_ratio=0.0)
    with pytest.raises(ValueError):
        cutoff_frequency(0, 1, WaveguideGeometry())


def test_enumerate_modes_physical_ordering():
    ordering = enumerate_modes(WaveguideGeometry(), 8.0, OrderingPolicy.PHYSICAL)
    indices = [m.indices for m in ordering.modes]
    # (5,1) at sqrt(29) and (7,1) at sqrt(53) sit between the plot modes
    assert indices == [(1, 1), (3, 1), (5, 1), (1, 3), (3, 3), (7, 1), (5, 3)]
    cutoffs = ordering.cutoffs()
    assert cutoffs == tuple(sorted(cutoffs))
    assert all(mode_sign(m, n) != 0 for m, n in indices)


def test_enumerate_modes_tie_break_is_lexicographic():
    # (7,3) and (9,1) share cutoff sqrt(85); (7,3) must come first
    ordering = enumerate_modes(WaveguideGeometry(), 9.5, OrderingPolicy.PHYSICAL)
    indices = [m.indices for m in ordering.modes]
    i73 = indices.index((7, 3))
    i91 = indices.index((9, 1))
    assert ordering.modes[i73].cutoff == ordering.modes[i91].cutoff
    assert i73 < i91


def test_enumerate_modes_figure_ordering_is_the_fixed_five():
    ordering = enumerate_modes(WaveguideGeometry(), 8.0, OrderingPolicy.FIGURE)
    assert [m.indices for m in ordering.modes] == [
        (1, 1), (3, 1), (1, 3), (3, 3), (5, 3),
    ]


def test_ordering_index_of():
    ordering = enumerate_modes(WaveguideGeometry(), 8.0, OrderingPolicy.FIGURE)
    assert ordering.index_of(3, 1) == 1
    assert ordering.index_of(5, 1) is None


def test_wavenumber_and_evanescent():
    mode = TmMode.from_indices(1, 1, WaveguideGeometry())
    assert wavenumber_at_energy(mode, 3.0) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(Evanescent):
        wavenumber_at_energy(mode, 2.0)
    with pytest.raises(Evanescent):
        wavenumber_at_energy(mode, mode.cutoff)


def test_coupling_config():
    cfg = CouplingConfig(g_squared=0.04)
    assert cfg.g == pytest.approx(0.2, rel=1e-15)
    with pytest.raises(ValueError):
        CouplingConfig(g_squared=-1.0)
    derived = CouplingConfig.from_dipole(0.2, 2.0)
    assert derived.g_squared == pytest.approx(0.04 / (2.0 * math.pi), rel=1e-15)


def test_channel_set_at_five(ctx):
    channels = ctx.channel_set(5.0)
    assert len(channels) == 2
    ch1, ch2 = channels.channels
    assert ch1.mode.indices == (1, 1)
    assert ch2.mode.indices == (3, 1)
    assert ch1.k == pytest.approx(math.sqrt(20.0), rel=1e-15)
    assert ch2.k == pytest.approx(math.sqrt(12.0), rel=1e-15)
    assert ch1.rho == pytest.approx(5.0 / math.sqrt(20.0), rel=1e-15)
    # E = 5 makes sqrt(E) equal the first cutoff, so g_onshell = -g exactly
    assert ch1.g_onshell == pytest.approx(-0.1, abs=1e-16)
    assert ch2.g_onshell == pytest.approx(0.1 * math.sqrt(13.0 / 5.0), rel=1e-14)
    assert channels.index_of(3, 1) == 1
    assert channels.index_of(1, 3) is None


def test_channel_set_errors(ctx):
    with pytest.raises(NoOpenChannel):
        ctx.channel_set(2.0)
    with pytest.raises(CutoffSingularity):
        ctx.channel_set(math.sqrt(13))
    with pytest.raises(CutoffSingularity):
        ctx.channel_set(math.sqrt(37) + 2e-10)
    # applies to closed cutoffs too: E near a higher cutoff is singular
    with pytest.raises(CutoffSingularity):
        channel_set(
            math.sqrt(37),
            ctx.geom,
            ctx.coupling,
            ctx.ordering,
        )


def test_open_count_progression(ctx):
    assert ctx.open_count(2.0) == 0
    assert ctx.open_count(3.0) == 1
    assert ctx.open_count(5.0) == 2
    assert ctx.open_count(6.5) == 3
    assert ctx.open_count(7.0) == 4
    assert ctx.open_count(8.0) == 5


def test_make_context_defaults():
    c = make_context()
    assert c.coupling.g_squared == 0.01
    assert len(c.ordering.modes) == 5
    assert isinstance(c.channel_set(3.0).channels[0], Channel)
    assert c.nearest_cutoff_distance(3.0) == pytest.approx(
        min(3.0 - math.sqrt(5), math.sqrt(13) - 3.0), rel=1e-12
    )
