"""Render spectra and self-energy scans to PNG files (headless backend)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .spectra import ScanSpec, SpectrumRow


def _cutoff_lines(ax, spec: ScanSpec) -> None:
    for c in spec.context().ordering.cutoffs():
        if spec.e_min < c < spec.e_max:
            ax.axvline(c, color="0.7", linestyle="--", linewidth=0.8, zorder=0)


def plot_reflectance(
    curves: list[tuple[str, ScanSpec, list[SpectrumRow]]],
    path: str | Path,
    title: str = "",
) -> Path:
    """Draw total reflectance vs energy for one or more labelled curves."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for label, spec, rows in curves:
        good = [r for r in rows if r.ok]
        ax.plot([r.energy for r in good], [r.total_r for r in good],
                linewidth=1.2, label=label)
    if curves:
        _cutoff_lines(ax, curves[0][1])
    ax.set_xlabel("energy  [pi c / a]")
    ax.set_ylabel("total reflectance")
    ax.set_ylim(-0.02, 1.05)
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def plot_self_energy(
    rows: list[SpectrumRow],
    path: str | Path,
    title: str = "",
) -> Path:
    """Two stacked panels: level shift and decay rate vs energy."""
    good = [r for r in rows if r.ok]
    energies = [r.energy for r in good]
    fig, (ax_d, ax_g) = plt.subplots(2, 1, sharex=True, figsize=(7.0, 5.0))
    ax_d.plot(energies, [r.delta for r in good], linewidth=1.2, color="tab:blue")
    ax_d.axhline(0.0, color="0.8", linewidth=0.8)
    ax_d.set_ylabel("level shift")
    ax_g.plot(energies, [r.gamma for r in good], linewidth=1.2, color="tab:red")
    ax_g.set_ylabel("decay rate")
    ax_g.set_xlabel("energy  [pi c / a]")
    if title:
        ax_d.set_title(title)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
