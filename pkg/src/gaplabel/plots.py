"""Figure rendering for report artifacts.  Everything goes straight to files
through the Agg backend; no interactive windows."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .jacobi import ScanResult, SpectralReport


def _shade_gaps(ax, gaps, vertical: bool = True):
    for g in gaps:
        if vertical:
            ax.axvspan(g.lo, g.hi, color="tab:orange", alpha=0.25, lw=0)
        else:
            ax.axhspan(g.lo, g.hi, color="tab:orange", alpha=0.25, lw=0)


def render_ids_figure(path, energies, ids_values, report: SpectralReport | None = None):
    """IDS staircase with detected gaps shaded and labelled."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.step(energies, ids_values, where="post", lw=1.0, color="tab:blue")
    if report is not None:
        _shade_gaps(ax, report.gaps)
        for g in report.gaps:
            ax.annotate(f"{g.label:.4f}", ((g.lo + g.hi) / 2, g.label),
                        textcoords="offset points", xytext=(0, 6),
                        ha="center", fontsize=8)
    ax.set_xlabel("E")
    ax.set_ylabel("k(E)")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title("integrated density of states")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_spectrum_figure(path, report: SpectralReport):
    """Eigenvalues against their rank, with gaps shaded on the energy axis."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    eigs = np.sort(report.eigenvalues)
    ax.plot(eigs, np.arange(1, eigs.size + 1) / eigs.size,
            ".", ms=2, color="tab:blue")
    _shade_gaps(ax, report.gaps)
    for g in report.gaps:
        status = g.verdict.status if g.verdict else "unverified"
        ax.annotate(f"{g.label:.4f} ({status})", ((g.lo + g.hi) / 2, g.label),
                    textcoords="offset points", xytext=(0, 6),
                    ha="center", fontsize=8)
    ax.set_xlabel("E")
    ax.set_ylabel("rank / N")
    ax.set_title(f"truncation spectrum, N = {report.size} ({report.boundary})")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_scan_figure(path, scan: ScanResult):
    """Width of each tracked gap across the size schedule."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if not scan.tracked:
        ax.text(0.5, 0.5, "no candidate gaps", ha="center", va="center",
                transform=ax.transAxes)
    for t in scan.tracked:
        ns = sorted(t.intervals)
        widths = [t.intervals[n][1] - t.intervals[n][0] for n in ns]
        style = "-o" if t.status == "PERSISTENT" else "--x"
        lab = f"label {t.labels[max(ns)]:.4f} [{t.status}]"
        ax.plot(ns, widths, style, label=lab)
    ax.set_xlabel("truncation size N")
    ax.set_ylabel("gap width")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_title("candidate gaps across the size schedule")
    if scan.tracked:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
