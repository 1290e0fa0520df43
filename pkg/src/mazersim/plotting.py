"""File-output matplotlib rendering for sweep, beam and peak reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

AXIS_LABELS = {
    "kappa_L": r"$\kappa L$",
    "delta_over_g": r"$\delta/g$",
    "k_over_kappa": r"$k/\kappa$",
}


def save_sweep_plot(table, path, fields=("P_em", "T_total")):
    """One panel, one line per requested probability column."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for name in fields:
        ax.plot(table.coordinates, table.column(name), lw=1.0, label=name)
    ax.set_xlabel(AXIS_LABELS.get(table.axis, table.axis))
    ax.set_ylabel("probability")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_jc_plot(table, jc_values, path):
    """Model curve as a line, fast-atom reference as sparse dots."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(table.coordinates, table.P_em, lw=1.0, label="full motion")
    stride = max(1, len(table) // 60)
    ax.plot(table.coordinates[::stride], np.asarray(jc_values)[::stride],
            "o", ms=3.5, label="classical transit")
    ax.set_xlabel(AXIS_LABELS.get(table.axis, table.axis))
    ax.set_ylabel(r"$P_{em}$")
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_beam_plot(initial, final, path):
    """Initial and filtered wavenumber distributions, separate scales."""
    fig, (ax0, ax1) = plt.subplots(2, 1, figsize=(7.0, 5.6), sharex=True)
    ax0.plot(initial.grid, initial.weights, lw=1.0)
    ax0.set_ylabel(r"$\mathcal{P}_i$")
    ax1.plot(final.grid, final.weights, lw=1.0, color="C3")
    ax1.set_ylabel(r"$\mathcal{P}_f$")
    ax1.set_xlabel(r"$k/\kappa$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_peaks_plot(table, peaks, path, field="P_em"):
    """Sweep curve with located peak tops marked."""
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(table.coordinates, table.column(field), lw=0.9)
    if peaks:
        ax.plot([p.position for p in peaks], [p.amplitude for p in peaks],
                "v", ms=6, color="C1")
    ax.set_xlabel(AXIS_LABELS.get(table.axis, table.axis))
    ax.set_ylabel(field)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
