"""Figure rendering for report outputs.

Each CLI run that produces a table also renders a PNG next to it, so a
report directory is readable at a glance. Figures are a convenience layer:
the CSV stays the canonical artifact and never depends on this module.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_FLOOR = 1e-18  # keeps log axes alive when residuals hit exact zero


def save_age_rate(path, labels, rates) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(rates)), rates, color="tab:blue")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("mean reading drift")
    ax.set_title("Clock drift per prepared state")
    ax.axhline(0.0, color="black", lw=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_delta_sums(path, deltas, magnitudes, n_points) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy(deltas, np.maximum(np.abs(magnitudes), _FLOOR), "o", ms=4)
    ax.axhline(n_points, color="tab:red", lw=0.8, label=f"grid size {n_points}")
    ax.set_xlabel("label offset")
    ax.set_ylabel("|phase sum|")
    ax.set_title("Grid phase sums by label offset")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_trajectory(path, grid, norms, infidelities) -> None:
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 5), sharex=True)
    ax1.semilogy(grid, np.maximum(np.abs(infidelities), _FLOOR), "o-", ms=3)
    ax1.set_ylabel("infidelity")
    ax1.set_title("Conditioned state vs unitary evolution")
    ax2.plot(grid, norms - 1.0, "o-", ms=3, color="tab:green")
    ax2.set_ylabel("norm - 1")
    ax2.set_xlabel("clock reading")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_born(path, grid, conditional_by_outcome, born_by_outcome) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    for outcome, cond in sorted(conditional_by_outcome.items()):
        ax.plot(grid, cond, "o", ms=3, label=f"conditioned, outcome {outcome}")
        ax.plot(grid, born_by_outcome[outcome], "-", lw=1)
    ax.set_xlabel("clock reading")
    ax.set_ylabel("probability")
    ax.set_title("Conditioned probabilities (dots) vs Born values (lines)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_entropy(path, grid, entropy, mutual_information=None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(grid, entropy, "o-", ms=3, label="observer entropy")
    if mutual_information is not None:
        ax.plot(grid, mutual_information, "s--", ms=3, label="mutual information")
    ax.axhline(np.log(2.0), color="tab:red", lw=0.8, ls=":", label="ln 2")
    ax.set_xlabel("clock reading")
    ax.set_ylabel("nats")
    ax.set_title("Entanglement growth along the clock grid")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_derivative_orders(path, h_values, residuals, order) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.loglog(h_values, np.maximum(residuals, _FLOOR), "o-", label="measured")
    ref = residuals[0] * (np.asarray(h_values) / h_values[0]) ** 2
    ax.loglog(h_values, ref, "--", lw=1, label="slope 2 reference")
    ax.set_xlabel("step h")
    ax.set_ylabel("defect")
    ax.set_title(f"Derivative check, measured order {order:.3f}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
