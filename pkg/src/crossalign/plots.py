"""Figure rendering for the report paths.

Every CLI command that writes a delimited report can also drop PNG
figures next to it (disable with --no-figures). Rendering is headless
(Agg) and deterministic: fixed size, fixed dpi, no timestamps.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

FIG_SIZE = (6.0, 4.0)
DPI = 120


def _save(fig, path: Path | str) -> None:
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def save_recall_bars(report, path: Path | str) -> None:
    """Bar chart of Recall@K for each cutoff, with mAP in the title."""
    ks = sorted(report.recall_at_k.keys())
    values = [report.recall_at_k[k] for k in ks]
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    ax.bar([str(k) for k in ks], values, color="#4878cf")
    ax.set_xlabel("K")
    ax.set_ylabel("Recall@K")
    ax.set_ylim(0.0, 1.05)
    ax.set_title(f"Retrieval quality (mAP = {report.map_score:.4f})")
    for x, v in enumerate(values):
        ax.text(x, v + 0.01, f"{v:.3f}", ha="center", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def save_rank_histogram(report, path: Path | str) -> None:
    """Histogram of each query's best relevant rank (log-spaced bins)."""
    import numpy as np

    ranks = np.array([r.best_rank for r in report.per_query])
    top = max(int(ranks.max()), 2)
    bins = np.unique(np.round(np.logspace(0, np.log10(top), 24)).astype(int))
    fig, ax = plt.subplots(figsize=FIG_SIZE)
    ax.hist(ranks, bins=bins, color="#6acc65", edgecolor="black", linewidth=0.4)
    ax.set_xscale("log")
    ax.set_xlabel("rank of first relevant hit")
    ax.set_ylabel("queries")
    ax.set_title("Best-hit rank distribution")
    fig.tight_layout()
    _save(fig, path)


def save_correlation_heatmap(corr, path: Path | str, title: str = "Pairwise Pearson correlation") -> None:
    """Symmetric heatmap of a correlation matrix on a fixed [-1, 1] scale."""
    fig, ax = plt.subplots(figsize=(5.0, 4.2))
    im = ax.imshow(corr, vmin=-1.0, vmax=1.0, cmap="RdBu_r")
    ax.set_title(title)
    ax.set_xlabel("dimension")
    ax.set_ylabel("dimension")
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    _save(fig, path)


def save_history_curves(history, path: Path | str) -> None:
    """Training curves: objective plus per-domain components by epoch."""
    epochs = [r.epoch for r in history]
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.6))
    axes[0].plot(epochs, [r.objective for r in history], marker="o", ms=3)
    axes[0].set_xlabel("epoch")
    axes[0].set_ylabel("objective")
    axes[0].set_title("Minimized objective")
    axes[1].plot(epochs, [r.infomax_s for r in history], label="infomax (synthetic)")
    axes[1].plot(epochs, [r.infomax_e for r in history], label="infomax (exemplar)")
    axes[1].plot(epochs, [r.reg for r in history], label="regularizer", ls="--")
    axes[1].set_xlabel("epoch")
    axes[1].set_title("Components")
    axes[1].legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)
