"""Figure rendering for command-line reports.

Every helper draws one figure to a file and returns the path. The Agg
backend is forced so rendering works headless; figures are a visual
companion to the delimited outputs, never the primary artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_roc_curve",
    "save_sweep_curve",
    "save_probability_lattice",
    "save_interval_plot",
    "save_inclusion_bars",
    "save_chain_trace",
    "save_benchmark_summary",
]

_META = {"Software": "vortess"}


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=130, metadata=_META)
    plt.close(fig)
    return path


def save_roc_curve(points, auc: float, path):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.plot(xs, ys, drawstyle="steps-post", color="#1f6f8b")
    ax.plot([0, 1], [0, 1], ls="--", lw=0.8, color="grey")
    ax.set_xlabel("false positive rate")
    ax.set_ylabel("true positive rate")
    ax.set_title("ROC (AUC = %.4f)" % auc)
    return _finish(fig, path)


def save_sweep_curve(parameters, accuracies, xlabel: str, path):
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.plot(parameters, accuracies, marker="o", color="#1f6f8b")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("test accuracy")
    ax.set_ylim(min(0.5, min(accuracies) - 0.05), 1.02)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def save_probability_lattice(grid_x, grid_y, probs, path, points=None, labels=None):
    """Heat map of class-1 probability over a rectangular lattice.

    ``probs`` has shape (len(grid_y), len(grid_x)). Optional training
    points are overlaid coloured by label.
    """
    fig, ax = plt.subplots(figsize=(5.0, 4.4))
    mesh = ax.pcolormesh(grid_x, grid_y, probs, vmin=0.0, vmax=1.0,
                         cmap="RdBu_r", shading="auto")
    fig.colorbar(mesh, ax=ax, label="P(class 1)")
    if points is not None:
        points = np.asarray(points)
        labels = np.asarray(labels)
        for value, colour in ((0, "#2040a0"), (1, "#a02020")):
            mask = labels == value
            ax.scatter(points[mask, 0], points[mask, 1], s=4, c=colour,
                       alpha=0.5, linewidths=0)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    return _finish(fig, path)


def save_interval_plot(p_hat, lo, hi, path, y_true=None):
    """Per-observation probability intervals, sorted by point estimate."""
    order = np.argsort(np.asarray(p_hat), kind="stable")
    p = np.asarray(p_hat)[order]
    lo = np.asarray(lo)[order]
    hi = np.asarray(hi)[order]
    xs = np.arange(p.size)
    fig, ax = plt.subplots(figsize=(6.5, 3.8))
    ax.vlines(xs, lo, hi, color="#9dbcd4", lw=1.0)
    if y_true is not None:
        colours = np.where(np.asarray(y_true)[order] == 1, "#a02020", "#2040a0")
        ax.scatter(xs, p, s=6, c=colours, zorder=3, linewidths=0)
    else:
        ax.scatter(xs, p, s=6, color="#20406a", zorder=3, linewidths=0)
    ax.set_xlabel("observation (sorted by estimate)")
    ax.set_ylabel("P(class 1)")
    ax.set_ylim(-0.02, 1.02)
    return _finish(fig, path)


def save_inclusion_bars(names, percentages, path):
    order = np.argsort(-np.asarray(percentages), kind="stable")
    names = [names[i] for i in order]
    values = np.asarray(percentages)[order]
    fig, ax = plt.subplots(figsize=(6.0, max(2.5, 0.3 * len(names))))
    ax.barh(np.arange(len(names)), values, color="#1f6f8b")
    ax.set_yticks(np.arange(len(names)))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("inclusion %")
    return _finish(fig, path)


def save_chain_trace(diagnostics, path):
    fig, axes = plt.subplots(2, 1, figsize=(6.0, 4.6), sharex=True)
    axes[0].plot(diagnostics.dim_counts.mean(axis=1), color="#1f6f8b", lw=0.8)
    axes[0].set_ylabel("mean dims")
    axes[1].plot(diagnostics.centre_counts.mean(axis=1), color="#8b1f2f", lw=0.8)
    axes[1].set_ylabel("mean centres")
    axes[1].set_xlabel("sweep")
    return _finish(fig, path)


def save_benchmark_summary(summary_rows, path):
    """Mean accuracy and AUC per dataset with reference markers."""
    names = [row["dataset"] for row in summary_rows]
    xs = np.arange(len(names))
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.8))
    panels = (
        ("accuracy", "mean_accuracy", "sd_accuracy", "reference_accuracy"),
        ("AUC", "mean_auc", "sd_auc", "reference_auc"),
    )
    for ax, (label, mean_key, sd_key, ref_key) in zip(axes, panels):
        means = [row[mean_key] for row in summary_rows]
        sds = [row[sd_key] for row in summary_rows]
        ax.bar(xs, means, yerr=sds, color="#9dbcd4", capsize=3)
        refs = [row.get(ref_key) for row in summary_rows]
        if any(r is not None for r in refs):
            ax.scatter(xs, refs, marker="_", s=300, c="#a02020", label="reference")
            ax.legend(fontsize=8)
        ax.set_xticks(xs)
        ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
        ax.set_ylabel(label)
    return _finish(fig, path)
