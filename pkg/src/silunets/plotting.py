"""Deterministic SVG rendering for reports and figure commands.

All plots go through matplotlib's Agg backend with a pinned hash salt
and stripped date metadata, so rerunning a command yields byte-identical
SVG files.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams["svg.hashsalt"] = "silunets"
plt.rcParams["figure.figsize"] = (7.0, 4.5)

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22")


def _finish(fig, path: str) -> None:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def save_line_plot(
    path: str,
    xs,
    series,
    *,
    xlabel: str,
    ylabel: str,
    title: str,
    yscale: str = "linear",
    dashed_first: bool = False,
) -> None:
    """Write a line plot; series is a list of (label, ys) pairs."""
    fig, ax = plt.subplots()
    for i, (label, ys) in enumerate(series):
        style = "--" if dashed_first and i == 0 else "-"
        ax.plot(xs, ys, style, color=_COLORS[i % len(_COLORS)], label=label,
                linewidth=1.4)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.set_yscale(yscale)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    _finish(fig, path)


def save_heatmap(
    path: str,
    x_values,
    y_values,
    grid,
    *,
    xlabel: str,
    ylabel: str,
    title: str,
    colorbar_label: str,
) -> None:
    """Write a heatmap of grid[i, j] over y_values[i] x x_values[j]."""
    grid = np.asarray(grid, dtype=float)
    fig, ax = plt.subplots()
    im = ax.imshow(grid, aspect="auto", origin="lower", cmap="viridis")
    ax.set_xticks(range(len(x_values)))
    ax.set_xticklabels([f"{v:g}" for v in x_values], rotation=45, fontsize=7)
    ax.set_yticks(range(len(y_values)))
    ax.set_yticklabels([f"{v:g}" for v in y_values], fontsize=7)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label=colorbar_label)
    _finish(fig, path)


def save_surface_pair(
    path: str,
    x_grid,
    y_grid,
    left,
    right,
    *,
    left_title: str,
    right_title: str,
    title: str,
) -> None:
    """Two side-by-side filled-contour panels over the same (x, y) grid."""
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0))
    levels = 21
    for ax, data, name in ((axes[0], left, left_title), (axes[1], right, right_title)):
        cf = ax.contourf(x_grid, y_grid, data, levels=levels, cmap="viridis")
        ax.set_title(name, fontsize=9)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        fig.colorbar(cf, ax=ax, shrink=0.85)
    fig.suptitle(title, fontsize=10)
    _finish(fig, path)
