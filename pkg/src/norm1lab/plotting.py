"""Figures: kernel lines inside (Z/p)^2 and a pairwise Sha heatmap."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .adjudicator import PlaceScenario, adjudicator  # noqa: E402
from .group import class_labels  # noqa: E402
from .pipeline import KernelTable, monomial  # noqa: E402


def kernel_lines_figure(table: KernelTable, path: str) -> str:
    """One panel per subgroup class; dots are classes f1^l f2^m, filled when in the kernel."""
    p = table.p
    labels = list(table.rows)
    ncols = min(len(labels), p + 2)
    nrows = -(-len(labels) // ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(1.6 * ncols, 1.7 * nrows), squeeze=False)
    grid = np.array([(l, m) for l in range(p) for m in range(p)])
    for ax, label in zip(axes.flat, labels):
        ker = table.rows[label].elements()
        inside = np.array([(int(l), int(m)) in ker for l, m in grid])
        ax.scatter(grid[~inside, 0], grid[~inside, 1], s=12, facecolors="none", edgecolors="0.6")
        ax.scatter(grid[inside, 0], grid[inside, 1], s=18, color="C0")
        k = table.rows[label]
        sub = {"full": "all", "zero": "0"}.get(k.kind) or monomial(*k.gen)
        ax.set_title(f"{label}: {sub}", fontsize=8)
        ax.set_xticks(range(p))
        ax.set_yticks(range(p))
        ax.tick_params(labelsize=6)
        ax.set_aspect("equal")
    for ax in list(axes.flat)[len(labels):]:
        ax.axis("off")
    fig.suptitle(f"restriction kernels, p={p}, {table.coeff} (x: f1 exponent, y: f2 exponent)", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def sweep_heatmap(p: int, stabilizer: str, path: str) -> str:
    """|Sha(T)| when exactly the two labelled classes occur as ramified decomposition groups."""
    adj = adjudicator(p, stabilizer)
    labels = class_labels(p)
    n = len(labels)
    data = np.zeros((n, n), dtype=int)
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            data[i, j] = adj(PlaceScenario(p, stabilizer, [x, y])).sha.order
    fig, ax = plt.subplots(figsize=(0.45 * n + 2, 0.45 * n + 1.5))
    im = ax.imshow(data, cmap="viridis")
    ax.set_xticks(range(n), labels, fontsize=7, rotation=90)
    ax.set_yticks(range(n), labels, fontsize=7)
    for i in range(n):
        for j in range(n):
            ax.text(j, i, str(data[i, j]), ha="center", va="center", fontsize=6, color="k" if data[i, j] == data.max() else "w")
    H = "1" if adj.stabilizer == "1" else "<a>"
    ax.set_title(f"|Sha(T)| for ramified pairs, p={p}, H={H}", fontsize=9)
    fig.colorbar(im, ax=ax, shrink=0.7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_figures(directory: str, p: int, tables: list[KernelTable] = (), sweeps: list[str] = ()) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    out = []
    for t in tables:
        tag = {"QZ": "qz", "J_G": "jg1", "J_{G/<a>}": "jga"}[t.coeff]
        out.append(kernel_lines_figure(t, os.path.join(directory, f"kernels_p{p}_{tag}.png")))
    for stab in sweeps:
        out.append(sweep_heatmap(p, stab, os.path.join(directory, f"sweep_p{p}_H{stab}.png")))
    return out
