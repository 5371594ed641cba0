"""Figure rendering for benchmark and bootstrap outputs.

Each report-style CLI command writes its delimited table and, next to it,
a matplotlib figure of the same data. Rendering is headless and
deterministic: fixed size, fixed dpi, no timestamps in the output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_benchmark_figure", "render_sweep_figure", "render_bootstrap_figure"]

_SAVEFIG = {"dpi": 150, "metadata": {"Software": None}}


def _new_axes(width=8.0, height=4.5):
    fig, ax = plt.subplots(figsize=(width, height))
    ax.grid(True, axis="y", alpha=0.3)
    return fig, ax


def render_benchmark_figure(rows: list[dict], path) -> None:
    """Grouped boxplots of normalised SID by threshold count and method."""
    labels = sorted({row["label"] for row in rows})
    ks = sorted({int(row["k"]) for row in rows})
    fig, ax = _new_axes()
    width = 0.8 / max(len(labels), 1)
    colors = plt.cm.tab10(np.linspace(0, 1, 10))
    for m, label in enumerate(labels):
        data = [
            [row["sid_normalized"] for row in rows if row["label"] == label and int(row["k"]) == k]
            for k in ks
        ]
        positions = [i + (m - (len(labels) - 1) / 2) * width for i in range(len(ks))]
        box = ax.boxplot(
            data,
            positions=positions,
            widths=width * 0.9,
            patch_artist=True,
            manage_ticks=False,
        )
        for patch in box["boxes"]:
            patch.set_facecolor(colors[m % 10])
            patch.set_alpha(0.6)
        ax.plot([], [], color=colors[m % 10], label=label)
    ax.set_xticks(range(len(ks)))
    ax.set_xticklabels([str(k) for k in ks])
    ax.set_xlabel("threshold count k")
    ax.set_ylabel("normalised SID")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)


def render_sweep_figure(rows: list[dict], path) -> None:
    """Boxplots plus mean curve of normalised SID across the scale factor a."""
    avals = sorted({float(row["a"]) for row in rows})
    data = [
        [row["sid_normalized"] for row in rows if float(row["a"]) == a] for a in avals
    ]
    fig, ax = _new_axes()
    ax.boxplot(data, positions=range(len(avals)), widths=0.5, manage_ticks=False)
    means = [float(np.mean(vals)) for vals in data]
    ax.plot(range(len(avals)), means, "o-", color="tab:orange", label="mean SID")
    ax.set_xticks(range(len(avals)))
    ax.set_xticklabels([f"{a:g}" for a in avals])
    ax.set_xlabel("scale factor a")
    ax.set_ylabel("normalised SID")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)


def render_bootstrap_figure(scores: list[float], observed: float, path) -> None:
    """Boxplot of the bootstrap SID distribution with the observed value marked."""
    fig, ax = _new_axes(width=4.0)
    ax.boxplot([scores], positions=[0], widths=0.4, manage_ticks=False)
    ax.plot([0], [observed], marker="D", color="tab:orange", markersize=9, label="observed")
    ax.set_xticks([0])
    ax.set_xticklabels(["bootstrap"])
    ax.set_ylabel("normalised SID")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG)
    plt.close(fig)
