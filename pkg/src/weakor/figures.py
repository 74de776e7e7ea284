"""Report figures, written next to the delimited output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .batch import ClassificationReport  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.dpi": 120,
}


def plot_report(report: ClassificationReport, stem: str | Path) -> list[Path]:
    """Bar chart of class counts per (rank, size) cell; returns the files written."""
    stem = Path(stem)
    agg = report.aggregate()
    cells = list(agg)
    labels = [f"r{r}\nn{n}" for r, n in cells]
    series = [("total", "#9ecae1"), ("non_weak", "#3182bd")]
    if report.orient_checked:
        series.append(("non_orientable", "#de2d26"))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(3.5, 0.7 * len(cells) + 1.5), 2.8))
        width = 0.8 / len(series)
        for k, (key, color) in enumerate(series):
            xs = [i + (k - (len(series) - 1) / 2) * width for i in range(len(cells))]
            ax.bar(xs, [agg[c][key] for c in cells], width, color=color, label=key.replace("_", " "))
        ax.set_xticks(range(len(cells)))
        ax.set_xticklabels(labels)
        ax.set_ylabel("matroids")
        if cells and max(agg[c]["total"] for c in cells) > 50:
            # symlog keeps zero counts on the axis
            ax.set_yscale("symlog", linthresh=1)
        ax.set_ylim(bottom=0)
        ax.legend(frameon=False)
        fig.tight_layout()
        out = stem.with_suffix(".png")
        fig.savefig(out)
        plt.close(fig)
    return [out]
