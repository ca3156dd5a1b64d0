"""Cost-versus-q charts for sweep results."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sweep import read_rows, summarize  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "lines.markersize": 3,
    "svg.hashsalt": "aggtree",
}

LABELS = {
    "spt": "shortest path tree",
    "spanning": "spanning tree (random DFS)",
    "spt-rn": "shortest path tree",
    "steiner": "Steiner tree",
    "alg2": "Algorithm 2 (LAST)",
    "alg3": "Algorithm 3 (Salman CND)",
    "alg3-sp-only": "Algorithm 3 (shortest-paths CND)",
}


def emit_chart(csv_text: str, out, title: str | None = None) -> Path:
    """Plot mean cost per algorithm against q, with the mean lower bound dashed."""
    means = summarize(read_rows(csv_text))
    if not means:
        raise ValueError("empty csv: nothing to plot")
    algs = list(dict.fromkeys(m.algorithm for m in means))
    out = Path(out)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4.5, 3.4))
        for alg in algs:
            pts = [m for m in means if m.algorithm == alg]
            ax.plot([m.q for m in pts], [float(m.mean_cost) for m in pts], marker="o", label=LABELS.get(alg, alg))
        first = [m for m in means if m.algorithm == algs[0]]
        ax.plot([m.q for m in first], [float(m.mean_lower_bound) for m in first], "k--", label="lower bound")
        ax.set_xlabel("aggregation ratio q")
        ax.set_ylabel("energy cost")
        if title:
            ax.set_title(title)
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(out, format=out.suffix.lstrip(".") or "svg", metadata={"Date": None} if out.suffix == ".svg" else None)
        plt.close(fig)
    return out


def emit_chart_file(csv_path, out, title: str | None = None) -> Path:
    return emit_chart(Path(csv_path).read_text(encoding="utf-8"), out, title)
