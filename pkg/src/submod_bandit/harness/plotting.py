"""Line charts of sweep results, written as self-contained SVG files."""

from __future__ import annotations

import math
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.family": "sans-serif",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.4,
    "lines.markersize": 4,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (4.5, 3.2),
    "svg.fonttype": "none",
    # fixed salt so repeated renders are byte-identical
    "svg.hashsalt": "submod-bandit",
}

LABELS = {"kappa": "κ", "epsilon": "ε", "d": "d",
          "total_samples": "total samples", "exact_value": "f(S)"}


def summarize(rows, metric: str):
    """``{algorithm: [(sweep_value, mean, stderr), ...]}`` over rows with status ok."""
    groups = defaultdict(list)
    for r in rows:
        if r["status"] != "ok" or r[metric] in ("", None):
            continue
        groups[(r["algorithm"], float(r["sweep_value"]))].append(float(r[metric]))
    out = defaultdict(list)
    for (alg, x), vals in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        k = len(vals)
        mean = sum(vals) / k
        se = math.sqrt(sum((v - mean) ** 2 for v in vals) / (k - 1) / k) if k > 1 else 0.0
        out[alg].append((x, mean, se))
    return out


def line_chart(rows, metric: str, path, sweep_param: str = None, log_y: bool = None) -> None:
    """Mean +/- standard error of ``metric`` against the sweep axis, one line per algorithm."""
    rows = list(rows)
    if sweep_param is None:
        sweep_param = rows[0]["sweep_param"] if rows else "value"
    series = summarize(rows, metric)
    if log_y is None:
        log_y = metric == "total_samples"
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for alg in sorted(series):
            xs, means, ses = zip(*series[alg])
            ax.errorbar(xs, means, yerr=ses, marker="o", capsize=2, label=alg)
        ax.set_xlabel(LABELS.get(sweep_param, sweep_param))
        ax.set_ylabel(LABELS.get(metric, metric))
        if log_y and any(m > 0 for s in series.values() for _, m, _ in s):
            ax.set_yscale("log")
        if series:
            ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def emit_charts(rows, out_dir, sweep_param: str = None) -> list:
    from pathlib import Path

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for metric in ("total_samples", "exact_value"):
        p = out_dir / f"{metric}.svg"
        line_chart(rows, metric, p, sweep_param)
        paths.append(p)
    return paths
