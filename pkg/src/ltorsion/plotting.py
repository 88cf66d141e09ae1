"""Figures written next to CLI reports. Rendering uses the Agg backend only."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 3.8),
    "figure.dpi": 100,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "savefig.dpi": 120,
}

# fixed metadata keeps the PNG bytes stable across runs
_PNG_META = {"Software": None}


def figure_path(out: str | Path) -> Path:
    return Path(out).with_suffix(".png")


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, format="png", metadata=_PNG_META)
    plt.close(fig)
    return path


def moment_ratio_plot(rows: Sequence[dict], path) -> Path:
    """Ratio moment_sum/family_count against X, one line per (ell, k)."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        series: dict[tuple, list] = {}
        for r in rows:
            series.setdefault((r["ell"], r["k"]), []).append((int(r["X"]), float(r["ratio"])))
        for (ell, k), pts in sorted(series.items()):
            pts.sort()
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker="o", label=f"ell={ell}, k={k}")
        ax.set_xscale("log")
        ax.set_xlabel("X")
        ax.set_ylabel("moment / family size")
        if series:
            ax.legend()
        return _save(fig, Path(path))


def verdict_plot(rows: Sequence[dict], path) -> Path:
    """Exceptional-set density per (ell, k, delta) configuration."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        labels = [f"{r['ell']}/{r['k']}/{r['delta']}" for r in rows]
        vals = [float(r["density"]) for r in rows]
        colors = ["tab:blue" if r["holds"] else "tab:red" for r in rows]
        ax.bar(range(len(vals)), vals, color=colors)
        ax.set_xticks(range(len(vals)))
        ax.set_xticklabels(labels, rotation=90, fontsize=6)
        ax.set_ylabel("exceptional fraction")
        ax.set_xlabel("ell/k/delta")
        return _save(fig, Path(path))


def density_plot(empirical: Sequence[tuple[int, float]], lower: float, upper: float, path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        if empirical:
            xs, ys = zip(*empirical)
            ax.plot(xs, ys, marker="o", label="empirical")
            ax.set_xscale("log")
        ax.axhspan(lower, upper, color="tab:orange", alpha=0.4, label="predicted")
        ax.axhline((lower + upper) / 2, color="tab:orange", lw=0.8)
        ax.set_xlabel("X")
        ax.set_ylabel("density")
        ax.legend()
        return _save(fig, Path(path))


def census_plot(counts: dict[int, int], path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        qs = sorted(counts)
        ax.vlines(qs, 0, [counts[q] for q in qs], lw=1.0)
        ax.set_xlabel("conductor q")
        ax.set_ylabel("curves in box")
        return _save(fig, Path(path))


def loglog_plot(points: dict[str, Sequence[tuple[float, float]]], path, xlabel: str, ylabel: str) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for name, pts in sorted(points.items()):
            pts = [(x, y) for x, y in pts if x > 0 and y > 0]
            if pts:
                xs, ys = zip(*pts)
                ax.loglog(xs, ys, marker="o", label=name)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend()
        return _save(fig, Path(path))


def bound_plot(rows: Sequence[dict], path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for ell in sorted({r["ell"] for r in rows}):
            sub = [r for r in rows if r["ell"] == ell]
            ax.scatter([r["torsion"] for r in sub], [r["bound"] for r in sub], s=8, label=f"ell={ell}")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("|Cl[ell]|")
        ax.set_ylabel("upper bound")
        ax.legend()
        return _save(fig, Path(path))
