"""Figure rendering: sweep curves with std bands, improvement-ratio curves."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # headless; also keeps output independent of any display
matplotlib.rcParams["svg.hashsalt"] = "plot-reports"  # stable element ids

import matplotlib.pyplot as plt
import numpy as np

from .data import (
    Row,
    SchemaError,
    param_name,
    read_csv,
    summarize_arm,
    summarize_improvement,
)

KINDS = ("sweep", "improvement")

FIGSIZE = (6.0, 4.0)  # fixed so identical inputs render identical files

_ARM_STYLE = {
    False: {"label": "no rules", "color": "tab:blue", "marker": "o"},
    True: {"label": "with rules", "color": "tab:orange", "marker": "s"},
}


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    kind: str
    out_path: str
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}")


def _axis_setup(ax, param: str):
    ax.set_xlabel(param.replace("_", " "))
    if param == "particles":
        ax.set_xscale("log", base=2)
    ax.grid(True, alpha=0.3)


def _vector_twin(out_path: str) -> Path:
    return Path(out_path).with_suffix(".svg")


def _save(fig, out_path: str) -> list[Path]:
    """Write the requested file plus a vector twin; strip volatile metadata."""
    written = []
    for path in (Path(out_path), _vector_twin(out_path)):
        if path in written:
            continue
        metadata = {"Date": None} if path.suffix == ".svg" else {}
        fig.savefig(path, metadata=metadata)
        written.append(path)
    plt.close(fig)
    return written


def render_sweep(rows: list[Row], spec: PlotSpec) -> list[Path]:
    param = param_name(rows)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    for rules in (False, True):
        summary = summarize_arm(rows, rules)
        if summary.values.size == 0:
            continue
        style = _ARM_STYLE[rules]
        ax.plot(summary.values, summary.means, **style)
        ax.fill_between(summary.values, summary.means - summary.stds,
                        summary.means + summary.stds,
                        color=style["color"], alpha=0.2, linewidth=0)
    _axis_setup(ax, param)
    ax.set_ylabel("discounted return (mean $\\pm$ std)")
    ax.set_title(spec.title or f"{rows[0].domain}: return vs {param}")
    ax.legend()
    fig.tight_layout()
    return _save(fig, spec.out_path)


def render_improvement(rows: list[Row], spec: PlotSpec) -> list[Path]:
    param = param_name(rows)
    summary = summarize_improvement(rows)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(summary.values, summary.ratios, color="tab:green", marker="o")
    ax.axhline(0.0, color="gray", linewidth=0.8)
    _axis_setup(ax, param)
    ax.set_ylabel("return improvement ratio")
    ax.set_title(spec.title or f"{rows[0].domain}: improvement vs {param}")
    fig.tight_layout()
    return _save(fig, spec.out_path)


def render(spec: PlotSpec) -> list[Path]:
    """Render one figure (plus its vector twin); returns the written paths."""
    rows = read_csv(spec.csv_path)
    if spec.kind == "sweep":
        return render_sweep(rows, spec)
    return render_improvement(rows, spec)
