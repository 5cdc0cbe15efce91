"""Render figures from experiment CSV files.

Inputs are the CSV contracts of the experiment runner: sweep results
(experiment_id, sweep_value, solver, mean, stderr, n, seed), convergence
traces (instance, iteration, current_value, best_value, evaluations), and
room layouts (kind, index, x, y, z, fov_deg, coverage_radius_m). Rendering
is read-only and deterministic: the same CSV produces byte-identical PNG
output.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle

FIGURE_IDS = (
    "layout",
    "convergence",
    "power",
    "ue_count",
    "eve_fov",
    "ue_fov",
    "loc_error",
)

SWEEP_AXIS_LABELS = {
    "power": "Maximum LED power (dBm)",
    "ue_count": "Number of users",
    "eve_fov": "Eavesdropper FoV (degrees)",
    "ue_fov": "User FoV (degrees)",
    "loc_error": "Eavesdropper localization error (m)",
}

RATE_LABEL = "Average sum secrecy rate (bit/s/Hz)"

RESULT_COLUMNS = ("experiment_id", "sweep_value", "solver", "mean", "stderr", "n", "seed")
TRACE_COLUMNS = ("instance", "iteration", "current_value", "best_value", "evaluations")
LAYOUT_COLUMNS = ("kind", "index", "x", "y", "z", "fov_deg", "coverage_radius_m")

SOLVER_STYLE = {
    "tabu_search": dict(color="#1f77b4", label="tabu search"),
    "global_search": dict(color="#2ca02c", label="exhaustive search"),
    "random": dict(color="#7f7f7f", label="random"),
    "channel_gain": dict(color="#d62728", label="channel gain"),
    "eve_aware": dict(color="#9467bd", label="eve-aware gain"),
}

PNG_METADATA = {"Software": "plotkit"}


class SchemaError(ValueError):
    """The input CSV does not match the expected column contract."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    inputs: tuple[Path, ...]
    output: Path

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise SchemaError(
                f"unknown figure {self.figure_id!r}; choose from {', '.join(FIGURE_IDS)}"
            )
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")


def _read_csv(path: Path, required: tuple[str, ...]) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise SchemaError(f"{path}: missing column {column!r}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def build_sweep_figure(figure_id: str, rows: list[dict]):
    """Mean curve with a +/- one-standard-error band per solver."""
    fig, ax = plt.subplots(figsize=(7, 5))
    solvers = []
    for row in rows:
        if row["solver"] not in solvers:
            solvers.append(row["solver"])
    for solver in solvers:
        mine = [r for r in rows if r["solver"] == solver]
        x = [float(r["sweep_value"]) for r in mine]
        mean = [float(r["mean"]) for r in mine]
        err = [float(r["stderr"]) for r in mine]
        style = SOLVER_STYLE.get(solver, dict(label=solver))
        ax.plot(x, mean, marker="o", markersize=4, **style)
        ax.fill_between(
            x,
            [m - e for m, e in zip(mean, err)],
            [m + e for m, e in zip(mean, err)],
            alpha=0.2,
            color=style.get("color"),
            linewidth=0,
        )
    ax.set_xlabel(SWEEP_AXIS_LABELS[figure_id])
    ax.set_ylabel(RATE_LABEL)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig, ax


def build_convergence_figure(rows: list[dict]):
    """Best-objective-so-far per iteration, one line per solver run."""
    fig, ax = plt.subplots(figsize=(7, 5))
    by_instance: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        by_instance.setdefault(row["instance"], []).append(
            (int(row["iteration"]), float(row["best_value"]))
        )
    for instance, points in sorted(by_instance.items(), key=lambda kv: int(kv[0])):
        points.sort()
        ax.plot(
            [p[0] for p in points],
            [p[1] for p in points],
            drawstyle="steps-post",
            alpha=0.8,
            label=f"run {instance}",
        )
    ax.set_xlabel("Iteration")
    ax.set_ylabel("Best sum secrecy rate so far (bit/s/Hz)")
    ax.grid(True, alpha=0.3)
    if len(by_instance) <= 10:
        ax.legend()
    fig.tight_layout()
    return fig, ax


def build_layout_figure(rows: list[dict]):
    """Room map: LED lattice, user markers with coverage circles, dashed
    eavesdropper circle."""
    fig, ax = plt.subplots(figsize=(6.5, 6.5))
    leds = [r for r in rows if r["kind"] == "led"]
    ues = [r for r in rows if r["kind"] == "ue"]
    eves = [r for r in rows if r["kind"] == "eve"]

    ax.plot(
        [float(r["x"]) for r in leds],
        [float(r["y"]) for r in leds],
        linestyle="none",
        marker="x",
        color="#1f4fd8",
        markersize=8,
        label="LED",
    )
    for i, ue in enumerate(ues):
        x, y = float(ue["x"]), float(ue["y"])
        ax.plot(
            x, y, linestyle="none", marker="^", color="magenta",
            markersize=8, label="UE" if i == 0 else None,
        )
        ax.add_patch(
            Circle((x, y), float(ue["coverage_radius_m"]),
                   fill=False, edgecolor="magenta", linewidth=1.2)
        )
    for i, eve in enumerate(eves):
        x, y = float(eve["x"]), float(eve["y"])
        ax.plot(
            x, y, linestyle="none", marker="o", color="green",
            markersize=8, label="Eve" if i == 0 else None,
        )
        ax.add_patch(
            Circle((x, y), float(eve["coverage_radius_m"]),
                   fill=False, edgecolor="green", linestyle="--", linewidth=1.2)
        )
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="upper right")
    fig.tight_layout()
    return fig, ax


def build_figure(spec: FigureSpec):
    """Load the inputs and build (figure, axes) without writing anything."""
    if spec.figure_id == "layout":
        rows = []
        for path in spec.inputs:
            rows.extend(_read_csv(path, LAYOUT_COLUMNS))
        return build_layout_figure(rows)
    if spec.figure_id == "convergence":
        rows = []
        for path in spec.inputs:
            rows.extend(_read_csv(path, TRACE_COLUMNS))
        return build_convergence_figure(rows)
    rows = []
    for path in spec.inputs:
        rows.extend(_read_csv(path, RESULT_COLUMNS))
    return build_sweep_figure(spec.figure_id, rows)


def render_figure(spec: FigureSpec) -> Path:
    """Render one figure to its output path and return that path."""
    fig, _ = build_figure(spec)
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    try:
        fig.savefig(spec.output, dpi=120, metadata=PNG_METADATA)
    finally:
        plt.close(fig)
    return spec.output
