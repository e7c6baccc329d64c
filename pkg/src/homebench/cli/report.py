"""Report generation: metrics tables, delimited output and figures.

Reads every *.jsonl trace under a run directory, aggregates SR/Steps/TC,
and writes metrics.json, metrics.csv, report.txt plus PNG figures. Traces
that fail framing checks are listed as skipped, never aggregated.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ..errors import TraceError
from ..tasks.metrics import MetricsReport, compute_metrics, csv_rows, render_table
from ..tasks.records import EpisodeRecord
from ..tasks.spec import TaskSpec
from .traces import read_trace, trace_task

TIER_ORDER = ("Basic", "Reasoning", "LongHorizon")


def load_run(run_dir: str | Path) -> tuple[list[EpisodeRecord], list[TaskSpec], list[str]]:
    records, tasks, skipped = [], {}, []
    for path in sorted(Path(run_dir).glob("*.jsonl")):
        try:
            header, record = read_trace(path)
        except TraceError as exc:
            skipped.append(str(exc))
            continue
        records.append(record)
        task = trace_task(header)
        tasks[task.task_id] = task
    return records, list(tasks.values()), skipped


def _bar(ax, labels, values, title, ylabel):
    ax.bar(labels, [v if v is not None else 0.0 for v in values],
           color="#4878a8")
    for i, v in enumerate(values):
        if v is None:
            ax.text(i, 0.5, "n/a", ha="center", fontsize=8)
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    ax.tick_params(axis="x", rotation=20)


def write_figures(report: MetricsReport, records: list[EpisodeRecord],
                  out_dir: Path) -> list[str]:
    fig_dir = out_dir / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    written = []

    tiers = [t for t in TIER_ORDER if report.per_tier[t].attempts] + ["Overall"]
    cells = [report.per_tier[t] for t in tiers[:-1]] + [report.overall]
    for metric, ylabel in (("sr", "SR (%)"), ("steps_mean", "Steps"),
                           ("tc_mean", "tokens")):
        fig, ax = plt.subplots(figsize=(5.5, 3.4))
        _bar(ax, tiers, [getattr(c, metric) for c in cells],
             f"{ylabel} by tier", ylabel)
        fig.tight_layout()
        path = fig_dir / f"{metric.split('_')[0]}_by_tier.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(str(path))

    if report.per_apartment:
        fig, ax = plt.subplots(figsize=(5.5, 3.4))
        apartments = sorted(report.per_apartment)
        _bar(ax, apartments, [report.per_apartment[a].sr for a in apartments],
             "SR by apartment", "SR (%)")
        fig.tight_layout()
        fig.savefig(fig_dir / "sr_by_apartment.png", dpi=120)
        plt.close(fig)
        written.append(str(fig_dir / "sr_by_apartment.png"))

    fig, ax = plt.subplots(figsize=(4.2, 3.4))
    _bar(ax, ["single-room", "cross-room"],
         [report.per_cross_room["single_room"].sr,
          report.per_cross_room["cross_room"].sr],
         "SR by cross-room label", "SR (%)")
    fig.tight_layout()
    fig.savefig(fig_dir / "sr_cross_room.png", dpi=120)
    plt.close(fig)
    written.append(str(fig_dir / "sr_cross_room.png"))

    noise_fig = _noise_curves(records, fig_dir)
    if noise_fig:
        written.append(noise_fig)
    return written


def _noise_curves(records: list[EpisodeRecord], fig_dir: Path) -> str | None:
    """SR-vs-drop curves when the run sweeps noise levels."""
    curves: dict[str, dict[float, list[bool]]] = {"perception": {}, "memory": {}}
    for record in records:
        p = float(record.noise.get("perception_drop", 0.0))
        m = float(record.noise.get("memory_drop", 0.0))
        if m == 0.0:
            curves["perception"].setdefault(p, []).append(record.success)
        if p == 0.0:
            curves["memory"].setdefault(m, []).append(record.success)
    drawn = False
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for name, marker in (("perception", "o"), ("memory", "s")):
        series = {k: v for k, v in curves[name].items()}
        if len(series) < 2:
            continue
        xs = sorted(series)
        ys = [100.0 * sum(series[x]) / len(series[x]) for x in xs]
        ax.plot(xs, ys, marker=marker, label=f"{name} drop")
        drawn = True
    if not drawn:
        plt.close(fig)
        return None
    ax.set_xlabel("drop probability")
    ax.set_ylabel("SR (%)")
    ax.set_title("SR under noise")
    ax.legend()
    fig.tight_layout()
    path = fig_dir / "sr_vs_noise.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def write_report(run_dir: str | Path, out_dir: str | Path) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records, tasks, skipped = load_run(run_dir)
    report = compute_metrics(records, tasks)

    (out / "metrics.json").write_text(
        json.dumps({**report.to_dict(), "skipped_traces": skipped},
                   sort_keys=True, indent=1) + "\n")
    with open(out / "metrics.csv", "w", newline="") as fh:
        csv.writer(fh).writerows(csv_rows(report))
    table = render_table(report)
    if skipped:
        table += "\nSkipped (truncated or malformed) traces:\n"
        table += "".join(f"  {s}\n" for s in skipped)
    (out / "report.txt").write_text(table)
    figures = write_figures(report, records, out)
    return {"records": len(records), "skipped": skipped,
            "figures": figures, "table": table}
