"""SR / Steps / TC aggregation and the aligned report table."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnknownTaskId
from .records import EpisodeRecord
from .spec import TaskSpec, Tier

METRICS_FORMAT_VERSION = 1


@dataclass
class MetricCell:
    attempts: int = 0
    successes: int = 0
    _steps: list[int] = field(default_factory=list)
    _tokens: list[int] = field(default_factory=list)

    def add(self, record: EpisodeRecord) -> None:
        self.attempts += 1
        if record.success:
            self.successes += 1
            self._steps.append(record.steps_taken)
        self._tokens.append(record.token_total)

    @property
    def sr(self) -> float | None:
        if self.attempts == 0:
            return None
        return 100.0 * self.successes / self.attempts

    @property
    def steps_mean(self) -> float | None:
        """Mean steps over successful episodes only; None when no successes."""
        if not self._steps:
            return None
        return sum(self._steps) / len(self._steps)

    @property
    def tc_mean(self) -> float | None:
        if not self._tokens:
            return None
        return sum(self._tokens) / len(self._tokens)

    def to_dict(self) -> dict:
        return {"attempts": self.attempts, "successes": self.successes,
                "sr": self.sr, "steps": self.steps_mean, "tc": self.tc_mean}


@dataclass
class MetricsReport:
    overall: MetricCell
    per_tier: dict[str, MetricCell]
    per_apartment: dict[str, MetricCell]
    per_cross_room: dict[str, MetricCell]  # keys "cross_room" / "single_room"

    def to_dict(self) -> dict:
        return {
            "format_version": METRICS_FORMAT_VERSION,
            "overall": self.overall.to_dict(),
            "per_tier": {k: v.to_dict() for k, v in self.per_tier.items()},
            "per_apartment": {k: v.to_dict() for k, v in self.per_apartment.items()},
            "per_cross_room": {k: v.to_dict() for k, v in self.per_cross_room.items()},
        }


def compute_metrics(records: list[EpisodeRecord],
                    tasks: list[TaskSpec]) -> MetricsReport:
    """Aggregate episode records, grouped by tier, apartment and cross-room
    flag. Steps averages successful episodes only; empty cells stay None."""
    by_id = {t.task_id: t for t in tasks}
    report = MetricsReport(overall=MetricCell(),
                           per_tier={t.value: MetricCell() for t in Tier},
                           per_apartment={}, per_cross_room={
                               "single_room": MetricCell(),
                               "cross_room": MetricCell()})
    for record in records:
        task = by_id.get(record.task_id)
        if task is None:
            raise UnknownTaskId(record.task_id)
        report.overall.add(record)
        report.per_tier[task.tier.value].add(record)
        report.per_apartment.setdefault(task.apartment, MetricCell()).add(record)
        key = "cross_room" if task.cross_room else "single_room"
        report.per_cross_room[key].add(record)
    return report


def _fmt(value: float | None, width: int, decimals: int = 1,
         scale: float = 1.0) -> str:
    if value is None:
        return "--".rjust(width)
    return f"{value / scale:.{decimals}f}".rjust(width)


def render_table(report: MetricsReport) -> str:
    """Aligned text table: one row per grouping, SR / Steps / TC columns
    (TC shown in thousands of tokens)."""
    rows: list[tuple[str, MetricCell]] = []
    for tier in ("Basic", "Reasoning", "LongHorizon"):
        rows.append((tier, report.per_tier[tier]))
    rows.append(("Overall", report.overall))
    for apt in sorted(report.per_apartment):
        rows.append((f"apartment {apt}", report.per_apartment[apt]))
    rows.append(("single-room", report.per_cross_room["single_room"]))
    rows.append(("cross-room", report.per_cross_room["cross_room"]))

    name_w = max(len(name) for name, _ in rows) + 2
    header = (f"{'Group'.ljust(name_w)}{'N'.rjust(5)}{'SR%'.rjust(8)}"
              f"{'Steps'.rjust(8)}{'TC(k)'.rjust(9)}")
    lines = [header, "-" * len(header)]
    for name, cell in rows:
        lines.append(f"{name.ljust(name_w)}{str(cell.attempts).rjust(5)}"
                     f"{_fmt(cell.sr, 8)}{_fmt(cell.steps_mean, 8)}"
                     f"{_fmt(cell.tc_mean, 9, 1, 1000.0)}")
    return "\n".join(lines) + "\n"


def csv_rows(report: MetricsReport) -> list[list[object]]:
    rows: list[list[object]] = [["group", "attempts", "successes", "sr", "steps", "tc"]]

    def emit(name: str, cell: MetricCell) -> None:
        rows.append([name, cell.attempts, cell.successes,
                     cell.sr, cell.steps_mean, cell.tc_mean])

    for tier in ("Basic", "Reasoning", "LongHorizon"):
        emit(f"tier:{tier}", report.per_tier[tier])
    emit("overall", report.overall)
    for apt in sorted(report.per_apartment):
        emit(f"apartment:{apt}", report.per_apartment[apt])
    emit("single_room", report.per_cross_room["single_room"])
    emit("cross_room", report.per_cross_room["cross_room"])
    return rows
