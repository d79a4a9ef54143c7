"""CLEAR MOT and track-quality metrics, benchmark aggregation and ranking."""

from __future__ import annotations

import io
import csv
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import rankdata

from .matching import EventLog

MOSTLY_TRACKED = 0.8
MOSTLY_LOST = 0.2


class MetricsUndefinedError(ValueError):
    pass


@dataclass(frozen=True)
class EventCounts:
    """Raw sums that every reported metric is derived from."""

    frames: int = 0
    gt_total: int = 0
    tp: int = 0
    fp: int = 0
    fn: int = 0
    idsw: int = 0
    fm: int = 0
    overlap_sum: float = 0.0
    mt: int = 0
    pt: int = 0
    ml: int = 0

    def __add__(self, other: "EventCounts") -> "EventCounts":
        return EventCounts(*(getattr(self, f.name) + getattr(other, f.name)
                             for f in fields(self)))

    @property
    def trajectories(self) -> int:
        return self.mt + self.pt + self.ml


@dataclass(frozen=True)
class MetricsReport:
    mota: float
    motp: float
    faf: float
    recall: float
    precision: float
    mt_ratio: float
    pt_ratio: float
    ml_ratio: float
    rel_idsw: float
    rel_fm: float
    mt: int
    pt: int
    ml: int
    fp: int
    fn: int
    idsw: int
    fm: int
    tp: int
    gt_total: int
    frames: int
    overlap_sum: float
    undefined: tuple[str, ...] = ()

    @property
    def far(self) -> float:
        return self.faf

    @property
    def counts(self) -> EventCounts:
        return EventCounts(self.frames, self.gt_total, self.tp, self.fp, self.fn, self.idsw,
                           self.fm, self.overlap_sum, self.mt, self.pt, self.ml)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["undefined"] = list(self.undefined)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "MetricsReport":
        d = dict(d)
        d["undefined"] = tuple(d.get("undefined", ()))
        return cls(**d)


@dataclass(frozen=True)
class BenchmarkReport:
    sequences: dict
    overall: MetricsReport
    mota_stddev: float


def count_events(log: EventLog) -> EventCounts:
    tp = sum(f.tp for f in log.frames)
    coverage = log.track_coverage()
    mt = sum(1 for v in coverage.values() if v >= MOSTLY_TRACKED)
    ml = sum(1 for v in coverage.values() if v < MOSTLY_LOST)
    return EventCounts(
        frames=log.frame_count,
        gt_total=sum(f.gt_count for f in log.frames),
        tp=tp,
        fp=sum(f.fp for f in log.frames),
        fn=sum(f.fn for f in log.frames),
        idsw=sum(f.idsw for f in log.frames),
        fm=len(log.fragmentations()),
        overlap_sum=float(sum(m.overlap for f in log.frames for m in f.matches)),
        mt=mt,
        pt=len(coverage) - mt - ml,
        ml=ml,
    )


def metrics_from_counts(c: EventCounts) -> MetricsReport:
    """All reported measures from summed event counts.

    MOTA, MOTP, recall, precision and the MT/PT/ML ratios are percentages.
    rel.ID and rel.FM divide by recall in percent, which is how the
    published result tables are scaled. Measures whose denominator is zero
    are reported as 0 and listed in ``undefined``.
    """
    if c.gt_total == 0:
        raise MetricsUndefinedError("no ground-truth objects: MOTA is undefined")
    undefined = []
    mota = 100.0 * (1.0 - (c.fn + c.fp + c.idsw) / c.gt_total)
    recall = 100.0 * c.tp / c.gt_total
    if c.tp:
        motp = 100.0 * c.overlap_sum / c.tp
        precision = 100.0 * c.tp / (c.tp + c.fp)
        rel_idsw = c.idsw / recall
        rel_fm = c.fm / recall
    else:
        motp = rel_idsw = rel_fm = 0.0
        precision = 0.0
        undefined += ["motp", "rel_idsw", "rel_fm"]
        if c.fp == 0:
            undefined.append("precision")
    faf = c.fp / c.frames if c.frames else 0.0
    n = c.trajectories
    if n:
        ratios = [100.0 * x / n for x in (c.mt, c.pt, c.ml)]
    else:
        ratios = [0.0, 0.0, 0.0]
        undefined += ["mt_ratio", "pt_ratio", "ml_ratio"]
    return MetricsReport(
        mota=mota, motp=motp, faf=faf, recall=recall, precision=precision,
        mt_ratio=ratios[0], pt_ratio=ratios[1], ml_ratio=ratios[2],
        rel_idsw=rel_idsw, rel_fm=rel_fm,
        mt=c.mt, pt=c.pt, ml=c.ml, fp=c.fp, fn=c.fn, idsw=c.idsw, fm=c.fm, tp=c.tp,
        gt_total=c.gt_total, frames=c.frames, overlap_sum=c.overlap_sum,
        undefined=tuple(undefined),
    )


def compute_metrics(log: EventLog) -> MetricsReport:
    return metrics_from_counts(count_events(log))


def accumulate(logs: Iterable[EventLog]) -> BenchmarkReport:
    """Per-sequence reports plus one report over the concatenated benchmark.

    The overall figures come from summed counts, not from averaging the
    per-sequence percentages. ``mota_stddev`` is the population standard
    deviation of the per-sequence MOTA values.
    """
    logs = list(logs)
    if not logs:
        raise ValueError("accumulate needs at least one sequence")
    counts = {}
    for i, log in enumerate(logs):
        name = log.sequence or f"seq{i}"
        if name in counts:
            raise ValueError(f"duplicate sequence {name!r}")
        counts[name] = count_events(log)
    return accumulate_counts(counts)


def accumulate_counts(counts: Mapping[str, EventCounts]) -> BenchmarkReport:
    per_seq = {name: metrics_from_counts(c) for name, c in counts.items()}
    total = sum(counts.values(), EventCounts())
    stddev = float(np.std([r.mota for r in per_seq.values()]))
    return BenchmarkReport(per_seq, metrics_from_counts(total), stddev)


# (attribute, higher is better)
RANKING_METRICS = (
    ("mota", True),
    ("motp", True),
    ("faf", False),
    ("mt_ratio", True),
    ("ml_ratio", False),
    ("fp", False),
    ("fn", False),
    ("idsw", False),
    ("rel_idsw", False),
    ("fm", False),
    ("rel_fm", False),
)


@dataclass(frozen=True)
class RankedTracker:
    name: str
    average_rank: float
    ranks: dict


def rank_trackers(table: Sequence[tuple[str, MetricsReport]]) -> list[RankedTracker]:
    """Average rank over all ranking metrics; 1 is best, ties share the mean rank."""
    if not table:
        raise ValueError("nothing to rank")
    names = [name for name, _ in table]
    per_metric = {}
    for attr, higher_better in RANKING_METRICS:
        values = np.array([getattr(r, attr) for _, r in table], dtype=float)
        per_metric[attr] = rankdata(-values if higher_better else values, method="average")
    ranked = []
    for i, name in enumerate(names):
        ranks = {attr: float(per_metric[attr][i]) for attr, _ in RANKING_METRICS}
        ranked.append(RankedTracker(name, float(np.mean(list(ranks.values()))), ranks))
    return sorted(ranked, key=lambda t: t.average_rank)


TABLE_COLUMNS = (
    ("MOTA", "mota", "{:.1f}"),
    ("MOTP", "motp", "{:.1f}"),
    ("FAR", "faf", "{:.2f}"),
    ("MT(%)", "mt_ratio", "{:.1f}"),
    ("ML(%)", "ml_ratio", "{:.1f}"),
    ("FP", "fp", "{:d}"),
    ("FN", "fn", "{:d}"),
    ("IDsw", "idsw", "{:d}"),
    ("rel.ID", "rel_idsw", "{:.1f}"),
    ("FM", "fm", "{:d}"),
    ("rel.FM", "rel_fm", "{:.1f}"),
)


def format_table(rows: Sequence[tuple[str, MetricsReport]], fmt: str = "text") -> str:
    """Render reports in the usual result-table column order."""
    header = ["Name"] + [col for col, _, _ in TABLE_COLUMNS]
    body = [[name] + [spec.format(getattr(r, attr)) for _, attr, spec in TABLE_COLUMNS]
            for name, r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(body)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = []
    for row in [header] + body:
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells))
    return "\n".join(lines) + "\n"
