"""Detection precision/recall curves and detection-set statistics."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .assignment import FORBIDDEN, solve_assignment
from .formats import ParsedFile
from .geometry import DetEntry, SequenceMeta, boxes_to_array, iou_matrix
from .matching import EvalConfig, filter_gt

TP, FP, IGNORED = 1, 0, -1


class PrPoint(NamedTuple):
    threshold: float
    precision: float
    recall: float


class DetectionStats(NamedTuple):
    count: int
    per_frame: float
    min_height: float
    max_height: float


@dataclass(frozen=True)
class PrCurve:
    points: tuple[PrPoint, ...]
    operating_point: tuple[float, float]
    operating_threshold: float
    num_targets: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("threshold,precision,recall\n")
        for p in self.points:
            buf.write(f"{p.threshold:.6g},{p.precision:.6f},{p.recall:.6f}\n")
        return buf.getvalue()

    def at(self, threshold: float) -> tuple[float, float]:
        """(precision, recall) keeping detections with confidence >= threshold."""
        best = None
        for p in self.points:
            if p.threshold >= threshold:
                best = p
        if best is None:
            return 0.0, 0.0
        return best.precision, best.recall


def _det_sort_key(d: DetEntry):
    return (-d.confidence, d.frame, d.box.left, d.box.top, d.box.width, d.box.height)


def label_detections(dets: Iterable[DetEntry], gt: ParsedFile, cfg: EvalConfig = EvalConfig(),
                     mode: str = "greedy") -> list[tuple[DetEntry, int]]:
    """Label each detection TP, FP or IGNORED, in descending-confidence order.

    ``greedy``: each detection, most confident first, takes the unclaimed
    target with the highest IoU at or above the threshold. ``hungarian``:
    per frame, an optimal one-to-one matching of all detections to targets.
    Detections left unmatched that cover an ignorable annotation by more
    than the distractor threshold are ignored instead of counted as FP.
    """
    if mode not in ("greedy", "hungarian"):
        raise ValueError(f"unknown matching mode {mode!r}")
    targets, ignorables = filter_gt(gt, cfg)
    ordered = sorted(dets, key=_det_sort_key)
    by_frame: dict[int, list[int]] = {}
    for idx, d in enumerate(ordered):
        by_frame.setdefault(d.frame, []).append(idx)

    labels = [FP] * len(ordered)
    thr = cfg.iou_threshold
    for frame, idxs in by_frame.items():
        dboxes = boxes_to_array(ordered[i].box for i in idxs)
        tboxes = boxes_to_array(e.box for e in targets.get(frame, []))
        ov = iou_matrix(dboxes, tboxes)
        hit = np.zeros(len(idxs), dtype=bool)
        if mode == "greedy":
            claimed = np.zeros(len(tboxes), dtype=bool)
            for row in range(len(idxs)):
                cand = np.where(claimed, -1.0, ov[row])
                if cand.size and cand.max() >= thr:
                    claimed[int(np.argmax(cand))] = True
                    hit[row] = True
        elif len(tboxes):
            cost = np.where(ov >= thr, 1.0 - ov, FORBIDDEN)
            for row, _ in solve_assignment(cost):
                hit[row] = True
        ign = ignorables.get(frame, [])
        iov = iou_matrix(dboxes, boxes_to_array(e.box for e in ign))
        for row, i in enumerate(idxs):
            if hit[row]:
                labels[i] = TP
            elif iov.shape[1] and iov[row].max() > cfg.distractor_overlap_threshold:
                labels[i] = IGNORED
    return list(zip(ordered, labels))


def pr_curve(labelled: Sequence[tuple[DetEntry, int]], num_targets: int,
             operating_threshold: float = -np.inf) -> PrCurve:
    """Sweep the confidence threshold over labelled detections."""
    labelled = sorted(labelled, key=lambda p: _det_sort_key(p[0]))
    points = []
    tp = fp = 0
    for idx, (det, label) in enumerate(labelled):
        tp += label == TP
        fp += label == FP
        nxt = labelled[idx + 1][0].confidence if idx + 1 < len(labelled) else None
        if nxt == det.confidence:
            continue
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / num_targets if num_targets else 0.0
        points.append(PrPoint(det.confidence, precision, recall))
    curve = PrCurve(tuple(points), (0.0, 0.0), operating_threshold, num_targets)
    return PrCurve(curve.points, curve.at(operating_threshold), operating_threshold, num_targets)


def evaluate_detections(dets: Union[ParsedFile, Iterable[DetEntry]], gt: ParsedFile,
                        cfg: EvalConfig = EvalConfig(), mode: str = "greedy",
                        operating_threshold: float = -np.inf) -> PrCurve:
    """Precision/recall curve of one detection set against one sequence's GT."""
    entries = dets.entries if isinstance(dets, ParsedFile) else list(dets)
    labelled = label_detections(entries, gt, cfg, mode)
    targets, _ = filter_gt(gt, cfg)
    return pr_curve(labelled, sum(len(v) for v in targets.values()), operating_threshold)


def evaluate_detection_benchmark(pairs: Iterable[tuple[Iterable[DetEntry], ParsedFile]],
                                 cfg: EvalConfig = EvalConfig(), mode: str = "greedy",
                                 operating_threshold: float = -np.inf) -> PrCurve:
    """One curve over several sequences; matching stays within each sequence."""
    labelled = []
    total = 0
    for dets, gt in pairs:
        entries = dets.entries if isinstance(dets, ParsedFile) else list(dets)
        labelled.extend(label_detections(entries, gt, cfg, mode))
        targets, _ = filter_gt(gt, cfg)
        total += sum(len(v) for v in targets.values())
    return pr_curve(labelled, total, operating_threshold)


def detection_stats(dets: Union[ParsedFile, Iterable[DetEntry]],
                    meta: Optional[SequenceMeta] = None,
                    frame_count: Optional[int] = None) -> DetectionStats:
    entries = dets.entries if isinstance(dets, ParsedFile) else list(dets)
    if frame_count is None:
        if meta is None:
            raise ValueError("need sequence metadata or a frame count")
        frame_count = meta.frame_count
    heights = [d.box.height for d in entries]
    if not heights:
        return DetectionStats(0, 0.0, 0.0, 0.0)
    return DetectionStats(len(heights), len(heights) / frame_count, min(heights), max(heights))


def combine_stats(stats: Sequence[tuple[DetectionStats, int]]) -> DetectionStats:
    """Totals row from per-sequence ``(stats, frame_count)`` pairs."""
    count = sum(s.count for s, _ in stats)
    frames = sum(n for _, n in stats)
    nonempty = [s for s, _ in stats if s.count]
    if not nonempty:
        return DetectionStats(0, 0.0, 0.0, 0.0)
    return DetectionStats(count, count / frames,
                          min(s.min_height for s in nonempty),
                          max(s.max_height for s in nonempty))
