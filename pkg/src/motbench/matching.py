"""Frame-by-frame tracker-to-target assignment.

For every frame, in order:

1. GT-hypothesis pairs matched in the previous frame are kept if they
   still overlap by at least the IoU threshold, even when a better
   hypothesis exists.
2. Remaining hypotheses that overlap an ignorable annotation (distractor,
   static person, reflection, person on vehicle) by more than the
   distractor threshold are matched one-to-one to those annotations and
   dropped from the frame.
3. Remaining targets and hypotheses are matched optimally on ``1 - IoU``.
4. A target whose matched hypothesis differs from its last known one
   counts an identity switch; the last known hypothesis survives frames
   in which the target is untracked.
5. Unmatched targets are misses, unmatched hypotheses false positives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .assignment import FORBIDDEN, solve_assignment
from .formats import GROUND_TRUTH, RESULT, ParsedFile, ValidationError
from .geometry import GtEntry, ObjectClass, ResultEntry, boxes_to_array, iou_matrix


@dataclass(frozen=True)
class EvalConfig:
    iou_threshold: float = 0.5
    min_height: float = 0.0
    distractor_overlap_threshold: float = 0.5
    filter_result_height: bool = False

    def __post_init__(self):
        for name in ("iou_threshold", "distractor_overlap_threshold"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {value}")
        if self.min_height < 0:
            raise ValueError(f"min_height must be >= 0, got {self.min_height}")


@dataclass(frozen=True)
class MatchRecord:
    gt_id: int
    hyp_id: int
    overlap: float
    carried_over: bool = False


@dataclass(frozen=True)
class FrameEvents:
    frame: int
    matches: tuple[MatchRecord, ...] = ()
    false_positives: tuple[int, ...] = ()
    misses: tuple[int, ...] = ()
    id_switches: tuple[tuple[int, int, int], ...] = ()
    gt_count: int = 0
    suppressed_hyps: tuple[int, ...] = ()

    @property
    def tp(self) -> int:
        return len(self.matches)

    @property
    def fp(self) -> int:
        return len(self.false_positives)

    @property
    def fn(self) -> int:
        return len(self.misses)

    @property
    def idsw(self) -> int:
        return len(self.id_switches)


@dataclass(frozen=True)
class EventLog:
    sequence: str
    frame_count: int
    frames: tuple[FrameEvents, ...]
    lifespans: dict = field(default_factory=dict)
    tracked: dict = field(default_factory=dict)

    def fragmentations(self) -> list[tuple[int, int]]:
        """``(gt_id, frame)`` for every interruption that is later resumed.

        The frame is the first one after a tracked run ends; a gap in which
        the target is not annotated also interrupts tracking.
        """
        out = []
        for gt_id, frames in self.tracked.items():
            ordered = sorted(frames)
            for prev, nxt in zip(ordered, ordered[1:]):
                if nxt > prev + 1:
                    out.append((gt_id, prev + 1))
        return sorted(out, key=lambda p: (p[1], p[0]))

    def track_coverage(self) -> dict[int, float]:
        """Tracked fraction of each target's life span."""
        return {gt_id: len(self.tracked.get(gt_id, ())) / len(span)
                for gt_id, span in self.lifespans.items() if span}


def filter_gt(gt: ParsedFile, cfg: EvalConfig = EvalConfig()):
    """Split GT into evaluated targets and ignorable annotations, per frame.

    Targets are active pedestrians at least ``min_height`` tall. Inactive
    or too-small pedestrians join the ignorable classes; every other class
    is dropped.
    """
    targets: dict[int, list[GtEntry]] = {}
    ignorables: dict[int, list[GtEntry]] = {}
    for e in gt.entries:
        cls = e.object_class
        if cls is ObjectClass.PEDESTRIAN:
            if e.active and e.box.height >= cfg.min_height:
                targets.setdefault(e.frame, []).append(e)
            else:
                ignorables.setdefault(e.frame, []).append(e)
        elif cls.is_ignorable:
            ignorables.setdefault(e.frame, []).append(e)
    return targets, ignorables


def suppress_distractor_hits(frame_hyps, ignorables, cfg: EvalConfig = EvalConfig()):
    """Drop hypotheses that cover an ignorable annotation.

    Returns ``(kept, suppressed_ids)``. Each ignorable box claims at most
    one hypothesis and vice versa; pairs must exceed the distractor
    overlap threshold.
    """
    frame_hyps = list(frame_hyps)
    if not frame_hyps or not ignorables:
        return frame_hyps, []
    ov = iou_matrix(boxes_to_array(e.box for e in ignorables),
                    boxes_to_array(h.box for h in frame_hyps))
    cost = np.where(ov > cfg.distractor_overlap_threshold, 1.0 - ov, FORBIDDEN)
    claimed = {k for _, k in solve_assignment(cost)}
    kept = [h for k, h in enumerate(frame_hyps) if k not in claimed]
    suppressed = [frame_hyps[k].track_id for k in sorted(claimed)]
    return kept, sorted(suppressed)


def match_sequence(gt: ParsedFile, res: ParsedFile, cfg: EvalConfig = EvalConfig(),
                   frame_count: Optional[int] = None, sequence: str = "") -> EventLog:
    """Evaluate one sequence and return its per-frame event stream.

    ``frame_count`` defaults to the last annotated or reported frame.
    Raises :class:`ValidationError` for entries beyond ``frame_count``.
    """
    if gt.kind != GROUND_TRUTH:
        raise ValueError(f"expected ground truth, got {gt.kind}")
    if res.kind != RESULT:
        raise ValueError(f"expected results, got {res.kind}")
    last = max([e.frame for e in gt.entries] + [e.frame for e in res.entries], default=0)
    if frame_count is None:
        frame_count = max(last, 1)
    for parsed in (res, gt):
        bad = [e.frame for e in parsed.entries if e.frame > frame_count]
        if bad:
            raise ValidationError(
                f"frame {bad[0]} outside [1, {frame_count}]", parsed.source or sequence)

    targets, ignorables = filter_gt(gt, cfg)
    hyps_by_frame: dict[int, list[ResultEntry]] = {}
    for h in res.entries:
        if cfg.filter_result_height and h.box.height < cfg.min_height:
            continue
        hyps_by_frame.setdefault(h.frame, []).append(h)

    thr = cfg.iou_threshold
    prev: dict[int, int] = {}
    last_known: dict[int, int] = {}
    lifespans: dict[int, list[int]] = {}
    tracked: dict[int, set[int]] = {}
    frames = []

    for t in range(1, frame_count + 1):
        tgts = sorted(targets.get(t, []), key=lambda e: e.track_id)
        hyps = sorted(hyps_by_frame.get(t, []), key=lambda h: h.track_id)
        for e in tgts:
            lifespans.setdefault(e.track_id, []).append(t)

        ov = iou_matrix(boxes_to_array(e.box for e in tgts),
                        boxes_to_array(h.box for h in hyps))
        gt_index = {e.track_id: i for i, e in enumerate(tgts)}
        hyp_index = {h.track_id: k for k, h in enumerate(hyps)}

        matched: dict[int, int] = {}  # target row -> hyp column
        carried = set()
        for gt_id, hyp_id in prev.items():
            i, k = gt_index.get(gt_id), hyp_index.get(hyp_id)
            if i is not None and k is not None and ov[i, k] >= thr:
                matched[i] = k
                carried.add(i)

        taken = set(matched.values())
        candidates = [h for k, h in enumerate(hyps) if k not in taken]
        _, suppressed = suppress_distractor_hits(candidates, ignorables.get(t, []), cfg)
        gone = taken | {hyp_index[s] for s in suppressed}

        rows = [i for i in range(len(tgts)) if i not in matched]
        cols = [k for k in range(len(hyps)) if k not in gone]
        if rows and cols:
            sub = ov[np.ix_(rows, cols)]
            cost = np.where(sub >= thr, 1.0 - sub, FORBIDDEN)
            for r, c in solve_assignment(cost):
                matched[rows[r]] = cols[c]

        records, switches = [], []
        for i in sorted(matched):
            k = matched[i]
            gt_id, hyp_id = tgts[i].track_id, hyps[k].track_id
            before = last_known.get(gt_id)
            if before is not None and before != hyp_id:
                switches.append((gt_id, before, hyp_id))
            last_known[gt_id] = hyp_id
            tracked.setdefault(gt_id, set()).add(t)
            records.append(MatchRecord(gt_id, hyp_id, float(ov[i, k]), i in carried))

        used = set(matched.values())
        frames.append(FrameEvents(
            frame=t,
            matches=tuple(records),
            false_positives=tuple(hyps[k].track_id for k in cols if k not in used),
            misses=tuple(tgts[i].track_id for i in range(len(tgts)) if i not in matched),
            id_switches=tuple(switches),
            gt_count=len(tgts),
            suppressed_hyps=tuple(suppressed),
        ))
        prev = {r.gt_id: r.hyp_id for r in records}

    return EventLog(
        sequence=sequence,
        frame_count=frame_count,
        frames=tuple(frames),
        lifespans={g: tuple(f) for g, f in lifespans.items()},
        tracked={g: frozenset(f) for g, f in tracked.items()},
    )
