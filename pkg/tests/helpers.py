"""Shared fixtures and independent oracles for the test-suite."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from motbench.assignment import brute_force_assignment
from motbench.formats import (DETECTION, GROUND_TRUTH, RESULT, ParsedFile, save_csv, write_seqinfo,
                              write_seqmap)
from motbench.geometry import (BoundingBox, DetEntry, GtEntry, ObjectClass, ResultEntry,
                               SequenceMeta)
from motbench.synth import SynthSpec, generate, write_synth

W, H = 10.0, 10.0


def gt_file(rows) -> ParsedFile:
    """rows: (frame, id, left[, top, width, height, active, class])."""
    entries = []
    for r in rows:
        frame, ident, left, *rest = r
        top, width, height, active, cls = (list(rest) + [0.0, W, H, 1, 1][len(rest):])
        entries.append(GtEntry(frame, ident, BoundingBox(left, top, width, height),
                               bool(active), ObjectClass(cls), 1.0))
    entries.sort(key=lambda e: (e.frame, e.track_id))
    return ParsedFile(GROUND_TRUTH, tuple(entries))


def res_file(rows) -> ParsedFile:
    """rows: (frame, id, left[, top, width, height])."""
    entries = []
    for r in rows:
        frame, ident, left, *rest = r
        top, width, height = (list(rest) + [0.0, W, H][len(rest):])
        entries.append(ResultEntry(frame, ident, BoundingBox(left, top, width, height), 1.0))
    entries.sort(key=lambda e: (e.frame, e.track_id))
    return ParsedFile(RESULT, tuple(entries))


# Boxes are 10x10 on one row; a horizontal offset d gives IoU (10 - d) / (10 + d),
# so pairs match up to d = 10/3.
RED, BLUE = 1, 2


def swap_scenario():
    """One target; red covers frames 1-3, blue frames 4-6."""
    gt = gt_file([(t, 1, 0.0) for t in range(1, 7)])
    res = res_file([(t, RED, 0.5) for t in (1, 2, 3)] + [(t, BLUE, 0.5) for t in (4, 5, 6)])
    return gt, res


def gap_swap_scenario():
    """Tracked in frames 1-2, lost in frame 3, re-acquired by a new track."""
    gt = gt_file([(t, 1, 0.0) for t in range(1, 7)])
    res = res_file([(t, RED, 0.5) for t in (1, 2)] + [(t, BLUE, 0.5) for t in (4, 5, 6)])
    return gt, res


def crossing_scenario():
    """Two nearby targets; the frame-1 assignment is carried over and loses both.

    Frame 1: A-r and B-b is the only two-pair matching. From frame 3 the red
    track drifts onto B, but B stays bound to b, so A is missed and r is a
    false positive in frames 3-6; in frame 6 b ends and r is too far from B.
    """
    gt = gt_file([(t, 1, 0.0) for t in range(1, 7)] + [(t, 2, 3.0) for t in range(1, 7)])
    r_pos = {1: 1.5, 2: 2.5, 3: 3.5, 4: 3.5, 5: 3.5, 6: 7.0}
    b_pos = {1: 5.0, 2: 5.5, 3: 6.0, 4: 6.0, 5: 6.0}
    res = res_file([(t, RED, x) for t, x in r_pos.items()] +
                   [(t, BLUE, x) for t, x in b_pos.items()])
    return gt, res


def reacquire_scenario():
    """Target A disappears in frame 4; red jumps to B and blue picks A up.

    In frame 5 red is closer to A than blue, but red is still bound to B
    from frame 4, so A goes to blue: one fragmentation and one ID switch.
    """
    gt = gt_file([(t, 1, 0.0) for t in (1, 2, 3, 5, 6)] + [(t, 2, 2.0) for t in (4, 5, 6)])
    res = res_file([(t, RED, 0.0) for t in (1, 2, 3)] + [(t, RED, 0.5) for t in (4, 5, 6)] +
                   [(t, BLUE, 2.5) for t in (5, 6)])
    return gt, res


def raster_visible(target, others, image=None):
    """Pixel-count oracle for integer boxes: (target ltwh, [(ltwh, always_front)], (W, H))."""
    l, t, w, h = (int(v) for v in target)
    xs = np.arange(l, l + w)[None, :]
    ys = np.arange(t, t + h)[:, None]
    covered = np.zeros((h, w), dtype=bool)
    if image is not None:
        iw, ih = image
        covered |= (xs < 1) | (xs > iw) | (ys < 1) | (ys > ih)
    for (ol, ot, ow, oh), always in others:
        if always or ot + oh > t + h:
            covered |= (xs >= ol) & (xs < ol + ow) & (ys >= ot) & (ys < ot + oh)
    return 1.0 - covered.sum() / covered.size


def _jaccard(a, b):
    ax0, ay0, aw, ah = a
    bx0, by0, bw, bh = b
    iw = min(ax0 + aw, bx0 + bw) - max(ax0, bx0)
    ih = min(ay0 + ah, by0 + bh) - max(ay0, by0)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (aw * ah + bw * bh - inter)


def _exhaustive(rows, cols, score, allowed):
    cost = np.full((len(rows), len(cols)), np.inf)
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            s = score(r, c)
            if allowed(s):
                cost[i, j] = 1.0 - s
    return [(rows[i], cols[j]) for i, j in brute_force_assignment(cost)]


def reference_events(gt: ParsedFile, res: ParsedFile, frame_count: int,
                     thr: float = 0.5, dthr: float = 0.5):
    """Plain transcription of the matching protocol with exhaustive assignment.

    Returns per frame a dict with matches, fp, fn, idsw and fm sets.
    """
    ignorable = {2, 7, 8, 12}
    out = []
    prev, last = {}, {}
    tracked_at = {}
    present_at = {}
    for t in range(1, frame_count + 1):
        targets = {e.track_id: e.box.as_ltwh() for e in gt.entries
                   if e.frame == t and e.object_class == 1 and e.active}
        ign = [e.box.as_ltwh() for e in gt.entries if e.frame == t and (
            int(e.object_class) in ignorable or (e.object_class == 1 and not e.active))]
        hyps = {h.track_id: h.box.as_ltwh() for h in res.entries if h.frame == t}
        for g in targets:
            present_at.setdefault(g, set()).add(t)

        pairs = {}
        for g, h in prev.items():
            if g in targets and h in hyps and _jaccard(targets[g], hyps[h]) >= thr:
                pairs[g] = h
        free_h = sorted(h for h in hyps if h not in pairs.values())
        ign_ids = list(range(len(ign)))
        gone = {h for _, h in _exhaustive(ign_ids, free_h,
                                          lambda i, h: _jaccard(ign[i], hyps[h]),
                                          lambda s: s > dthr)}
        free_h = [h for h in free_h if h not in gone]
        free_g = sorted(g for g in targets if g not in pairs)
        for g, h in _exhaustive(free_g, free_h, lambda g, h: _jaccard(targets[g], hyps[h]),
                                lambda s: s >= thr):
            pairs[g] = h

        switches = set()
        for g in sorted(pairs):
            h = pairs[g]
            if g in last and last[g] != h:
                switches.add((g, last[g], h))
            last[g] = h
            tracked_at.setdefault(g, set()).add(t)
        out.append({
            "matches": set(pairs.items()),
            "fp": {h for h in hyps if h not in pairs.values() and h not in gone},
            "fn": {g for g in targets if g not in pairs},
            "idsw": switches,
            "suppressed": gone,
            "fm": set(),
        })
        prev = dict(pairs)

    for g, frames in tracked_at.items():
        for t in range(2, frame_count + 1):
            if (t - 1) in frames and t not in frames and any(u > t for u in frames):
                out[t - 1]["fm"].add(g)
    return out


def event_sets(log):
    """Per-frame event sets of an EventLog in the same shape as reference_events."""
    out = []
    fm = {}
    for g, t in log.fragmentations():
        fm.setdefault(t, set()).add(g)
    for f in log.frames:
        out.append({
            "matches": {(m.gt_id, m.hyp_id) for m in f.matches},
            "fp": set(f.false_positives),
            "fn": set(f.misses),
            "idsw": set(f.id_switches),
            "suppressed": set(f.suppressed_hyps),
            "fm": fm.get(f.frame, set()),
        })
    return out


def random_sequence(rng: np.random.Generator, max_targets=5, max_frames=10):
    """Small crowded scene with noisy, id-swapping hypotheses and ignorable boxes."""
    n = int(rng.integers(1, max_targets + 1))
    frames = int(rng.integers(1, max_frames + 1))
    gt_rows, res_rows = [], []
    next_id = 100
    for g in range(1, n + 1):
        start = int(rng.integers(1, frames + 1))
        end = int(rng.integers(start, frames + 1))
        x, y = rng.uniform(0, 60, 2)
        vx, vy = rng.uniform(-4, 4, 2)
        hyp = g
        for t in range(start, end + 1):
            if rng.random() < 0.15:
                continue
            box = (round(x + vx * (t - start), 1), round(y + vy * (t - start), 1), 20.0, 40.0)
            flag, cls = 1, 1
            u = rng.random()
            if u < 0.08:
                flag = 0
            elif u < 0.14:
                cls = int(rng.choice([2, 7, 8, 12, 3]))
            gt_rows.append((t, g, *box, flag, cls))
            if rng.random() < 0.2:
                hyp = int(rng.integers(1, n + 1)) if rng.random() < 0.5 else next_id
                next_id += 1
            if rng.random() < 0.8:
                nx, ny = rng.normal(0, 4, 2)
                res_rows.append((t, hyp, round(box[0] + nx, 1), round(box[1] + ny, 1), 20.0, 40.0))
    for t in range(1, frames + 1):
        for _ in range(int(rng.integers(0, 3))):
            x, y = rng.uniform(0, 80, 2)
            res_rows.append((t, next_id, round(x, 1), round(y, 1), 20.0, 40.0))
            next_id += 1
    # one box per (frame, id)
    seen, uniq = set(), []
    for r in res_rows:
        if (r[0], r[1]) not in seen:
            seen.add((r[0], r[1]))
            uniq.append(r)
    return gt_file(gt_rows), res_file(uniq), frames


# Published per-sequence figures used as arithmetic fixtures.
# name: (frames, width, height, pedestrian boxes, density)
SEQUENCE_TABLE = {
    "MOT16-02": (600, 1920, 1080, 17833, 29.7),
    "MOT16-04": (1050, 1920, 1080, 47557, 45.3),
    "MOT16-05": (837, 640, 480, 6818, 8.1),
}
# name: (frames, detections, detections per frame, min height, max height)
DETECTION_TABLE = {
    "MOT16-01": (450, 3775, 8.39, 19.00, 258.92),
    "MOT16-02": (600, 7267, 12.11, 19.00, 341.97),
    "MOT16-03": (1500, 85854, 57.24, 19.00, 297.57),
    "MOT16-04": (1050, 39437, 37.56, 19.00, 341.97),
    "MOT16-05": (837, 4333, 5.18, 19.00, 225.27),
    "MOT16-06": (1194, 7851, 6.58, 19.00, 210.12),
    "MOT16-07": (500, 11309, 22.62, 19.00, 319.00),
    "MOT16-08": (625, 10042, 16.07, 19.00, 518.84),
    "MOT16-09": (525, 5976, 11.38, 19.00, 451.55),
    "MOT16-10": (654, 8832, 13.50, 19.00, 366.58),
    "MOT16-11": (900, 8590, 9.54, 19.00, 518.84),
    "MOT16-12": (900, 7764, 8.63, 19.00, 556.15),
    "MOT16-13": (750, 5355, 7.14, 19.00, 210.12),
    "MOT16-14": (750, 8781, 11.71, 19.00, 258.92),
}
DETECTION_TOTAL = (215166, 19.15, 19.00, 556.15)


def synthetic_gt(boxes, frames, extra=None) -> ParsedFile:
    """``boxes`` pedestrian entries filling frames round-robin, plus ``extra`` per class."""
    out = [GtEntry(k % frames + 1, k // frames + 1, BoundingBox(1, 1, 10, 20), True,
                   ObjectClass.PEDESTRIAN, 1.0) for k in range(boxes)]
    for cls, count in (extra or {}).items():
        out += [GtEntry(k % frames + 1, 1000 * int(cls) + k // frames, BoundingBox(1, 1, 10, 20),
                        False, cls, 1.0) for k in range(count)]
    out.sort(key=lambda e: (e.frame, e.track_id))
    return ParsedFile(GROUND_TRUTH, tuple(out))


def synthetic_dets(count, frames, min_height, max_height, seed=0) -> ParsedFile:
    """``count`` detections spread over ``frames``; heights span exactly [min, max]."""
    rng = np.random.default_rng(seed)
    heights = np.round(rng.uniform(min_height, max_height, count), 2)
    heights[0], heights[-1] = min_height, max_height
    out = [DetEntry(k % frames + 1, BoundingBox(float(k % 97) * 10 + 1, 1.0, h / 2.5, float(h)),
                    round(float(rng.uniform(-1, 3)), 3))
           for k, h in enumerate(heights)]
    out.sort(key=lambda d: d.frame)
    return ParsedFile(DETECTION, tuple(out))


MOCK_TRACKER = Path(__file__).parent / "data" / "mock_tracker.py"
DEFAULT_SEARCH = {"a": 1.0, "b": 0.5}


def mock_quality(a, b):
    return min(1.0, max(0.0, 1.0 - abs(a - 1.3) - abs(b - 0.4)))


def search_fixture(root: Path):
    """Two clean synthetic training sequences under ``root/gt``; returns (gt_root, names, sizes)."""
    names, sizes = [], {}
    for i, frames in enumerate((40, 25)):
        data = generate(SynthSpec(frames=frames, targets=4, seed=10 + i, name=f"TRAIN-0{i + 1}"))
        write_synth(data, root)
        names.append(data.spec.name)
        sizes[data.spec.name] = len(data.gt)
    return root / "gt", names, sizes


def expected_mota(params, sizes):
    """MOTA the mock tracker earns, computed without running the evaluator."""
    q = mock_quality(params["a"], params["b"])
    kept = sum(math.floor(q * n) for n in sizes.values())
    return 100.0 * kept / sum(sizes.values())


def write_benchmark(root: Path, sequences: dict):
    """Lay out ``{name: (gt, res, frames)}`` on disk; returns (gt_root, res_dir, seqmap)."""
    gt_root, res_dir = root / "gt", root / "res"
    for name, (gt, res, frames) in sequences.items():
        save_csv(gt, gt_root / name / "gt" / "gt.txt")
        write_seqinfo(SequenceMeta(name, frames, 30.0, 1920, 1080), gt_root / name / "seqinfo.ini")
        save_csv(res, res_dir / f"{name}.txt")
    seqmap = root / "seqmap.txt"
    write_seqmap(list(sequences), seqmap)
    return gt_root, res_dir, seqmap
