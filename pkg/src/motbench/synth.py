"""Synthetic sequences with a known set of injected tracking errors.

Targets move with constant velocity plus Gaussian jitter. The degraded
result copies the ground truth with small localisation noise, then

* drops boxes (each one becomes a miss),
* adds spurious boxes far from every target (each one a false positive),
* relabels a target's hypothesis with a fresh id (an identity switch the
  next time the target is tracked).

With ``separated=True`` every target has its own horizontal lane, so the
manifest counts equal the FN/FP/IDSW an evaluator must report.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .formats import GROUND_TRUTH, RESULT, ParsedFile, PathLike, save_csv, write_seqinfo, write_seqmap
from .geometry import BoundingBox, GtEntry, ObjectClass, ResultEntry, SequenceMeta

BOX_W, BOX_H = 40.0, 100.0
LANE = 150.0
MAX_NOISE = 2.0


@dataclass(frozen=True)
class SynthSpec:
    frames: int = 100
    targets: int = 5
    drop_rate: float = 0.0
    spurious_rate: float = 0.0
    swap_rate: float = 0.0
    seed: int = 0
    separated: bool = True
    noise: float = 1.0
    name: str = "SYNTH-01"

    def __post_init__(self):
        if self.frames < 1 or self.targets < 0:
            raise ValueError("need at least one frame and a non-negative target count")
        for rate in ("drop_rate", "spurious_rate", "swap_rate"):
            if not 0.0 <= getattr(self, rate) <= 1.0:
                raise ValueError(f"{rate} must lie in [0, 1]")


@dataclass(frozen=True)
class SynthData:
    spec: SynthSpec
    meta: SequenceMeta
    gt: ParsedFile
    result: ParsedFile
    manifest: dict


def generate(spec: SynthSpec) -> SynthData:
    rng = np.random.default_rng(spec.seed)
    n, T = spec.targets, spec.frames
    width = 1920
    height = int(max(1080, LANE * (n + 2)))

    gt_entries, res_entries = [], []
    next_hyp = 1
    dropped = swaps = relabels = 0
    for tid in range(1, n + 1):
        start = int(rng.integers(1, T + 1))
        end = int(rng.integers(start, T + 1))
        if spec.separated:
            x0, y0 = rng.uniform(100, width - 200), LANE * (tid - 1) + 20.0
            vx, vy = rng.uniform(-4, 4), 0.0
        else:
            x0, y0 = rng.uniform(100, 400), rng.uniform(100, 300)
            vx, vy = rng.uniform(-6, 6), rng.uniform(-3, 3)
        hyp_id = next_hyp
        next_hyp += 1
        last_emitted = None
        for t in range(start, end + 1):
            dt = t - start
            jitter = rng.normal(0, 1.0, 2) if spec.separated else rng.normal(0, 2.0, 2)
            if spec.separated:
                jitter[1] = np.clip(jitter[1], -MAX_NOISE, MAX_NOISE)
            left = round(x0 + vx * dt + jitter[0], 1)
            top = round(y0 + vy * dt + jitter[1], 1)
            box = BoundingBox(left, top, BOX_W, BOX_H)
            gt_entries.append(GtEntry(t, tid, box, True, ObjectClass.PEDESTRIAN, 1.0))

            if t > start and rng.random() < spec.swap_rate:
                hyp_id = next_hyp
                next_hyp += 1
                relabels += 1
            if rng.random() < spec.drop_rate:
                dropped += 1
                continue
            noise = np.clip(rng.normal(0, spec.noise, 2), -MAX_NOISE, MAX_NOISE)
            hbox = BoundingBox(round(left + noise[0], 1), round(top + noise[1], 1), BOX_W, BOX_H)
            res_entries.append(ResultEntry(t, hyp_id, hbox, 1.0))
            if last_emitted is not None and last_emitted != hyp_id:
                swaps += 1
            last_emitted = hyp_id

    spurious = 0
    band = LANE * n + 20.0
    for t in range(1, T + 1):
        k = int(rng.binomial(n, spec.spurious_rate)) if n else 0
        for j in range(k):
            if spec.separated:
                left, top = 100.0 + j * 2 * BOX_W, band
            else:
                left, top = 1200.0 + j * 2 * BOX_W, 800.0
            res_entries.append(ResultEntry(t, next_hyp, BoundingBox(left, top, BOX_W, BOX_H), 0.5))
            next_hyp += 1
            spurious += 1

    meta = SequenceMeta(spec.name, T, 30.0, width, height)
    gt = ParsedFile(GROUND_TRUTH, tuple(sorted(gt_entries, key=lambda e: (e.frame, e.track_id))))
    res = ParsedFile(RESULT, tuple(sorted(res_entries, key=lambda e: (e.frame, e.track_id))))
    manifest = {
        "sequence": spec.name,
        "gt_boxes": len(gt_entries),
        "dropped": dropped,
        "spurious": spurious,
        "id_switches": swaps,
        "relabels": relabels,
        "spec": asdict(spec),
    }
    return SynthData(spec, meta, gt, res, manifest)


def write_synth(data: SynthData, out: PathLike) -> Path:
    """Write ``gt/<name>/...``, ``res/<name>.txt``, ``seqmap.txt`` and ``manifest.json``."""
    out = Path(out)
    name = data.spec.name
    seq_dir = out / "gt" / name
    save_csv(data.gt, seq_dir / "gt" / "gt.txt")
    write_seqinfo(data.meta, seq_dir / "seqinfo.ini")
    save_csv(data.result, out / "res" / f"{name}.txt")
    write_seqmap([name], out / "seqmap.txt")
    (out / "manifest.json").write_text(json.dumps(data.manifest, indent=2, sort_keys=True) + "\n")
    return out
