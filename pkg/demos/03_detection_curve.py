"""
Precision and recall of a detector
==================================

Detections are labelled true or false positive in order of confidence and
the confidence threshold is swept to obtain the curve. Detections on
ignorable annotations (static people, reflections, ...) count as neither.
"""

import numpy as np

from motbench.detection import detection_stats, evaluate_detections
from motbench.formats import GROUND_TRUTH, ParsedFile
from motbench.geometry import BoundingBox, DetEntry, GtEntry, ObjectClass
from motbench.matching import EvalConfig

rng = np.random.default_rng(0)

# %%
# 50 frames with 8 pedestrians and one static person each.
gt_entries = []
for t in range(1, 51):
    for k in range(8):
        gt_entries.append(GtEntry(t, k + 1, BoundingBox(60.0 * k + 1, 100, 30, 80), True,
                                  ObjectClass.PEDESTRIAN, 1.0))
    gt_entries.append(GtEntry(t, 99, BoundingBox(600, 100, 30, 80), False,
                              ObjectClass.STATIC_PERSON, 1.0))
gt = ParsedFile(GROUND_TRUTH, tuple(gt_entries))

# %%
# A noisy detector: good boxes score high, misplaced ones and background
# clutter score low, and every now and then a person is missed entirely.
dets = []
for e in gt_entries:
    if rng.random() < 0.1:
        continue
    off = rng.normal(0, 3 if rng.random() < 0.8 else 20, 2)
    score = float(rng.normal(2.0, 0.7) - abs(off).sum() / 10)
    dets.append(DetEntry(e.frame, e.box.shifted(*off), round(score, 3)))
for t in range(1, 51):
    for _ in range(rng.poisson(2)):
        dets.append(DetEntry(t, BoundingBox(*rng.uniform(0, 600, 2), 30, 80),
                             round(float(rng.normal(0.0, 0.7)), 3)))

stats = detection_stats(dets, frame_count=50)
print(f"{stats.count} detections, {stats.per_frame:.2f} per frame, "
      f"heights {stats.min_height:.0f}-{stats.max_height:.0f}")

# %%
# Greedy matching is the protocol default; optimal per-frame matching can
# only find more true positives.
for mode in ("greedy", "hungarian"):
    curve = evaluate_detections(dets, gt, mode=mode, operating_threshold=1.0)
    p, r = curve.operating_point
    print(f"{mode:9s} final recall {curve.points[-1].recall:.3f}, "
          f"at confidence 1.0: precision {p:.3f} recall {r:.3f}")

# %%
# A stricter overlap criterion lowers recall at every threshold.
for thr in (0.3, 0.5, 0.7):
    curve = evaluate_detections(dets, gt, EvalConfig(iou_threshold=thr))
    print(f"IoU >= {thr}: recall {curve.points[-1].recall:.3f}, "
          f"precision {curve.points[-1].precision:.3f}")

print("\nfirst rows of the curve:")
print("".join(curve.to_csv().splitlines(keepends=True)[:6]))
