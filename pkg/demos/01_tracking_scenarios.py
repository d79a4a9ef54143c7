"""
Identity switches, fragmentations and carry-over
================================================

Four tiny hand-built sequences, each showing one rule of the frame-by-frame
matching. Boxes are 10x10 on a single row, so a horizontal offset ``d``
between two boxes gives IoU ``(10 - d) / (10 + d)`` and boxes match up to
``d = 10/3``.
"""

from motbench import compute_metrics, match_sequence
from motbench.formats import GROUND_TRUTH, RESULT, ParsedFile
from motbench.geometry import BoundingBox, GtEntry, ObjectClass, ResultEntry

RED, BLUE = 1, 2


def gt(rows):
    return ParsedFile(GROUND_TRUTH, tuple(sorted(
        (GtEntry(t, i, BoundingBox(x, 0, 10, 10), True, ObjectClass.PEDESTRIAN, 1.0)
         for t, i, x in rows), key=lambda e: (e.frame, e.track_id))))


def res(rows):
    return ParsedFile(RESULT, tuple(sorted(
        (ResultEntry(t, i, BoundingBox(x, 0, 10, 10)) for t, i, x in rows),
        key=lambda e: (e.frame, e.track_id))))


def show(title, truth, hyps):
    log = match_sequence(truth, hyps)
    m = compute_metrics(log)
    print(f"\n{title}")
    for f in log.frames:
        pairs = " ".join(f"{m.gt_id}->{m.hyp_id}{'*' if m.carried_over else ''}"
                         for m in f.matches)
        print(f"  frame {f.frame}: {pairs or '-':14s} FP {list(f.false_positives)} "
              f"FN {list(f.misses)} switches {list(f.id_switches)}")
    print(f"  FP={m.fp} FN={m.fn} IDSW={m.idsw} FM={m.fm} MOTA={m.mota:.1f}")
    print(f"  fragmentations (target, frame): {log.fragmentations()}")


# %%
# A switch: the red track follows the target for three frames, then a new
# blue track takes over. One identity switch, no misses.
show("hand-over from red to blue",
     gt([(t, 1, 0.0) for t in range(1, 7)]),
     res([(t, RED, 0.5) for t in (1, 2, 3)] + [(t, BLUE, 0.5) for t in (4, 5, 6)]))

# %%
# A gap before the hand-over adds a miss and a fragmentation; the switch is
# still counted because the last known hypothesis for the target was red.
show("lost for one frame, then picked up by blue",
     gt([(t, 1, 0.0) for t in range(1, 7)]),
     res([(t, RED, 0.5) for t in (1, 2)] + [(t, BLUE, 0.5) for t in (4, 5, 6)]))

# %%
# Carry-over: once B is matched to blue it keeps blue while the pair still
# overlaps enough, even when red drifts onto B and overlaps it better.
# Starred pairs are carried over from the previous frame.
show("carried-over pairs block better candidates",
     gt([(t, 1, 0.0) for t in range(1, 7)] + [(t, 2, 3.0) for t in range(1, 7)]),
     res([(1, RED, 1.5), (2, RED, 2.5), (3, RED, 3.5), (4, RED, 3.5), (5, RED, 3.5),
          (6, RED, 7.0)] + [(1, BLUE, 5.0), (2, BLUE, 5.5), (3, BLUE, 6.0), (4, BLUE, 6.0),
                            (5, BLUE, 6.0)]))

# %%
# Re-acquisition: A vanishes in frame 4 and red moves to B. When A returns,
# red is still bound to B, so A is matched to blue: one switch for A.
show("target re-appears and gets the free track",
     gt([(t, 1, 0.0) for t in (1, 2, 3, 5, 6)] + [(t, 2, 2.0) for t in (4, 5, 6)]),
     res([(t, RED, 0.0) for t in (1, 2, 3)] + [(t, RED, 0.5) for t in (4, 5, 6)] +
         [(t, BLUE, 2.5) for t in (5, 6)]))
