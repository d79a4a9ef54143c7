"""
Occlusion-aware visibility
==========================

The visible fraction of a person is what remains of the box after removing
the part outside the image and every part covered by something in front.
Boxes whose bottom edge is lower in the image stand closer to the camera;
occluder annotations are always in front.
"""

from motbench.geometry import (BoundingBox, GtEntry, ObjectClass, SequenceMeta, clip_to_image,
                               compute_visibility)

meta = SequenceMeta("demo", 1, 30, 200, 150)


def person(ident, l, t, w, h, cls=ObjectClass.PEDESTRIAN):
    return GtEntry(1, ident, BoundingBox(l, t, w, h), True, cls, 1.0)


far = person(1, 40, 20, 30, 60)      # bottom edge 80
near = person(2, 55, 30, 30, 70)     # bottom edge 100, overlaps the right half of `far`
edge = person(3, 180, 40, 40, 60)    # half outside the image
pole = person(4, 150, 0, 10, 150, ObjectClass.OCCLUDER_FULL)

# %%
# ``far`` is partly hidden by ``near``; ``near`` is not hidden at all since
# ``far`` stands behind it.
for p, v in zip((far, near, edge), compute_visibility([far, near, edge], [pole], meta)):
    print(f"person {p.track_id}: visible {v:.3f}")

# %%
# Clipping alone: the part of ``edge`` beyond the right border is lost.
clipped, lost = clip_to_image(edge.box, meta)
print(f"\nclipped to {clipped.as_ltwh()}, {lost:.0%} outside the image")

# %%
# The pole only matters once something stands behind it.
behind_pole = person(5, 140, 50, 30, 40)
(v,) = compute_visibility([behind_pole], [pole], meta)
print(f"person behind the pole: visible {v:.3f}")
