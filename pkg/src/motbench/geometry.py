"""Domain types and bounding-box geometry.

Boxes use the benchmark's 1-based image coordinates: the top-left pixel of
an image is ``(1, 1)`` and a box ``(left, top, width, height)`` covers the
half-open region ``[left, left + width) x [top, top + height)`` of the
continuous plane. Areas are plain ``width * height``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class ObjectClass(enum.IntEnum):
    PEDESTRIAN = 1
    PERSON_ON_VEHICLE = 2
    CAR = 3
    BICYCLE = 4
    MOTORBIKE = 5
    NON_MOTORIZED_VEHICLE = 6
    STATIC_PERSON = 7
    DISTRACTOR = 8
    OCCLUDER = 9
    OCCLUDER_ON_GROUND = 10
    OCCLUDER_FULL = 11
    REFLECTION = 12

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def is_target(self) -> bool:
        return self is ObjectClass.PEDESTRIAN

    @property
    def is_ignorable(self) -> bool:
        """Person-like classes a tracker is neither rewarded nor penalized for."""
        return self in IGNORABLE_CLASSES

    @property
    def is_occluder(self) -> bool:
        return self in OCCLUDER_CLASSES


_LABELS = {
    ObjectClass.PEDESTRIAN: "Pedestrian",
    ObjectClass.PERSON_ON_VEHICLE: "Person on vehicle",
    ObjectClass.CAR: "Car",
    ObjectClass.BICYCLE: "Bicycle",
    ObjectClass.MOTORBIKE: "Motorbike",
    ObjectClass.NON_MOTORIZED_VEHICLE: "Non motorized vehicle",
    ObjectClass.STATIC_PERSON: "Static person",
    ObjectClass.DISTRACTOR: "Distractor",
    ObjectClass.OCCLUDER: "Occluder",
    ObjectClass.OCCLUDER_ON_GROUND: "Occluder on the ground",
    ObjectClass.OCCLUDER_FULL: "Occluder full",
    ObjectClass.REFLECTION: "Reflection",
}

IGNORABLE_CLASSES = frozenset({
    ObjectClass.PERSON_ON_VEHICLE,
    ObjectClass.STATIC_PERSON,
    ObjectClass.DISTRACTOR,
    ObjectClass.REFLECTION,
})
OCCLUDER_CLASSES = frozenset({
    ObjectClass.OCCLUDER,
    ObjectClass.OCCLUDER_ON_GROUND,
    ObjectClass.OCCLUDER_FULL,
})


@dataclass(frozen=True)
class BoundingBox:
    left: float
    top: float
    width: float
    height: float

    def __post_init__(self):
        for name in ("left", "top", "width", "height"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"box {name} must be finite, got {getattr(self, name)!r}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError(
                f"box width and height must be positive, got {self.width} x {self.height}")

    @property
    def right(self) -> float:
        return self.left + self.width

    @property
    def bottom(self) -> float:
        return self.top + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    def as_ltwh(self) -> tuple[float, float, float, float]:
        return (self.left, self.top, self.width, self.height)

    def intersection(self, other: "BoundingBox") -> Optional["BoundingBox"]:
        """Overlap region, or None when the boxes do not share positive area."""
        left = max(self.left, other.left)
        top = max(self.top, other.top)
        right = min(self.right, other.right)
        bottom = min(self.bottom, other.bottom)
        if right <= left or bottom <= top:
            return None
        return BoundingBox(left, top, right - left, bottom - top)

    def shifted(self, dx: float, dy: float) -> "BoundingBox":
        return BoundingBox(self.left + dx, self.top + dy, self.width, self.height)


@dataclass(frozen=True)
class GtEntry:
    frame: int
    track_id: int
    box: BoundingBox
    active: bool
    object_class: ObjectClass
    visibility: float


@dataclass(frozen=True)
class ResultEntry:
    frame: int
    track_id: int
    box: BoundingBox
    confidence: float = -1.0


@dataclass(frozen=True)
class DetEntry:
    frame: int
    box: BoundingBox
    confidence: float


@dataclass(frozen=True)
class SequenceMeta:
    name: str
    frame_count: int
    fps: float = 30.0
    image_width: int = 1920
    image_height: int = 1080

    def __post_init__(self):
        if self.frame_count <= 0:
            raise ValueError(f"frame_count must be positive, got {self.frame_count}")
        if self.fps <= 0:
            raise ValueError(f"fps must be positive, got {self.fps}")
        if self.image_width <= 0 or self.image_height <= 0:
            raise ValueError("image dimensions must be positive")

    @property
    def image_box(self) -> BoundingBox:
        return BoundingBox(1.0, 1.0, float(self.image_width), float(self.image_height))


def iou(a: BoundingBox, b: BoundingBox) -> float:
    if a == b:
        return 1.0
    inter = a.intersection(b)
    if inter is None:
        return 0.0
    overlap = inter.area
    return min(1.0, overlap / (a.area + b.area - overlap))


def iou_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise IoU between two ``(n, 4)`` / ``(m, 4)`` arrays of ltwh boxes."""
    a = np.asarray(a, dtype=float).reshape(-1, 4)
    b = np.asarray(b, dtype=float).reshape(-1, 4)
    if len(a) == 0 or len(b) == 0:
        return np.zeros((len(a), len(b)))
    al, at = a[:, 0:1], a[:, 1:2]
    ar, ab = al + a[:, 2:3], at + a[:, 3:4]
    bl, bt = b[:, 0], b[:, 1]
    br, bb = bl + b[:, 2], bt + b[:, 3]
    iw = np.clip(np.minimum(ar, br) - np.maximum(al, bl), 0, None)
    ih = np.clip(np.minimum(ab, bb) - np.maximum(at, bt), 0, None)
    inter = iw * ih
    union = (a[:, 2] * a[:, 3])[:, None] + b[:, 2] * b[:, 3] - inter
    out = np.minimum(inter / union, 1.0)
    # (l + w) - l is not always w in floating point
    out[(a[:, None, :] == b[None, :, :]).all(axis=2)] = 1.0
    return out


def boxes_to_array(boxes: Iterable[BoundingBox]) -> np.ndarray:
    arr = np.array([b.as_ltwh() for b in boxes], dtype=float)
    return arr.reshape(-1, 4)


def union_area(rects: Sequence[tuple[float, float, float, float]]) -> float:
    """Exact area covered by a set of ``(x0, y0, x1, y1)`` rectangles.

    Sweeps over the compressed x coordinates and merges y intervals inside
    each vertical slab.
    """
    rects = [r for r in rects if r[2] > r[0] and r[3] > r[1]]
    if not rects:
        return 0.0
    xs = sorted({x for r in rects for x in (r[0], r[2])})
    total = 0.0
    for x0, x1 in zip(xs[:-1], xs[1:]):
        spans = sorted((r[1], r[3]) for r in rects if r[0] <= x0 and r[2] >= x1)
        if not spans:
            continue
        covered = 0.0
        lo, hi = spans[0]
        for y0, y1 in spans[1:]:
            if y0 > hi:
                covered += hi - lo
                lo, hi = y0, y1
            else:
                hi = max(hi, y1)
        covered += hi - lo
        total += covered * (x1 - x0)
    return total


def _corners(box: BoundingBox) -> tuple[float, float, float, float]:
    return (box.left, box.top, box.right, box.bottom)


def clip_to_image(box: BoundingBox, meta: SequenceMeta) -> tuple[Optional[BoundingBox], float]:
    """Clip ``box`` to the image and report the fraction of its area cut off."""
    clipped = box.intersection(meta.image_box)
    if clipped is None:
        return None, 1.0
    return clipped, max(0.0, 1.0 - clipped.area / box.area)


def _in_front(other: GtEntry, target: GtEntry) -> bool:
    # ground-plane ordering: lower bottom edge in the image means closer to the camera
    if other.object_class.is_occluder:
        return True
    return other.box.bottom > target.box.bottom


def compute_visibility(targets: Sequence[GtEntry], occluders: Sequence[GtEntry],
                       meta: Optional[SequenceMeta] = None) -> list[float]:
    """Visible fraction of each target box in one frame.

    A target loses the part of its box outside the image and every part
    covered by a box standing in front of it. Boxes from both ``targets``
    and ``occluders`` may occlude; occluder classes always count as being
    in front. With ``meta=None`` the image border is ignored.
    """
    frames = {e.frame for e in targets} | {e.frame for e in occluders}
    if len(frames) > 1:
        raise ValueError(f"entries span several frames: {sorted(frames)}")
    candidates = list(targets) + list(occluders)
    result = []
    for target in targets:
        box = target.box
        visible_region = box
        if meta is not None:
            visible_region = box.intersection(meta.image_box)
            if visible_region is None:
                result.append(0.0)
                continue
        covers = []
        for other in candidates:
            if other is target or not _in_front(other, target):
                continue
            inter = visible_region.intersection(other.box)
            if inter is not None:
                covers.append(_corners(inter))
        visible = visible_region.area - union_area(covers)
        result.append(min(1.0, max(0.0, visible / box.area)))
    return result
