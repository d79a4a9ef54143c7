"""Reading and writing benchmark files.

Each CSV line holds one object instance::

    frame, id, left, top, width, height, conf/flag, class, visibility

Detections carry ``-1`` as id, ground truth uses the 7th column as an
active flag. Sequence directories follow the usual layout::

    <root>/<Sequence-Name>/seqinfo.ini
    <root>/<Sequence-Name>/gt/gt.txt
    <root>/<Sequence-Name>/det/det.txt
"""

from __future__ import annotations

import configparser
import logging
import math
import os
import zipfile
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence, Union

from .geometry import BoundingBox, DetEntry, GtEntry, ObjectClass, ResultEntry, SequenceMeta

log = logging.getLogger(__name__)

GROUND_TRUTH = "ground_truth"
RESULT = "result"
DETECTION = "detection"
KINDS = (GROUND_TRUTH, RESULT, DETECTION)

Entry = Union[GtEntry, ResultEntry, DetEntry]
PathLike = Union[str, os.PathLike]


class FormatError(ValueError):
    """A line that cannot be parsed (wrong field count, non-numeric value)."""

    def __init__(self, message, source=None, line=None):
        self.source = source
        self.line = line
        where = ""
        if source is not None:
            where = f"{source}"
        if line is not None:
            where = f"{where}:{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class ValidationError(FormatError):
    """Well-formed input that violates a semantic constraint."""


class SubmissionIncompleteError(ValueError):
    def __init__(self, sequence):
        self.sequence = sequence
        super().__init__(f"missing result for {sequence}")


@dataclass(frozen=True)
class ParsedFile:
    kind: str
    entries: tuple = ()
    warnings: tuple = ()
    source: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown file kind {self.kind!r}")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def frames(self) -> dict[int, list]:
        out: dict[int, list] = {}
        for e in self.entries:
            out.setdefault(e.frame, []).append(e)
        return out


class SequenceStats(NamedTuple):
    tracks: int
    boxes: int
    density: float


_FIELD_COUNTS = {
    GROUND_TRUTH: (9,),
    RESULT: (7, 8, 9, 10),
    DETECTION: (7, 8, 9, 10),
}


def _to_int(text, what, source, line):
    value = _to_float(text, what, source, line)
    if not value.is_integer():
        raise FormatError(f"{what} must be an integer, got {text!r}", source, line)
    return int(value)


def _to_float(text, what, source, line):
    try:
        value = float(text)
    except ValueError:
        raise FormatError(f"non-numeric {what}: {text!r}", source, line) from None
    if not math.isfinite(value):
        raise FormatError(f"non-finite {what}: {text!r}", source, line)
    return value


def _parse_line(fields, kind, source, line):
    frame = _to_int(fields[0], "frame", source, line)
    if frame < 1:
        raise ValidationError(f"frame must be >= 1, got {frame}", source, line)
    ident = _to_int(fields[1], "id", source, line)
    left, top, width, height = (
        _to_float(v, name, source, line)
        for v, name in zip(fields[2:6], ("left", "top", "width", "height")))
    if width <= 0 or height <= 0:
        raise ValidationError(f"non-positive box size {width} x {height}", source, line)
    box = BoundingBox(left, top, width, height)
    score = _to_float(fields[6], "confidence", source, line)

    if kind == DETECTION:
        if ident != -1:
            raise ValidationError(f"detection id must be -1, got {ident}", source, line)
        return DetEntry(frame, box, score)
    if ident < 1:
        raise ValidationError(f"track id must be positive, got {ident}", source, line)
    if kind == RESULT:
        return ResultEntry(frame, ident, box, score)

    if score not in (0.0, 1.0):
        raise ValidationError(f"active flag must be 0 or 1, got {fields[6]!r}", source, line)
    code = _to_int(fields[7], "class", source, line)
    try:
        cls = ObjectClass(code)
    except ValueError:
        raise ValidationError(f"unknown class id {code}", source, line) from None
    visibility = _to_float(fields[8], "visibility", source, line)
    if not 0.0 <= visibility <= 1.0:
        raise ValidationError(f"visibility {visibility} outside [0, 1]", source, line)
    return GtEntry(frame, ident, box, score == 1.0, cls, visibility)


def parse_text(text: str, kind: str, source: str = "") -> ParsedFile:
    """Parse CSV content; see :func:`parse_csv`."""
    if kind not in KINDS:
        raise ValueError(f"unknown file kind {kind!r}")
    allowed = _FIELD_COUNTS[kind]
    entries = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        raw = raw.strip()
        if not raw:
            continue
        fields = [f.strip() for f in raw.split(",")]
        if len(fields) not in allowed:
            expected = " or ".join(str(n) for n in allowed)
            raise FormatError(f"expected {expected} fields, got {len(fields)}", source, lineno)
        entry = _parse_line(fields, kind, source, lineno)
        if kind != DETECTION:
            key = (entry.frame, entry.track_id)
            if key in seen:
                raise ValidationError(
                    f"duplicate entry for frame {key[0]}, id {key[1]} "
                    f"(first seen on line {seen[key]})", source, lineno)
            seen[key] = lineno
        entries.append(entry)
    if kind == DETECTION:
        entries.sort(key=lambda e: e.frame)
    else:
        entries.sort(key=lambda e: (e.frame, e.track_id))
    return ParsedFile(kind, tuple(entries), (), source)


def parse_csv(path: PathLike, kind: str) -> ParsedFile:
    """Read one ground-truth, result or detection file.

    Spaces after commas and CRLF line endings are accepted. Result and
    detection lines may carry 7 to 10 fields; anything after the 7th is
    ignored. Ground-truth lines must have exactly 9.

    Raises :class:`FormatError` for malformed lines and
    :class:`ValidationError` for duplicate ``(frame, id)`` pairs, bad sizes
    or unknown classes; both carry the offending line number.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    return parse_text(text, kind, source=str(path))


def format_number(value: float) -> str:
    """Shortest decimal form with at most six fractional digits."""
    if float(value).is_integer():
        return str(int(value))
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _format_entry(entry: Entry) -> str:
    box = [format_number(v) for v in entry.box.as_ltwh()]
    if isinstance(entry, DetEntry):
        fields = [str(entry.frame), "-1", *box, format_number(entry.confidence), "-1", "-1"]
    elif isinstance(entry, GtEntry):
        fields = [str(entry.frame), str(entry.track_id), *box, "1" if entry.active else "0",
                  str(int(entry.object_class)), format_number(entry.visibility)]
    else:
        fields = [str(entry.frame), str(entry.track_id), *box,
                  format_number(entry.confidence), "-1", "-1"]
    return ",".join(fields)


def write_csv(parsed: Union[ParsedFile, Iterable[Entry]]) -> bytes:
    entries = parsed.entries if isinstance(parsed, ParsedFile) else list(parsed)
    return "".join(_format_entry(e) + "\n" for e in entries).encode("utf-8")


def save_csv(parsed: Union[ParsedFile, Iterable[Entry]], path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(write_csv(parsed))


def read_seqmap(path: PathLike) -> list[str]:
    """Sequence names, one per line. A leading ``name`` header line is skipped."""
    names = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    names = [n for n in names if n]
    if names and names[0].lower() == "name":
        names = names[1:]
    dupes = [n for n, c in Counter(names).items() if c > 1]
    if dupes:
        raise ValidationError(f"duplicate sequence names in seqmap: {', '.join(dupes)}", str(path))
    return names


def write_seqmap(names: Sequence[str], path: PathLike) -> None:
    Path(path).write_text("".join(f"{n}\n" for n in names), encoding="utf-8")


def read_seqinfo(path: PathLike) -> SequenceMeta:
    """Load a ``seqinfo.ini`` file (section ``[Sequence]``)."""
    parser = configparser.ConfigParser()
    parser.optionxform = str
    if not parser.read(path, encoding="utf-8"):
        raise FileNotFoundError(path)
    try:
        sec = parser["Sequence"]
        return SequenceMeta(
            name=sec["name"],
            frame_count=int(sec["seqLength"]),
            fps=float(sec.get("frameRate", "30")),
            image_width=int(sec.get("imWidth", "1920")),
            image_height=int(sec.get("imHeight", "1080")),
        )
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"bad sequence metadata: {exc}", str(path)) from None


def write_seqinfo(meta: SequenceMeta, path: PathLike) -> None:
    text = (
        "[Sequence]\n"
        f"name={meta.name}\n"
        f"seqLength={meta.frame_count}\n"
        f"frameRate={format_number(meta.fps)}\n"
        f"imWidth={meta.image_width}\n"
        f"imHeight={meta.image_height}\n"
    )
    Path(path).write_text(text, encoding="utf-8")


def gt_path(root: PathLike, sequence: str) -> Path:
    return Path(root) / sequence / "gt" / "gt.txt"


def det_path(root: PathLike, sequence: str) -> Path:
    return Path(root) / sequence / "det" / "det.txt"


def load_meta(root: PathLike, sequence: str, gt: ParsedFile | None = None) -> SequenceMeta:
    """Sequence metadata from ``seqinfo.ini``, or inferred from the GT frames."""
    ini = Path(root) / sequence / "seqinfo.ini"
    if ini.exists():
        return read_seqinfo(ini)
    if gt is None:
        gt = parse_csv(gt_path(root, sequence), GROUND_TRUTH)
    last = max((e.frame for e in gt.entries), default=1)
    log.warning("%s: no seqinfo.ini, assuming %d frames", sequence, last)
    return SequenceMeta(sequence, last)


def ingest_submission(zip_path: PathLike, seqmap: Sequence[str]) -> dict[str, ParsedFile]:
    """Parse a ZIP archive of ``<Sequence-Name>.txt`` result files.

    Files not named after a seqmap entry are ignored and reported as
    warnings on the returned files.
    """
    wanted = set(seqmap)
    out: dict[str, ParsedFile] = {}
    extras: list[str] = []
    with zipfile.ZipFile(zip_path) as zf:
        members = {}
        for info in zf.infolist():
            if info.is_dir():
                continue
            base = info.filename.rsplit("/", 1)[-1]
            seq = base[:-4] if base.endswith(".txt") else None
            if seq in wanted and seq not in members:
                members[seq] = info
            else:
                extras.append(info.filename)
        for seq in seqmap:
            if seq not in members:
                raise SubmissionIncompleteError(seq)
        warnings = tuple(f"ignored unrelated archive member {name}" for name in extras)
        for name in warnings:
            log.warning("%s: %s", zip_path, name)
        for seq in seqmap:
            text = zf.read(members[seq]).decode("utf-8")
            parsed = parse_text(text, RESULT, source=f"{zip_path}:{members[seq].filename}")
            out[seq] = ParsedFile(parsed.kind, parsed.entries, warnings, parsed.source)
    return out


def load_results(res: PathLike, seqmap: Sequence[str]) -> dict[str, ParsedFile]:
    """Results from a ZIP submission or a directory of ``<Sequence-Name>.txt`` files."""
    res = Path(res)
    if res.is_file():
        return ingest_submission(res, seqmap)
    out = {}
    for seq in seqmap:
        path = res / f"{seq}.txt"
        if not path.exists():
            raise SubmissionIncompleteError(seq)
        out[seq] = parse_csv(path, RESULT)
    return out


def class_counts(gt: ParsedFile) -> dict[ObjectClass, int]:
    counts = Counter(e.object_class for e in gt.entries)
    return {cls: counts.get(cls, 0) for cls in ObjectClass}


def sequence_stats(gt: ParsedFile, meta: SequenceMeta) -> SequenceStats:
    """Tracks, boxes and boxes-per-frame of the pedestrian annotations."""
    peds = [e for e in gt.entries if e.object_class is ObjectClass.PEDESTRIAN]
    tracks = len({e.track_id for e in peds})
    return SequenceStats(tracks, len(peds), len(peds) / meta.frame_count)
