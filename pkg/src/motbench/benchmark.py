"""Evaluate a whole submission against a directory of ground truth."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .formats import (GROUND_TRUTH, ParsedFile, PathLike, gt_path, load_meta, load_results,
                      parse_csv, read_seqmap)
from .matching import EvalConfig, EventLog, match_sequence
from .metrics import BenchmarkReport, MetricsReport, accumulate_counts, count_events


def _evaluate_one(args):
    name, gt, res, frame_count, cfg = args
    log = match_sequence(gt, res, cfg, frame_count=frame_count, sequence=name)
    return name, count_events(log)


def evaluate_sequences(gts: Mapping[str, ParsedFile], results: Mapping[str, ParsedFile],
                       frame_counts: Mapping[str, int], cfg: EvalConfig = EvalConfig(),
                       workers: int = 1) -> BenchmarkReport:
    names = list(gts)
    jobs = [(n, gts[n], results[n], frame_counts[n], cfg) for n in names]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = dict(pool.map(_evaluate_one, jobs))
    else:
        done = dict(map(_evaluate_one, jobs))
    return accumulate_counts({n: done[n] for n in names})


def load_ground_truth(gt_root: PathLike, seqmap: Sequence[str]):
    """``(gts, metas)`` for every sequence in the seqmap."""
    gts, metas = {}, {}
    for seq in seqmap:
        gts[seq] = parse_csv(gt_path(gt_root, seq), GROUND_TRUTH)
        metas[seq] = load_meta(gt_root, seq, gts[seq])
    return gts, metas


def evaluate_benchmark(gt_root: PathLike, res: PathLike, seqmap, cfg: EvalConfig = EvalConfig(),
                       workers: int = 1) -> BenchmarkReport:
    """Evaluate results (directory or ZIP) for every sequence of ``seqmap``.

    ``seqmap`` is a path to a seqmap file or a list of sequence names.
    """
    names = read_seqmap(seqmap) if isinstance(seqmap, (str, Path)) else list(seqmap)
    gts, metas = load_ground_truth(gt_root, names)
    results = load_results(res, names)
    counts = {n: metas[n].frame_count for n in names}
    return evaluate_sequences(gts, results, counts, cfg, workers)


def match_benchmark(gt_root: PathLike, res: PathLike, seqmap,
                    cfg: EvalConfig = EvalConfig()) -> dict[str, EventLog]:
    names = read_seqmap(seqmap) if isinstance(seqmap, (str, Path)) else list(seqmap)
    gts, metas = load_ground_truth(gt_root, names)
    results = load_results(res, names)
    return {n: match_sequence(gts[n], results[n], cfg, metas[n].frame_count, n) for n in names}


def report_to_json(report: BenchmarkReport, cfg: Optional[EvalConfig] = None,
                   name: Optional[str] = None) -> str:
    """Stable, byte-reproducible JSON form of a benchmark report."""
    doc = {
        "sequences": {k: v.to_dict() for k, v in report.sequences.items()},
        "overall": report.overall.to_dict(),
        "mota_stddev": report.mota_stddev,
    }
    if cfg is not None:
        doc["config"] = asdict(cfg)
    if name is not None:
        doc["name"] = name
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> tuple[Optional[str], BenchmarkReport]:
    doc = json.loads(text)
    report = BenchmarkReport(
        {k: MetricsReport.from_dict(v) for k, v in doc["sequences"].items()},
        MetricsReport.from_dict(doc["overall"]),
        float(doc["mota_stddev"]),
    )
    return doc.get("name"), report
