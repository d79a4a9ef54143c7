"""motbench: multi-object tracking benchmark evaluation.

Exit codes: 0 success, 1 internal error, 2 input validation failure,
3 incomplete submission.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .benchmark import evaluate_benchmark, load_ground_truth, report_from_json, report_to_json
from .detection import combine_stats, detection_stats, evaluate_detection_benchmark
from .formats import (DETECTION, FormatError, SubmissionIncompleteError, det_path, load_results,
                      parse_csv, read_seqmap, sequence_stats)
from .matching import EvalConfig
from .metrics import MetricsUndefinedError, format_table, rank_trackers
from .search import ParamSearchConfig, SearchFailedError, run_param_search
from .synth import SynthSpec, generate, write_synth

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_INCOMPLETE = 0, 1, 2, 3


def _config(args) -> EvalConfig:
    return EvalConfig(iou_threshold=args.iou, min_height=args.min_height)


def _emit(text: str, out=None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_evaluate(args) -> int:
    cfg = _config(args)
    report = evaluate_benchmark(args.gt, args.res, args.seqmap, cfg, workers=args.workers)
    rows = list(report.sequences.items()) + [("OVERALL", report.overall)]
    sys.stdout.write(format_table(rows, args.format))
    if args.format == "text":
        print(f"MOTA std-dev across sequences: {report.mota_stddev:.1f}")
    if args.out:
        name = args.name or Path(args.res).stem
        Path(args.out).write_text(report_to_json(report, cfg, name), encoding="utf-8")
    return EXIT_OK


def cmd_validate(args) -> int:
    names = read_seqmap(args.seqmap)
    results = load_results(args.res, names)
    metas = {}
    if args.gt:
        gts, metas = load_ground_truth(args.gt, names)
    for name, parsed in results.items():
        if name in metas:
            last = max((e.frame for e in parsed.entries), default=0)
            if last > metas[name].frame_count:
                raise FormatError(f"frame {last} outside [1, {metas[name].frame_count}]",
                                  parsed.source)
        for w in parsed.warnings:
            print(f"warning: {w}", file=sys.stderr)
        print(f"{name}: {len(parsed)} boxes OK")
    return EXIT_OK


def cmd_det_pr(args) -> int:
    names = read_seqmap(args.seqmap)
    gts, _ = load_ground_truth(args.gt, names)
    root = args.det or args.gt
    pairs = []
    for name in names:
        path = det_path(root, name) if Path(root).is_dir() and (Path(root) / name).is_dir() \
            else Path(root) / f"{name}.txt"
        pairs.append((parse_csv(path, DETECTION), gts[name]))
    curve = evaluate_detection_benchmark(pairs, _config(args), args.mode,
                                         operating_threshold=args.threshold)
    _emit(curve.to_csv(), args.out)
    p, r = curve.operating_point
    print(f"operating point: precision {p:.3f}, recall {r:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_stats(args) -> int:
    names = read_seqmap(args.seqmap)
    gts, metas = load_ground_truth(args.gt, names)
    lines = ["Name,Frames,Tracks,Boxes,Density"]
    det_rows = []
    for name in names:
        s = sequence_stats(gts[name], metas[name])
        lines.append(f"{name},{metas[name].frame_count},{s.tracks},{s.boxes},{s.density:.1f}")
        path = det_path(args.gt, name)
        if path.exists():
            d = detection_stats(parse_csv(path, DETECTION), metas[name])
            det_rows.append((name, d, metas[name].frame_count))
    out = "\n".join(lines) + "\n"
    if det_rows:
        out += "\nSeq,nDet,nDet/fr,min height,max height\n"
        for name, d, _ in det_rows:
            out += f"{name},{d.count},{d.per_frame:.2f},{d.min_height:.2f},{d.max_height:.2f}\n"
        t = combine_stats([(d, n) for _, d, n in det_rows])
        out += f"total,{t.count},{t.per_frame:.2f},{t.min_height:.2f},{t.max_height:.2f}\n"
    _emit(out, args.out)
    return EXIT_OK


def cmd_rank(args) -> int:
    table = []
    for path in args.reports:
        name, report = report_from_json(Path(path).read_text(encoding="utf-8"))
        table.append((name or Path(path).stem, report.overall))
    ranked = rank_trackers(table)
    by_name = dict(table)
    rows = [(t.name, by_name[t.name]) for t in ranked]
    if args.format == "csv":
        text = format_table(rows, "csv")
        header, *body = text.splitlines()
        text = "\n".join([header + ",AvgRank"] +
                         [f"{b},{t.average_rank:.2f}" for b, t in zip(body, ranked)]) + "\n"
    else:
        text = format_table(rows, "text")
        text += "".join(f"{t.name}: average rank {t.average_rank:.2f}\n" for t in ranked)
    _emit(text, args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = SynthSpec(frames=args.frames, targets=args.targets, drop_rate=args.drop,
                     spurious_rate=args.spurious, swap_rate=args.swaps, seed=args.seed,
                     separated=not args.crowded, name=args.name)
    data = generate(spec)
    write_synth(data, args.out)
    m = data.manifest
    print(f"wrote {args.out}: {m['gt_boxes']} GT boxes, {m['dropped']} dropped, "
          f"{m['spurious']} spurious, {m['id_switches']} id switches")
    return EXIT_OK


def cmd_param_search(args) -> int:
    defaults = {}
    for item in args.param:
        key, _, value = item.partition("=")
        if not key or not value:
            raise FormatError(f"bad --param {item!r}, expected name=value")
        defaults[key] = float(value)
    cfg = ParamSearchConfig(
        defaults=defaults, command=args.command, gt_root=args.gt,
        sequences=tuple(read_seqmap(args.seqmap)), runs=args.runs, seed=args.seed,
        workers=args.workers, eval_config=_config(args))
    result = run_param_search(cfg)
    text = result.table()
    text += "best: " + ", ".join(f"{k}={v:.6g}" for k, v in result.best_params.items())
    text += f" (MOTA {result.best_mota:.2f}, run {result.best_run})\n"
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motbench", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command_name", required=True)

    def common(p, gt=True, seqmap=True):
        if gt:
            p.add_argument("--gt", required=True, help="ground-truth root directory")
        if seqmap:
            p.add_argument("--seqmap", required=True, help="file listing sequence names")
        p.add_argument("--iou", type=float, default=0.5)
        p.add_argument("--min-height", type=float, default=0.0)
        p.add_argument("--out")

    p = sub.add_parser("evaluate", help="CLEAR MOT evaluation of a submission")
    common(p)
    p.add_argument("--res", required=True, help="result directory or ZIP archive")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--name", help="tracker name stored in the JSON report")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("validate", help="check a submission's files")
    common(p, gt=False)
    p.add_argument("--res", required=True)
    p.add_argument("--gt", help="optional GT root for frame-range checks")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("det-pr", help="detection precision/recall curve as CSV")
    common(p)
    p.add_argument("--det", help="detection root (defaults to <gt>/<seq>/det/det.txt)")
    p.add_argument("--mode", choices=("greedy", "hungarian"), default="greedy")
    p.add_argument("--threshold", type=float, default=float("-inf"),
                   help="confidence threshold of the reported operating point")
    p.set_defaults(func=cmd_det_pr)

    p = sub.add_parser("stats", help="sequence and detection statistics")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("rank", help="average-rank table of JSON reports")
    p.add_argument("reports", nargs="+")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("synth", help="generate a synthetic sequence with injected errors")
    p.add_argument("--out", required=True)
    p.add_argument("--frames", type=int, default=100)
    p.add_argument("--targets", type=int, default=5)
    p.add_argument("--drop", type=float, default=0.0)
    p.add_argument("--spurious", type=float, default=0.0)
    p.add_argument("--swaps", type=float, default=0.0, help="identity swap rate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="SYNTH-01")
    p.add_argument("--crowded", action="store_true", help="let targets cross each other")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("param-search", help="random parameter search over a tracker")
    common(p)
    p.add_argument("--command", required=True,
                   help="tracker command template with {name}, {out}, {seqmap}, {data}")
    p.add_argument("--param", action="append", required=True, metavar="NAME=DEFAULT")
    p.add_argument("--runs", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_param_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except SubmissionIncompleteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except (FormatError, MetricsUndefinedError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SearchFailedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
