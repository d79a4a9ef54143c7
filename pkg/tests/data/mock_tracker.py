"""Stand-in tracker with an analytic quality landscape.

Copies a prefix of each sequence's ground truth. The kept fraction is
q = clip(1 - |a - 1.3| - |b - 0.4|, 0, 1), so MOTA = 100 * floor(q * n) / n.
"""
import argparse
import json
import math
import sys
from pathlib import Path


def quality(a, b):
    return min(1.0, max(0.0, 1.0 - abs(a - 1.3) - abs(b - 0.4)))


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seqmap", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--log")
    p.add_argument("--fail-above", type=float)
    args = p.parse_args()
    if args.log:
        with open(args.log, "a") as fh:
            fh.write(json.dumps({"a": args.a, "b": args.b}) + "\n")
    if args.fail_above is not None and args.a > args.fail_above:
        print("diverged", file=sys.stderr)
        return 1
    q = quality(args.a, args.b)
    names = [n.strip() for n in Path(args.seqmap).read_text().splitlines() if n.strip()]
    for name in names:
        lines = (Path(args.data) / name / "gt" / "gt.txt").read_text().splitlines()
        keep = lines[:math.floor(q * len(lines))]
        rows = [",".join(line.split(",")[:6] + ["1", "-1", "-1", "-1"]) for line in keep]
        (Path(args.out) / f"{name}.txt").write_text("".join(r + "\n" for r in rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
