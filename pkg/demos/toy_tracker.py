"""A stand-in 'tracker' for the parameter-search demo.

It copies the ground truth, drops boxes at a rate that depends on two
parameters and adds a little position noise. Its best setting is near
``--keep 0.9 --jitter 1.0``. Usage matches the search command template:

    python3 toy_tracker.py --keep K --jitter J --out DIR --seqmap FILE --data GT_ROOT
"""
import argparse
from pathlib import Path

import numpy as np


def main():
    p = argparse.ArgumentParser()
    for name in ("--keep", "--jitter"):
        p.add_argument(name, type=float, required=True)
    for name in ("--out", "--seqmap", "--data"):
        p.add_argument(name, required=True)
    args = p.parse_args()
    rng = np.random.default_rng(0)
    # quality peaks at keep=0.9, jitter=1.0
    drop = min(1.0, abs(args.keep - 0.9) + abs(np.log(args.jitter)) * 0.3 + 0.02)
    for name in Path(args.seqmap).read_text().split():
        rows = []
        for line in (Path(args.data) / name / "gt" / "gt.txt").read_text().splitlines():
            f = line.split(",")
            if rng.random() < drop:
                continue
            x, y = (float(v) + rng.normal(0, args.jitter) for v in f[2:4])
            rows.append(f"{f[0]},{f[1]},{x:.2f},{y:.2f},{f[4]},{f[5]},1,-1,-1,-1\n")
        (Path(args.out) / f"{name}.txt").write_text("".join(rows))


if __name__ == "__main__":
    main()
