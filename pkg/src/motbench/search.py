"""Random parameter search for external tracker executables.

Each run samples every parameter uniformly in ``[default / 2, 2 * default]``,
runs the tracker on the training sequences and scores the output with
MOTA over the concatenated sequences. The best run wins; ties go to the
earliest run.

The command template is formatted with ``{<param name>}`` for every
parameter, ``{out}`` (directory the tracker must fill with
``<Sequence-Name>.txt`` files), ``{seqmap}`` (file listing the sequences)
and ``{data}`` (the ground-truth root, holding images/detections).
"""

from __future__ import annotations

import logging
import shlex
import subprocess
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .benchmark import evaluate_sequences, load_ground_truth
from .formats import PathLike, load_results, write_seqmap
from .matching import EvalConfig

log = logging.getLogger(__name__)


class SearchFailedError(RuntimeError):
    pass


@dataclass(frozen=True)
class ParamSearchConfig:
    defaults: dict
    command: str
    gt_root: str
    sequences: tuple = ()
    runs: int = 20
    seed: int = 0
    workers: int = 1
    timeout: Optional[float] = None
    eval_config: EvalConfig = field(default_factory=EvalConfig)

    def __post_init__(self):
        if not self.defaults:
            raise ValueError("need at least one parameter")
        for name, value in self.defaults.items():
            if not value > 0:
                raise ValueError(f"default for {name!r} must be positive, got {value}")
        if self.runs < 1:
            raise ValueError("need at least one run")


@dataclass(frozen=True)
class RunRecord:
    index: int
    params: dict
    mota: Optional[float] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class SearchResult:
    best_params: dict
    best_mota: float
    best_run: int
    runs: tuple

    def table(self) -> str:
        names = list(self.best_params)
        lines = ["run  " + "  ".join(f"{n:>10}" for n in names) + "        MOTA"]
        for r in self.runs:
            vals = "  ".join(f"{r.params[n]:10.4g}" for n in names)
            score = "failed" if r.failed else f"{r.mota:.2f}"
            mark = " *" if r.index == self.best_run else ""
            lines.append(f"{r.index:3d}  {vals}  {score:>10}{mark}")
        return "\n".join(lines) + "\n"


def sample_parameters(defaults: dict, runs: int, seed: int) -> list[dict]:
    """Draw ``runs`` parameter sets, each value uniform in [v/2, 2v]."""
    rng = np.random.default_rng(seed)
    names = list(defaults)
    out = []
    for _ in range(runs):
        out.append({n: float(rng.uniform(defaults[n] / 2.0, 2.0 * defaults[n])) for n in names})
    return out


def build_command(template: str, params: dict, out: PathLike, seqmap: PathLike,
                  data: PathLike) -> list[str]:
    values = {k: repr(v) for k, v in params.items()}
    values.update(out=shlex.quote(str(out)), seqmap=shlex.quote(str(seqmap)),
                  data=shlex.quote(str(data)))
    return shlex.split(template.format(**values))


def run_param_search(cfg: ParamSearchConfig) -> SearchResult:
    names = list(cfg.sequences)
    gts, metas = load_ground_truth(cfg.gt_root, names)
    frame_counts = {n: metas[n].frame_count for n in names}
    samples = sample_parameters(cfg.defaults, cfg.runs, cfg.seed)

    with tempfile.TemporaryDirectory(prefix="motbench-search-") as tmp:
        tmp = Path(tmp)
        seqmap = tmp / "seqmap.txt"
        write_seqmap(names, seqmap)

        def one_run(index: int) -> RunRecord:
            params = samples[index]
            out = tmp / f"run{index:03d}"
            out.mkdir()
            argv = build_command(cfg.command, params, out, seqmap, cfg.gt_root)
            try:
                proc = subprocess.run(argv, capture_output=True, text=True, timeout=cfg.timeout)
            except (OSError, subprocess.TimeoutExpired) as exc:
                return RunRecord(index, params, error=str(exc))
            if proc.returncode != 0:
                return RunRecord(index, params,
                                 error=f"exit code {proc.returncode}: {proc.stderr.strip()[-500:]}")
            try:
                results = load_results(out, names)
                report = evaluate_sequences(gts, results, frame_counts, cfg.eval_config)
            except ValueError as exc:
                return RunRecord(index, params, error=str(exc))
            return RunRecord(index, params, mota=report.overall.mota)

        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                records = list(pool.map(one_run, range(cfg.runs)))
        else:
            records = [one_run(i) for i in range(cfg.runs)]

    for r in records:
        if r.failed:
            log.warning("run %d failed and is excluded: %s", r.index, r.error)
    ok = [r for r in records if not r.failed]
    if not ok:
        raise SearchFailedError(f"all {cfg.runs} tracker runs failed")
    best = max(ok, key=lambda r: (r.mota, -r.index))
    return SearchResult(dict(best.params), best.mota, best.index, tuple(records))
