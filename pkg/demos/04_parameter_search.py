"""
Random parameter search over an external tracker
================================================

Every run draws all parameters uniformly in ``[default / 2, 2 * default]``,
runs the tracker as a subprocess on the training sequences and scores the
output with overall MOTA. The best run wins.
"""

import sys
import tempfile
from pathlib import Path

from motbench.formats import write_seqmap
from motbench.search import ParamSearchConfig, run_param_search
from motbench.synth import SynthSpec, generate, write_synth

here = Path(__file__).resolve().parent
root = Path(tempfile.mkdtemp(prefix="motbench-search-demo-"))

names = []
for seed in range(2):
    data = generate(SynthSpec(frames=60, targets=5, seed=seed, name=f"TRAIN-{seed + 1:02d}"))
    write_synth(data, root)
    names.append(data.spec.name)
write_seqmap(names, root / "seqmap.txt")

# %%
# ``{keep}`` and ``{jitter}`` are filled with the sampled values, ``{out}``
# is a fresh directory per run, ``{seqmap}`` and ``{data}`` point at the
# training sequences.
command = (f"{sys.executable} {here / 'toy_tracker.py'} --keep {{keep}} --jitter {{jitter}} "
           "--out {out} --seqmap {seqmap} --data {data}")
cfg = ParamSearchConfig(defaults={"keep": 0.6, "jitter": 2.0}, command=command,
                        gt_root=str(root / "gt"), sequences=tuple(names), runs=20, seed=0,
                        workers=4)
result = run_param_search(cfg)
print(result.table())
print("best:", {k: round(v, 3) for k, v in result.best_params.items()},
      f"MOTA {result.best_mota:.2f}")
