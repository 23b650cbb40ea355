# %% [markdown]
# # Engines and running time
#
# The sparse engine only visits nodes above some positive weight. The dense
# engine sweeps the whole product level by level with numpy. Both return the
# same rows, so the same answer.

# %%
import time

from hiersumm import SolverConfig, solve
from hiersumm.generators import gen_random

for side in (10, 20, 40):
    inst = gen_random(3, side, max_height=4, cell_density=1.0, seed=1)
    out = {}
    for engine in ("sparse", "dense"):
        t = time.perf_counter()
        out[engine] = solve(inst.space, inst.weights, SolverConfig(10, engine))
        out[engine + "_s"] = time.perf_counter() - t
    same = out["sparse"] == out["dense"]
    print(f"n={inst.space.n:>6} sparse={out['sparse_s']:.3f}s dense={out['dense_s']:.3f}s "
          f"weight={out['dense'].total_weight} identical={same}")
