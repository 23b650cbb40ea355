# %% [markdown]
# # Conflicts and the approximation gap
#
# Three dimensions are enough for an overlap-free set that the dimension-by-
# dimension recursion cannot produce: every dimension has a member that
# dominates the rest, so no single split separates them.

# %%
from hiersumm import solve
from hiersumm.generators import gen_power_conflict, gen_simple_conflict
from hiersumm.oracle import (
    approximation_bound,
    brute_force_conflict_free,
    brute_force_optimal,
    is_conflict,
    is_overlap_free,
)

inst = gen_simple_conflict()
space = inst.space
nodes = list(inst.weights.sparse)
print([space.ids_of(v) for v in nodes])
print("overlap-free:", is_overlap_free(space, nodes), " conflict:", is_conflict(space, nodes))

# %%
sol = solve(space, inst.weights, 3)
opt = brute_force_optimal(space, inst.weights, 3)
cf = brute_force_conflict_free(space, inst.weights, 3)
print("solver", sol.total_weight, "optimum", opt.total_weight, "conflict-free optimum", cf.total_weight)

# %% [markdown]
# Taking products of the conflict grows the gap as (3/2)^m.

# %%
for m in (1, 2, 3):
    inst = gen_power_conflict(m)
    s = solve(inst.space, inst.weights, inst.k).total_weight
    o = inst.known["overlap_free_optimum"]
    print(f"m={m} d={inst.space.d} n={inst.space.n:>6} solver={s:.0f} optimum={o:.0f} "
          f"ratio={o / s:.3f} bound={approximation_bound(inst.space)}")
