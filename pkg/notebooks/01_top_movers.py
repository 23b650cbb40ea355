# %% [markdown]
# # Top movers on a two-dimensional cube
#
# Two dimensions, each a root with two children. Sales in column `a2` go up
# by one unit per cell and sales in column `b2` go down by one.

# %%
from hiersumm import SolverConfig, aggregate, build_weight_map, solve
from hiersumm.formats import build_report
from hiersumm.generators import gen_two_tree_example

inst = gen_two_tree_example(x=1.0)
space = inst.space
for leaf, (t, l) in inst.cells.merged().items():
    print(space.ids_of(leaf), t, "->", l)

# %% [markdown]
# Aggregation gives every product node its pre/current totals. With the
# absolute-difference weight the two column nodes weigh 2 and the root weighs 0,
# because the ups and downs cancel.

# %%
agg = aggregate(inst.cells, space)
weights = build_weight_map(inst.cells, space, "absdiff")
for v in space.nodes():
    print(f"{str(space.ids_of(v)):16} t={agg.get(v)[0]:.0f} l={agg.get(v)[1]:.0f} w={weights[v]:.0f}")

# %% [markdown]
# With room for two segments the best summary is the two columns.

# %%
sol = solve(space, weights, SolverConfig(k=2))
print([space.ids_of(s) for s in sol.segments], sol.total_weight)

# %% [markdown]
# Other weight functions. Box-Cox with `m > 0` discounts changes on large bases.

# %%
for fn, params in [("absdiff", {}), ("boxcox", {"m": 0.2})]:
    w = build_weight_map(inst.cells, space, fn, **params)
    s = solve(space, w, 2)
    print(fn, [space.ids_of(v) for v in s.segments], round(s.total_weight, 4))

# %%
report = build_report(space, sol, k=2, weight_fn={"kind": "absdiff"}, aggregates=agg)
for entry in report["entries"]:
    print(entry["coordinates"], entry["weight"], entry["delta"], entry["share_pre"], entry["share_cur"])
