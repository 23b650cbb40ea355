# %% [markdown]
# # Independent sets as summaries
#
# Each directed graph maps to a three-dimensional instance. Vertex nodes
# weigh 1, each edge contributes two overlapping nodes of weight 1 + eps, and
# the best overlap-free set always takes one node per edge plus a maximum
# independent set of vertex nodes.

# %%
import numpy as np

from hiersumm.generators import Digraph, gen_mis_reduction
from hiersumm.oracle import brute_force_mis, brute_force_optimal

g = Digraph(4, ((0, 1), (1, 2), (2, 3), (3, 0)))
inst = gen_mis_reduction(g, epsilon=0.5)
opt = brute_force_optimal(inst.space, inst.weights)
print("space size", inst.space.n, "weighted nodes", len(inst.weights.sparse))
print("optimum", opt.total_weight, "= MIS", brute_force_mis(4, g.edges), "+ 1.5 *", len(g.edges))
print([inst.space.ids_of(v) for v in opt.segments])

# %%
rng = np.random.default_rng(0)
for _ in range(8):
    g = Digraph.random(6, 8, rng)
    inst = gen_mis_reduction(g, 0.5)
    m = brute_force_mis(g.n_vertices, g.edges)
    w = brute_force_optimal(inst.space, inst.weights).total_weight
    print(f"|E|={len(g.edges)} MIS={m} optimum={w} check={w == m + 1.5 * len(g.edges)}")
