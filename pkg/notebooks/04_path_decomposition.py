# %% [markdown]
# # Path decompositions
#
# The approximation guarantee rests on splitting a forest into few groups of
# root-downward paths that never overlap inside a group. The median-leaf
# recursion needs ceil(log2(l + 1)) groups for l leaves; stripping one path
# per root needs as many groups as the forest is tall.

# %%
import numpy as np

from hiersumm import DimensionTree
from hiersumm.decomposition import (
    ceil_log2,
    check_decomposition,
    decompose_by_height,
    decompose_paths,
)
from hiersumm.generators import random_tree

star = DimensionTree.star("r", ["x", "y", "z"])
for name, dec in [("median", decompose_paths(star)), ("height", decompose_by_height(star))]:
    check_decomposition(star, dec)
    print(name, [[tuple(star.ids[v] for v in p.nodes) for p in g] for g in dec.groups])

# %%
rng = np.random.default_rng(3)
for _ in range(6):
    forest = [random_tree(int(rng.integers(5, 40)), 5, rng) for _ in range(2)]
    ell = sum(len(t.leaves) for t in forest)
    a, b = decompose_paths(forest), decompose_by_height(forest)
    check_decomposition(forest, a)
    check_decomposition(forest, b)
    print(f"leaves={ell:>3} median groups={a.n_groups} (bound {ceil_log2(ell + 1)}) height groups={b.n_groups}")
