"""Named instances (motivating example, conflicts, hardness reductions) and
seeded random instances."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .core import DimensionTree, ProductSpace
from .errors import CapacityError, InputError
from .weights import CellTable, WeightMap, build_weight_map


@dataclass(frozen=True)
class Digraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise InputError("vertex count must be nonnegative")
        seen = set()
        for v, w in self.edges:
            if not (0 <= v < self.n_vertices and 0 <= w < self.n_vertices):
                raise InputError(f"edge {(v, w)} references an unknown vertex")
            if v == w:
                raise InputError(f"self-loop at vertex {v}")
            if (v, w) in seen:
                raise InputError(f"duplicate edge {(v, w)}")
            seen.add((v, w))

    @classmethod
    def random(cls, n_vertices: int, max_edges: int, rng) -> Digraph:
        pairs = [(v, w) for v in range(n_vertices) for w in range(n_vertices) if v != w]
        m = int(rng.integers(0, min(max_edges, len(pairs)) + 1))
        pick = rng.choice(len(pairs), size=m, replace=False) if m else []
        return cls(n_vertices, tuple(pairs[i] for i in sorted(pick)))


@dataclass
class GeneratedInstance:
    space: ProductSpace
    weights: WeightMap
    name: str
    params: dict = field(default_factory=dict)
    known: dict = field(default_factory=dict)
    cells: CellTable | None = None
    k: int | None = None


def _abc_tree(i: int) -> DimensionTree:
    return DimensionTree.star(f"r{i}", [f"a{i}", f"b{i}"])


def gen_two_tree_example(x: float = 1.0) -> GeneratedInstance:
    """Two 3-node trees; change of ``+x`` on the ``a2`` column and ``-x`` on ``b2``."""
    if not x > 0:
        raise InputError("x must be positive")
    space = ProductSpace([_abc_tree(1), _abc_tree(2)])
    base = float(x)
    cells = {
        space.node("a1", "a2"): (base, base + x),
        space.node("b1", "a2"): (base, base + x),
        space.node("a1", "b2"): (base, base - x),
        space.node("b1", "b2"): (base, base - x),
    }
    table = CellTable.from_dict(space, cells)
    weights = build_weight_map(table, space, "absdiff", dense=True)
    return GeneratedInstance(
        space, weights, "two_tree", {"x": x},
        known={"optimum_k2": 4 * x}, cells=table, k=2,
    )


_EXAMPLE_TRIPLE = (("r", "b", "a"), ("a", "r", "b"), ("b", "a", "r"))


def gen_simple_conflict() -> GeneratedInstance:
    """Three 3-node trees with unit weight on an overlap-free conflict."""
    space = ProductSpace([_abc_tree(i) for i in (1, 2, 3)])
    weights = {
        space.node(*(f"{s}{i + 1}" for i, s in enumerate(pattern))): 1.0
        for pattern in _EXAMPLE_TRIPLE
    }
    return GeneratedInstance(
        space, WeightMap.from_dict(space, weights), "simple_conflict", {},
        known={"overlap_free_optimum": 3.0, "conflict_free_optimum": 2.0}, k=3,
    )


def gen_power_conflict(m: int) -> GeneratedInstance:
    """``m``-fold product of the simple conflict over ``3m`` dimensions.

    Every dimension is a root with two children. The unit-weight nodes are
    all concatenations of one member of the three-node conflict per group of
    three dimensions, giving ``3**m`` pairwise disjoint segments of which a
    conflict-free set can keep at most ``2**m``.
    """
    if not 1 <= m <= 4:
        raise CapacityError(f"m must be in 1..4 (space has 27**m nodes), got {m}")
    d = 3 * m
    space = ProductSpace([_abc_tree(i) for i in range(1, d + 1)])
    weights = {}
    for combo in itertools.product(_EXAMPLE_TRIPLE, repeat=m):
        labels = [s for pattern in combo for s in pattern]
        weights[space.node(*(f"{s}{i + 1}" for i, s in enumerate(labels)))] = 1.0
    return GeneratedInstance(
        space, WeightMap.from_dict(space, weights), "power_conflict", {"m": m},
        known={"overlap_free_optimum": float(3 ** m), "conflict_free_optimum": float(2 ** m)},
        k=len(weights),
    )


def gen_mis_reduction(g: Digraph, epsilon: float = 0.5) -> GeneratedInstance:
    """Three height-two trees encoding independent sets of ``g``.

    Trees A and B get one leaf per vertex, tree C one leaf per edge. Weight 1
    sits on ``(a_v, b_v, c)`` for each vertex and ``1 + epsilon`` on both
    ``(a_v, b, c_vw)`` and ``(a, b_w, c_vw)`` for each edge ``(v, w)``. An
    independent set of size ``s`` exists iff some overlap-free set weighs at
    least ``s + (1 + epsilon) * |E|``.
    """
    if not epsilon > 0:
        raise InputError("epsilon must be positive")
    A = DimensionTree.star("a", [f"a{v}" for v in range(g.n_vertices)])
    B = DimensionTree.star("b", [f"b{v}" for v in range(g.n_vertices)])
    C = DimensionTree.star("c", [f"c{v}_{w}" for v, w in g.edges])
    space = ProductSpace([A, B, C])
    beta = 1.0 + epsilon
    weights = {}
    for v in range(g.n_vertices):
        weights[space.node(f"a{v}", f"b{v}", "c")] = 1.0
    for v, w in g.edges:
        weights[space.node(f"a{v}", "b", f"c{v}_{w}")] = beta
        weights[space.node("a", f"b{w}", f"c{v}_{w}")] = beta
    return GeneratedInstance(
        space, WeightMap.from_dict(space, weights), "mis_reduction",
        {"n_vertices": g.n_vertices, "edges": list(g.edges), "epsilon": epsilon},
        known={"beta": beta, "edge_term": beta * len(g.edges)},
        k=max(len(weights), 1),
    )


def random_tree(size: int, max_height: int, rng, prefix: str = "") -> DimensionTree:
    """Random tree of ``size`` nodes whose height (in nodes) is at most ``max_height``."""
    if size < 1 or max_height < 1:
        raise InputError("size and max_height must be at least 1")
    if size > 1 and max_height < 2:
        raise InputError("a tree with more than one node needs max_height >= 2")
    parents: list[int | None] = [None]
    depth = [0]
    for _ in range(1, size):
        open_ = [v for v in range(len(parents)) if depth[v] < max_height - 1]
        p = open_[int(rng.integers(len(open_)))]
        parents.append(p)
        depth.append(depth[p] + 1)
    ids = [f"{prefix}n{i}" for i in range(size)]
    return DimensionTree(parents, ids, ids)


def gen_random(d: int, tree_sizes: int | Sequence[int], max_height: int = 4,
               cell_density: float = 1.0, seed: int = 0, *, max_value: int = 100,
               weight: str = "absdiff", dense: bool | None = None) -> GeneratedInstance:
    """Seeded random trees and integer cells in ``[0, max_value]``.

    ``tree_sizes`` is either one size for every dimension or one per
    dimension. Each leaf tuple holds a cell with probability ``cell_density``.
    """
    if d < 1:
        raise InputError("d must be at least 1")
    rng = np.random.default_rng(seed)
    if isinstance(tree_sizes, (int, np.integer)):
        tree_sizes = [int(tree_sizes)] * d
    if len(tree_sizes) != d:
        raise InputError("need one tree size per dimension")
    trees = [random_tree(s, max_height, rng, prefix=f"d{i}") for i, s in enumerate(tree_sizes)]
    space = ProductSpace(trees)
    leaf_lists = [np.array(t.leaves) for t in trees]
    shape = tuple(len(x) for x in leaf_lists)
    mask = rng.random(shape) < cell_density
    pre = rng.integers(0, max_value + 1, size=shape)
    cur = rng.integers(0, max_value + 1, size=shape)
    where = np.nonzero(mask)
    coords = np.stack([leaf_lists[i][where[i]] for i in range(d)], axis=1) if d else None
    cells = CellTable(space, coords, pre[where].astype(float), cur[where].astype(float))
    weights = build_weight_map(cells, space, weight, dense=dense)
    return GeneratedInstance(
        space, weights, "random",
        {"d": d, "tree_sizes": list(tree_sizes), "max_height": max_height,
         "cell_density": cell_density, "seed": seed},
        cells=cells,
    )


def gen_random_planted(d: int, tree_sizes: int | Sequence[int], max_height: int = 3,
                       density: float = 0.3, seed: int = 0, *, max_value: int = 100) -> GeneratedInstance:
    """Seeded random trees with integer weights in ``[1, max_value]`` placed
    directly on random product nodes, internal ones included.

    Unlike cell-derived weights, planted weights readily form overlap-free
    conflicts, which is what separates the two exact optima.
    """
    rng = np.random.default_rng(seed)
    if isinstance(tree_sizes, (int, np.integer)):
        tree_sizes = [int(tree_sizes)] * d
    trees = [random_tree(s, max_height, rng, prefix=f"d{i}") for i, s in enumerate(tree_sizes)]
    space = ProductSpace(trees)
    weights = {v: float(rng.integers(1, max_value + 1)) for v in space.nodes() if rng.random() < density}
    return GeneratedInstance(
        space, WeightMap.from_dict(space, weights), "random_planted",
        {"d": d, "tree_sizes": list(tree_sizes), "max_height": max_height,
         "density": density, "seed": seed},
    )
