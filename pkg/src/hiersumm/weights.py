"""Two-period cell data, subspace aggregation, and segment weight functions.

Cells live on leaf tuples. Every product node ``v`` gets ``(t_v, l_v)``, the
sums of the pre-period and current-period values over Sub(v), and a weight
``fn(t_v, l_v)``. Aggregates and weights are kept as dense numpy arrays when
the space is small enough, otherwise as dicts over the nodes that sit above
some nonzero cell.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from .core import ProductNode, ProductSpace
from .errors import ConfigError, InputError

DENSE_LIMIT = 10_000_000
BOXCOX_FLOOR = 1e-9


class CellTable:
    """Leaf-tuple metric values for two periods.

    ``coords`` is an ``(N, d)`` integer array of leaf tuples, ``pre`` and
    ``cur`` the matching pre-period and current-period values. Repeated keys
    are allowed and are summed on aggregation. Absent cells are (0, 0).
    """

    def __init__(self, space: ProductSpace, coords, pre, cur):
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, space.d)
        pre = np.asarray(pre, dtype=np.float64).reshape(-1)
        cur = np.asarray(cur, dtype=np.float64).reshape(-1)
        if not (len(coords) == len(pre) == len(cur)):
            raise InputError("coords, pre and cur must have the same length")
        if not (np.all(np.isfinite(pre)) and np.all(np.isfinite(cur))):
            raise InputError("metric values must be finite")
        if np.any(pre < 0) or np.any(cur < 0):
            raise InputError("metric values must be nonnegative")
        for i, tree in enumerate(space.trees):
            col = coords[:, i]
            if np.any(col < 0) or np.any(col >= len(tree)):
                raise InputError(f"cell coordinate out of range in dimension {i}")
            is_leaf = np.array([tree.is_leaf(v) for v in range(len(tree))])
            bad = ~is_leaf[col]
            if np.any(bad):
                row = int(np.argmax(bad))
                raise InputError(
                    f"cell {space.ids_of(tuple(int(x) for x in coords[row]))} is not a leaf tuple"
                )
        self.space = space
        self.coords = coords
        self.pre = pre
        self.cur = cur

    @classmethod
    def from_dict(cls, space: ProductSpace, cells: Mapping[ProductNode, tuple[float, float]]):
        keys = list(cells)
        vals = [cells[k] for k in keys]
        coords = np.array(keys, dtype=np.int64).reshape(-1, space.d)
        pre = [float(v[0]) for v in vals]
        cur = [float(v[1]) for v in vals]
        return cls(space, coords, pre, cur)

    @classmethod
    def empty(cls, space: ProductSpace):
        return cls(space, np.zeros((0, space.d), dtype=np.int64), [], [])

    def __len__(self):
        return len(self.pre)

    def merged(self) -> dict[ProductNode, tuple[float, float]]:
        """Cells as a dict with repeated keys summed, in first-seen order."""
        out: dict[ProductNode, list[float]] = {}
        for key, t, l in zip(map(tuple, self.coords.tolist()), self.pre.tolist(), self.cur.tolist()):
            acc = out.setdefault(key, [0.0, 0.0])
            acc[0] += t
            acc[1] += l
        return {k: (v[0], v[1]) for k, v in out.items()}


class AggregateTable:
    """Per-node ``(t_v, l_v)``; dense arrays or a sparse dict."""

    def __init__(self, space, pre=None, cur=None, sparse=None):
        self.space = space
        self.pre = pre
        self.cur = cur
        self.sparse = sparse

    @property
    def is_dense(self) -> bool:
        return self.sparse is None

    def get(self, v: ProductNode) -> tuple[float, float]:
        if self.sparse is None:
            return float(self.pre[v]), float(self.cur[v])
        return self.sparse.get(tuple(v), (0.0, 0.0))

    @property
    def totals(self) -> tuple[float, float]:
        return self.get(self.space.root)


def _bfs_children(tree):
    # children lists for internal nodes, deepest first
    order = sorted(range(len(tree)), key=lambda v: -tree.depth[v])
    return [(v, tree.children[v]) for v in order if tree.children[v]]


def aggregate(cells: CellTable, space: ProductSpace, *, dense: bool | None = None,
              dense_limit: int = DENSE_LIMIT) -> AggregateTable:
    """Sum cell values over Sub(v) for every product node.

    Dense mode scatters the cells into ``sizes``-shaped arrays and then, one
    dimension at a time, fills each internal tree node with the sum of its
    children in child order. Sparse mode adds every cell to all of its
    ancestor tuples, visiting cells in sorted key order.
    """
    if cells.space != space:
        raise InputError("cell table belongs to a different space")
    if dense is None:
        dense = space.n <= dense_limit
    if dense:
        pre = np.zeros(space.sizes)
        cur = np.zeros(space.sizes)
        idx = tuple(cells.coords.T)
        np.add.at(pre, idx, cells.pre)
        np.add.at(cur, idx, cells.cur)
        for axis, tree in enumerate(space.trees):
            for v, kids in _bfs_children(tree):
                for arr in (pre, cur):
                    a = np.moveaxis(arr, axis, 0)
                    acc = a[kids[0]].copy()
                    for c in kids[1:]:
                        acc += a[c]
                    a[v] = acc
        return AggregateTable(space, pre=pre, cur=cur)

    sums: dict[ProductNode, list[float]] = {}
    merged = cells.merged()
    for key in sorted(merged):
        t, l = merged[key]
        for anc in space.ancestors(key):
            acc = sums.setdefault(anc, [0.0, 0.0])
            acc[0] += t
            acc[1] += l
    return AggregateTable(space, sparse={k: (v[0], v[1]) for k, v in sums.items()})


def weight_absdiff(t, l):
    """Absolute change ``|l - t|``."""
    return np.abs(np.subtract(l, t)) if isinstance(t, np.ndarray) or isinstance(l, np.ndarray) else abs(l - t)


def weight_composition(t_v, l_v, t_total, l_total):
    """Shift in share of the total: ``|t_v / T - l_v / L|``."""
    if not (t_total > 0 and l_total > 0):
        raise ConfigError(
            "composition weight needs a positive total in both periods "
            f"(got pre={t_total}, cur={l_total})"
        )
    out = np.abs(np.divide(t_v, t_total) - np.divide(l_v, l_total))
    return float(out) if np.ndim(out) == 0 else out


def weight_boxcox(t, l, m, floor: float = BOXCOX_FLOOR):
    """Box-Cox transformed change ``|l^(1-m) - t^(1-m)| / (1-m)``.

    ``m = 0`` is the absolute difference. Larger ``m`` moves toward relative
    change; ``m -> 1`` tends to ``log(l) - log(t)``, which is not offered here
    (pass ``m < 1``). For ``m > 0`` values below ``floor`` are raised to
    ``floor`` first so that zero cells stay finite.
    """
    if not (0 <= m < 1):
        raise ConfigError(f"Box-Cox parameter m must satisfy 0 <= m < 1, got {m!r}")
    p = 1.0 - m
    t = np.asarray(t, dtype=np.float64)
    l = np.asarray(l, dtype=np.float64)
    if m > 0:
        t = np.maximum(t, floor)
        l = np.maximum(l, floor)
    out = np.abs(np.power(l, p) - np.power(t, p)) / p
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class WeightFunction:
    """Selector plus parameters for :func:`build_weight_map`."""

    kind: str = "absdiff"
    m: float = 0.2
    floor: float = BOXCOX_FLOOR

    def __post_init__(self):
        if self.kind not in ("absdiff", "composition", "boxcox"):
            raise ConfigError(f"unknown weight function {self.kind!r}")
        if self.kind == "boxcox":
            if not (0 <= self.m < 1):
                raise ConfigError(f"Box-Cox parameter m must satisfy 0 <= m < 1, got {self.m!r}")
            if not self.floor > 0:
                raise ConfigError("Box-Cox floor must be positive")

    def __call__(self, t, l, totals=(None, None)):
        if self.kind == "absdiff":
            return weight_absdiff(t, l)
        if self.kind == "composition":
            return weight_composition(t, l, *totals)
        return weight_boxcox(t, l, self.m, self.floor)


class WeightMap:
    """Nonnegative weight for every product node.

    Dense maps hold a ``sizes``-shaped float array. Sparse maps hold a dict of
    the nonzero entries; every other node weighs 0.
    """

    def __init__(self, space: ProductSpace, array=None, sparse=None):
        if (array is None) == (sparse is None):
            raise InputError("give exactly one of array or sparse")
        self.space = space
        if array is not None:
            array = np.asarray(array, dtype=np.float64)
            if array.shape != space.sizes:
                raise InputError(f"weight array has shape {array.shape}, expected {space.sizes}")
            if not np.all(np.isfinite(array)):
                raise InputError("weights must be finite")
            if np.any(array < 0):
                raise InputError("weights must be nonnegative")
            self.array = array
            self.sparse = None
        else:
            clean = {}
            for v, w in sparse.items():
                v = tuple(int(x) for x in v)
                space.check(v)
                w = float(w)
                if not math.isfinite(w):
                    raise InputError(f"weight of {v} is not finite")
                if w < 0:
                    raise InputError(f"weight of {v} is negative ({w})")
                if w > 0:
                    clean[v] = w
            self.array = None
            self.sparse = clean

    @classmethod
    def from_dict(cls, space, weights: Mapping[ProductNode, float], *, dense: bool = False):
        wm = cls(space, sparse=weights)
        return wm.to_dense() if dense else wm

    @property
    def is_dense(self) -> bool:
        return self.array is not None

    def get(self, v: ProductNode) -> float:
        if self.array is not None:
            return float(self.array[tuple(v)])
        return self.sparse.get(tuple(v), 0.0)

    __getitem__ = get

    def positive_items(self) -> list[tuple[ProductNode, float]]:
        """Nodes with positive weight, in lexicographic coordinate order."""
        if self.array is not None:
            idx = np.argwhere(self.array > 0)
            return [(tuple(int(x) for x in row), float(self.array[tuple(row)])) for row in idx]
        return sorted(self.sparse.items())

    def to_dense(self) -> WeightMap:
        if self.array is not None:
            return self
        arr = np.zeros(self.space.sizes)
        for v, w in self.sparse.items():
            arr[v] = w
        return WeightMap(self.space, array=arr)

    def to_sparse(self) -> WeightMap:
        if self.sparse is not None:
            return self
        return WeightMap(self.space, sparse=dict(self.positive_items()))

    def scaled(self, factor: float) -> WeightMap:
        if self.array is not None:
            return WeightMap(self.space, array=self.array * factor)
        return WeightMap(self.space, sparse={v: w * factor for v, w in self.sparse.items()})


def _as_weight_function(fn, params) -> WeightFunction:
    if isinstance(fn, WeightFunction):
        return fn
    return WeightFunction(fn, **params)


def build_weight_map(cells: CellTable, space: ProductSpace, fn="absdiff", *,
                     dense: bool | None = None, dense_limit: int = DENSE_LIMIT,
                     **params) -> WeightMap:
    """Aggregate ``cells`` and apply the selected weight function per node."""
    wf = _as_weight_function(fn, params)
    agg = aggregate(cells, space, dense=dense, dense_limit=dense_limit)
    totals = agg.totals
    if wf.kind == "composition":
        # validate even when no cell is present
        weight_composition(0.0, 0.0, *totals)
    if agg.is_dense:
        return WeightMap(space, array=wf(agg.pre, agg.cur, totals))
    out = {}
    for v, (t, l) in agg.sparse.items():
        out[v] = float(wf(t, l, totals))
    # nodes with no cells below them have t = l = 0; every weight function maps that to 0
    return WeightMap(space, sparse=out)
