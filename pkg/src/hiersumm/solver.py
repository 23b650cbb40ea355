"""Cascading Analysts: the bottom-up dynamic program over the product space.

For every product node ``v`` and budget ``j <= k`` the program keeps the best
conflict-free, overlap-free subset of Sub(v) with at most ``j`` members. A
row stores, per budget, the key ``(weight, cardinality)``; rows are compared
by weight and then by smaller cardinality, so zero-weight nodes never show up
in an answer. Sets are not stored: they are recovered by a traceback that
re-derives each choice from the stored rows.

Tie-break (fully structural, so schedule- and engine-independent):

* at a node, candidates are tried in the order empty set, ``{v}``, split
  along dimension 0, 1, ..., d-1 and the first one reaching the best key wins;
* inside a split, the traceback walks children from last to first and gives
  each child the smallest budget that still reaches the target, so earlier
  children in tree order are favoured.

Two engines compute identical rows. The sparse engine recurses only into
nodes whose subspace holds positive weight. The dense engine sweeps the whole
space level by level (by total depth) with numpy, one rectangular block of
tree-depth combinations at a time.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import ProductNode, ProductSpace
from .errors import ConfigError, InputError
from .weights import WeightMap

@dataclass(frozen=True)
class SolverConfig:
    k: int
    engine: str = "auto"

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        if self.engine not in ("auto", "dense", "sparse"):
            raise ConfigError(f"unknown engine {self.engine!r}")


@dataclass(frozen=True)
class Solution:
    segments: tuple[ProductNode, ...]
    total_weight: float
    weights: tuple[float, ...] = field(default=())

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    @property
    def as_set(self) -> frozenset:
        return frozenset(self.segments)


# ----------------------------------------------------------------------------
# rows: (weights, cards), both lists of length k + 1


def zero_row(k: int):
    return [0.0] * (k + 1), [0] * (k + 1)


def _is_zero(row) -> bool:
    # rows are nondecreasing, so the last entry decides
    return row[1][-1] == 0


def _better(w1, c1, w2, c2) -> bool:
    return w1 > w2 or (w1 == w2 and c1 < c2)


def _running_max(ws, cs):
    for j in range(1, len(ws)):
        if _better(ws[j - 1], cs[j - 1], ws[j], cs[j]):
            ws[j], cs[j] = ws[j - 1], cs[j - 1]
    return ws, cs


def _knap(a, b):
    aw, ac = a
    bw, bc = b
    k = len(aw) - 1
    ow = [0.0] * (k + 1)
    oc = [0] * (k + 1)
    for j in range(1, k + 1):
        cands = [aw[j - q] + bw[q] for q in range(j + 1)]
        mw = max(cands)
        oc[j] = min(ac[j - q] + bc[q] for q in range(j + 1) if cands[q] == mw)
        ow[j] = mw
    return _running_max(ow, oc)


def combine_children(rows, k: int):
    """Best union of child solutions along one dimension, for every budget.

    ``rows`` are the children's rows in tree child order. Budget is shared
    among children by the prefix knapsack: child ``m`` is merged into the
    best solution over the first ``m - 1`` children.
    """
    acc = None
    for row in rows:
        if _is_zero(row):
            continue
        acc = (list(row[0]), list(row[1])) if acc is None else _knap(acc, row)
    return acc if acc is not None else zero_row(k)


def node_recurrence(weight: float, split_rows, k: int):
    """Row of a node from its own weight and its per-dimension split rows.

    Leaves simply pass no split rows.
    """
    ws, cs = zero_row(k)
    if weight > 0:
        for j in range(1, k + 1):
            ws[j], cs[j] = weight, 1
    for sw, sc in split_rows:
        for j in range(1, k + 1):
            if _better(sw[j], sc[j], ws[j], cs[j]):
                ws[j], cs[j] = sw[j], sc[j]
    return ws, cs


# ----------------------------------------------------------------------------
# sparse engine


class _SparseTable:
    def __init__(self, space: ProductSpace, weights: WeightMap, k: int):
        self.space = space
        self.weights = weights
        self.k = k
        self.zero = zero_row(k)
        support = set()
        for v, _ in weights.positive_items():
            support.update(space.ancestors(v))
        self.support = support
        self.memo: dict[ProductNode, tuple] = {}

    def row(self, v):
        if v not in self.support:
            return self.zero
        got = self.memo.get(v)
        if got is None:
            self._fill(v)
            got = self.memo[v]
        return got

    def _fill(self, start):
        space, memo, support = self.space, self.memo, self.support
        stack = [start]
        while stack:
            v = stack[-1]
            if v in memo:
                stack.pop()
                continue
            kids = [[c for c in space.children_along(v, i) if c in support] for i in range(space.d)]
            pending = [c for group in kids for c in group if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            splits = [combine_children([memo[c] for c in group], self.k) for group in kids if group]
            memo[v] = node_recurrence(self.weights.get(v), splits, self.k)


# ----------------------------------------------------------------------------
# dense engine


def _bfs_layout(tree):
    """Level-order permutation for the dense engine.

    Nodes of one depth are contiguous and sorted by decreasing child count,
    so for the m-th child step along a dimension only a prefix of each level
    is active. ``child_pos[u, m]`` is the position of the m-th child of the
    node at position ``u``.
    """
    order = []
    level = [tree.root]
    while level:
        level = sorted(level, key=lambda v: -len(tree.children[v]))
        order.extend(level)
        level = [c for v in level for c in tree.children[v]]
    pos = np.empty(len(order), dtype=np.int64)
    pos[order] = np.arange(len(order))
    depth = np.array([tree.depth[v] for v in order])
    starts = np.searchsorted(depth, np.arange(tree.height + 1))
    n_children = np.array([len(tree.children[v]) for v in order], dtype=np.int64)
    child_pos = np.zeros((len(order), max(1, int(n_children.max()))), dtype=np.int64)
    for u, v in enumerate(order):
        child_pos[u, : len(tree.children[v])] = pos[list(tree.children[v])]
    return np.array(order), pos, starts, child_pos, n_children


def _knap_np(aw, ac, bw, bc):
    """Vectorized twin of :func:`_knap`; same values, elementwise only."""
    k = aw.shape[-1] - 1
    ow = aw + bw[..., :1]
    oc = ac + bc[..., :1]
    for q in range(1, k + 1):
        cw = aw[..., : k + 1 - q] + bw[..., q : q + 1]
        cc = ac[..., : k + 1 - q] + bc[..., q : q + 1]
        _lexmax_into(ow[..., q:], oc[..., q:], cw, cc)
    for j in range(1, k + 1):
        _lexmax_into(ow[..., j], oc[..., j], ow[..., j - 1], oc[..., j - 1])
    return ow, oc


def _lexmax_into(bw, bc, cw, cc):
    upd = (cw > bw) | ((cw == bw) & (cc < bc))
    np.copyto(bw, cw, where=upd)
    np.copyto(bc, cc, where=upd)


class _DenseTable:
    def __init__(self, space: ProductSpace, weights: WeightMap, k: int):
        self.space = space
        self.k = k
        layouts = [_bfs_layout(t) for t in space.trees]
        self.pos = [lay[1] for lay in layouts]
        w = weights.array[np.ix_(*[lay[0] for lay in layouts])]
        shape = tuple(space.sizes) + (k + 1,)
        SW = np.zeros(shape)
        SC = np.zeros(shape, dtype=np.int32)
        heights = [t.height for t in space.trees]
        by_level: dict[int, list] = {}
        for dv in itertools.product(*(range(h) for h in heights)):
            by_level.setdefault(sum(dv), []).append(dv)

        for level in sorted(by_level, reverse=True):
            for dv in by_level[level]:
                block = tuple(slice(lay[2][x], lay[2][x + 1]) for lay, x in zip(layouts, dv))
                wb = w[block][..., None]
                bw = np.zeros(wb.shape[:-1] + (k + 1,))
                bc = np.zeros(bw.shape, dtype=np.int32)
                pos_w = wb > 0
                bw[..., 1:] = np.where(pos_w, wb, 0.0)
                bc[..., 1:] = np.where(pos_w, 1, 0)
                for i, lay in enumerate(layouts):
                    lo, hi = block[i].start, block[i].stop
                    counts = lay[4][lo:hi]
                    maxc = int(counts[0]) if len(counts) else 0
                    if maxc == 0:
                        continue
                    src = block[:i] + (slice(None),) + block[i + 1:]
                    subw, subc = SW[src], SC[src]
                    kids = lay[3][lo:hi]
                    # levels are sorted by child count: nodes with an m-th child form a prefix
                    active = int(np.count_nonzero(counts > 0))
                    aw = np.zeros(bw.shape)
                    ac = np.zeros(bc.shape, dtype=np.int32)
                    pre = (slice(None),) * i + (slice(0, active),)
                    aw[pre] = np.take(subw, kids[:active, 0], axis=i)
                    ac[pre] = np.take(subc, kids[:active, 0], axis=i)
                    for m in range(1, maxc):
                        active = int(np.count_nonzero(counts > m))
                        pre = (slice(None),) * i + (slice(0, active),)
                        gw = np.take(subw, kids[:active, m], axis=i)
                        gc = np.take(subc, kids[:active, m], axis=i)
                        aw[pre], ac[pre] = _knap_np(aw[pre], ac[pre], gw, gc)
                    _lexmax_into(bw, bc, aw, ac)
                SW[block] = bw
                SC[block] = bc
        self.SW = SW
        self.SC = SC

    def row(self, v):
        idx = tuple(int(p[x]) for p, x in zip(self.pos, v))
        return self.SW[idx].tolist(), self.SC[idx].tolist()


# ----------------------------------------------------------------------------
# traceback


def _prefix_rows(rows):
    out = []
    acc = None
    for row in rows:
        acc = (list(row[0]), list(row[1])) if acc is None else _knap(acc, row)
        out.append(acc)
    return out


def _split_budgets(rows, j, target):
    """Budgets per child (same order as ``rows``) reaching ``target``."""
    prefix = _prefix_rows(rows)
    budgets = [0] * len(rows)
    tw, tc = target
    b = j
    for m in range(len(rows) - 1, 0, -1):
        pw, pc = prefix[m - 1]
        rw, rc = rows[m]
        found = None
        for q in range(b + 1):
            for p in range(b - q, -1, -1):
                if pw[p] + rw[q] == tw and pc[p] + rc[q] == tc:
                    found = (p, q)
                    break
            if found:
                break
        if found is None:  # pragma: no cover - rows are internally consistent
            raise AssertionError("traceback lost the target key")
        p, q = found
        budgets[m] = q
        tw, tc = pw[p], pc[p]
        b = p
    budgets[0] = b
    return budgets


def _traceback(space: ProductSpace, weights: WeightMap, table, k: int) -> list[ProductNode]:
    out = []
    stack = [(space.root, k)]
    while stack:
        v, j = stack.pop()
        rw, rc = table.row(v)
        key = (rw[j], rc[j])
        if key[1] == 0:
            continue
        wv = weights.get(v)
        if wv > 0 and key == (wv, 1):
            out.append(v)
            continue
        for i in range(space.d):
            kids = space.children_along(v, i)
            if not kids:
                continue
            live = [(c, table.row(c)) for c in kids]
            live = [(c, r) for c, r in live if not _is_zero(r)]
            if not live:
                continue
            split = combine_children([r for _, r in live], k)
            if (split[0][j], split[1][j]) != key:
                continue
            budgets = _split_budgets([r for _, r in live], j, key)
            for (c, _), q in reversed(list(zip(live, budgets))):
                if q > 0:
                    stack.append((c, q))
            break
        else:  # pragma: no cover
            raise AssertionError(f"no candidate reproduces the key at {v}")
    return out


# ----------------------------------------------------------------------------


DENSE_MIN_NODES = 4096


def build_table(space: ProductSpace, weights: WeightMap, k: int, engine: str = "auto"):
    # tiny spaces are cheaper in pure Python than through numpy dispatch
    if engine == "auto":
        engine = "dense" if weights.is_dense and space.n >= DENSE_MIN_NODES else "sparse"
    if engine == "dense":
        return _DenseTable(space, weights.to_dense(), k)
    return _SparseTable(space, weights if not weights.is_dense else weights.to_sparse(), k)


def solve(space: ProductSpace, weights: WeightMap, cfg: SolverConfig | int) -> Solution:
    """Best conflict-free, overlap-free set of at most ``k`` segments.

    For two dimensions this is an optimal Summarize solution; in general it
    is optimal among conflict-free sets.
    """
    if not isinstance(cfg, SolverConfig):
        cfg = SolverConfig(cfg)
    if not isinstance(weights, WeightMap):
        raise InputError("weights must be a WeightMap")
    if weights.space != space:
        raise InputError("weight map belongs to a different space")
    table = build_table(space, weights, cfg.k, cfg.engine)
    segs = _traceback(space, weights, table, cfg.k)
    ws = tuple(weights.get(s) for s in segs)
    return Solution(tuple(segs), math.fsum(ws), ws)


def solve_all_budgets(space: ProductSpace, weights: WeightMap, k: int, engine: str = "auto"):
    """Root row weights for budgets ``0..k`` (non-decreasing)."""
    SolverConfig(k, engine)
    table = build_table(space, weights, k, engine)
    return table.row(space.root)[0]
