"""Exhaustive reference checkers for small instances.

Nothing here shares code with the dynamic program: the exact solvers
enumerate subsets of positive-weight nodes directly.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .core import ProductNode, ProductSpace
from .errors import CapacityError
from .solver import Solution
from .weights import WeightMap

# subsets of size <= min(k, P) the enumeration may face; 2**26 admits P = 26 at k = inf
MAX_SUBSETS = 2 ** 26
MAX_CONFLICT_CHECK = 20


def is_overlap_free(space: ProductSpace, s) -> bool:
    s = list(s)
    return not any(space.overlap(p, q) for p, q in itertools.combinations(s, 2))


def is_conflict(space: ProductSpace, s) -> bool:
    """True iff every dimension has a member that dominates all members there.

    Sets with fewer than two nodes are not conflicts.
    """
    s = list(s)
    if len(s) < 2:
        return False
    for i, tree in enumerate(space.trees):
        if not any(all(tree.is_ancestor_or_self(c[i], x[i]) for x in s) for c in s):
            return False
    return True


def is_conflict_free(space: ProductSpace, s) -> bool:
    s = list(s)
    if len(s) > MAX_CONFLICT_CHECK:
        raise CapacityError(f"conflict check over {len(s)} nodes exceeds {MAX_CONFLICT_CHECK}")
    return not any(
        is_conflict(space, sub)
        for r in range(2, len(s) + 1)
        for sub in itertools.combinations(s, r)
    )


def _overlap_matrix(space: ProductSpace, nodes) -> np.ndarray:
    """Pairwise overlap as a boolean matrix, via preorder interval labels."""
    P = len(nodes)
    out = np.ones((P, P), dtype=bool)
    if P == 0:
        return out
    coords = np.array(nodes, dtype=np.int64).reshape(P, space.d)
    for i, tree in enumerate(space.trees):
        tin = np.array(tree._tin)[coords[:, i]]
        tout = np.array(tree._tout)[coords[:, i]]
        a_over_b = (tin[:, None] <= tin[None, :]) & (tout[None, :] <= tout[:, None])
        out &= a_over_b | a_over_b.T
    return out


def subset_count(P: int, k: int) -> int:
    return sum(math.comb(P, s) for s in range(min(k, P) + 1))


def _search(space, weights: WeightMap, k, conflict_free: bool, max_subsets: int) -> Solution:
    items = weights.positive_items()
    items.sort(key=lambda kv: (-kv[1], kv[0]))
    nodes = [v for v, _ in items]
    ws = [w for _, w in items]
    P = len(nodes)
    if k is None:
        k = P
    k = min(k, P)
    if subset_count(P, k) > max_subsets:
        raise CapacityError(
            f"{P} positive-weight nodes with k={k} exceed the enumeration guard"
        )
    ov = _overlap_matrix(space, nodes)
    compat = []
    for i in range(P):
        bits = 0
        for j in np.nonzero(~ov[i])[0].tolist():
            bits |= 1 << j
        compat.append(bits)
    # items are sorted by weight, so the next `room` items bound any completion
    prefix = [0.0]
    for w in ws:
        prefix.append(prefix[-1] + w)

    best_w = 0.0
    best: list[int] = []
    chosen: list[int] = []

    def creates_conflict(i):
        if not conflict_free or len(chosen) < 2:
            return False
        group = [nodes[c] for c in chosen]
        x = nodes[i]
        for r in range(2, len(group) + 1):
            for sub in itertools.combinations(group, r):
                if is_conflict(space, sub + (x,)):
                    return True
        return False

    def dfs(start, allowed, total):
        nonlocal best_w, best
        if total > best_w:
            best_w = total
            best = list(chosen)
        room = k - len(chosen)
        if room == 0 or allowed == 0:
            return
        i = start
        while i < P:
            if not (allowed >> i) & 1:
                i += 1
                continue
            end = min(P, i + room)
            if total + prefix[end] - prefix[i] <= best_w:
                return
            if not creates_conflict(i):
                chosen.append(i)
                dfs(i + 1, allowed & compat[i] & ~((1 << (i + 1)) - 1), total + ws[i])
                chosen.pop()
            i += 1

    dfs(0, (1 << P) - 1, 0.0)
    segs = tuple(nodes[i] for i in best)
    seg_w = tuple(ws[i] for i in best)
    return Solution(segs, math.fsum(seg_w), seg_w)


def brute_force_optimal(space: ProductSpace, weights: WeightMap, k: int | None = None,
                        *, max_subsets: int = MAX_SUBSETS) -> Solution:
    """Exact maximum-weight overlap-free set of at most ``k`` nodes (``None``: no limit)."""
    return _search(space, weights, k, False, max_subsets)


def brute_force_conflict_free(space: ProductSpace, weights: WeightMap, k: int | None = None,
                              *, max_subsets: int = MAX_SUBSETS) -> Solution:
    """Exact maximum-weight set that is both overlap-free and conflict-free."""
    return _search(space, weights, k, True, max_subsets)


def brute_force_mis(n_vertices: int, edges) -> int:
    """Size of a maximum independent set, ignoring edge direction."""
    adj = [0] * n_vertices
    for v, w in edges:
        adj[v] |= 1 << w
        adj[w] |= 1 << v
    best = 0
    for mask in range(1 << n_vertices):
        size = bin(mask).count("1")
        if size <= best:
            continue
        if all(not (adj[v] & mask) for v in range(n_vertices) if mask >> v & 1):
            best = size
    return best


def approximation_bound(space: ProductSpace) -> float:
    """Worst-case ratio optimum / Cascading Analysts for this space.

    ``min(ceil(log2(m + 1)), h) ** (d - 2)`` with ``m`` the largest tree size
    and ``h`` the largest tree height; 1 for ``d <= 2``.
    """
    if space.d <= 2:
        return 1.0
    m = max(space.sizes)
    h = max(t.height for t in space.trees)
    return float(min(m.bit_length(), h) ** (space.d - 2))

