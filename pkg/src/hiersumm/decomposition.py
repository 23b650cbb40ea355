"""Partitions of a forest into groups of mutually non-overlapping paths.

A forest is one or more :class:`DimensionTree`; a node is referenced as
``(tree_index, node)``. Two paths overlap when some node of one is equal to,
or an ancestor of, some node of the other; nodes in different trees never
overlap.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .core import DimensionTree
from .errors import InputError


@dataclass(frozen=True)
class TreePath:
    tree: int
    nodes: tuple[int, ...]

    def __post_init__(self):
        if not self.nodes:
            raise InputError("a path needs at least one node")

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class PathDecomposition:
    groups: tuple[tuple[TreePath, ...], ...]

    def __len__(self):
        return len(self.groups)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    def paths(self):
        for g in self.groups:
            yield from g


def _as_forest(forest) -> list[DimensionTree]:
    if isinstance(forest, DimensionTree):
        return [forest]
    forest = list(forest)
    if not forest:
        raise InputError("forest must contain at least one tree")
    return forest


def ceil_log2(x: int) -> int:
    """``ceil(log2(x))`` for a positive integer."""
    return (x - 1).bit_length()


def _leaves_under(forest, roots):
    """Leaves below ``roots``, in preorder."""
    out = []
    for t, v in roots:
        tree = forest[t]
        out.extend((t, u) for u in tree.subtree(v) if tree.is_leaf(u))
    return out


def _root_path(tree: DimensionTree, leaf: int, top: int) -> tuple[int, ...]:
    path = [leaf]
    while path[-1] != top:
        path.append(tree.parents[path[-1]])
    return tuple(reversed(path))


def _median_split(forest, roots):
    leaves = _leaves_under(forest, roots)
    ell = len(leaves)
    n_groups = ceil_log2(ell + 1)
    groups: list[list[TreePath]] = [[] for _ in range(n_groups)]
    if ell == 0:
        return groups
    m = (ell + 1) // 2  # 1-based index of the middle leaf
    t, leaf = leaves[m - 1]
    tree = forest[t]
    top = next(v for tt, v in roots if tt == t and tree.is_ancestor_or_self(v, leaf))
    path = _root_path(tree, leaf, top)
    groups[-1].append(TreePath(t, path))

    on_path = set(path)
    left, right = [], []
    # every remaining subtree lies wholly before or after the middle leaf in preorder
    hanging = []
    for tt, v in roots:
        if tt == t and v == top:
            for u in path:
                hanging.extend((t, c) for c in tree.children[u] if c not in on_path)
        else:
            hanging.append((tt, v))
    leaf_rank = {x: r for r, x in enumerate(leaves)}
    for tt, v in hanging:
        first = next(x for x in _leaves_under(forest, [(tt, v)]))
        (left if leaf_rank[first] < m - 1 else right).append((tt, v))
    left.sort(key=lambda x: leaf_rank[_leaves_under(forest, [x])[0]])
    right.sort(key=lambda x: leaf_rank[_leaves_under(forest, [x])[0]])

    for sub in (left, right):
        if not sub:
            continue
        for i, g in enumerate(_median_split(forest, sub)):
            groups[i].extend(g)
    return groups


def decompose_paths(forest: DimensionTree | Sequence[DimensionTree]) -> PathDecomposition:
    """Split a forest with ``l`` leaves into ``ceil(log2(l + 1))`` path groups.

    The path from the middle leaf (in preorder) up to its root goes into the
    last group; the leaves before and after it form two smaller forests that
    are decomposed recursively and merged group by group.
    """
    forest = _as_forest(forest)
    roots = [(i, t.root) for i, t in enumerate(forest)]
    groups = _median_split(forest, roots)
    return PathDecomposition(tuple(tuple(g) for g in groups))


def forest_height(forest) -> int:
    return max(t.height for t in _as_forest(forest))


def decompose_by_height(forest: DimensionTree | Sequence[DimensionTree]) -> PathDecomposition:
    """One group per level of height: repeatedly strip a root-to-leaf path per root.

    Each round takes, from every remaining root, the path that follows first
    children down to a leaf. A round can shorten the forest by more than one
    level, so the group list is padded with empty groups to exactly the
    forest height.
    """
    forest = _as_forest(forest)
    height = forest_height(forest)
    roots = [(i, t.root) for i, t in enumerate(forest)]
    groups = []
    while roots:
        group = []
        nxt = []
        for t, v in roots:
            tree = forest[t]
            path = [v]
            while tree.children[path[-1]]:
                path.append(tree.children[path[-1]][0])
            group.append(TreePath(t, tuple(path)))
            on_path = set(path)
            for u in path:
                nxt.extend((t, c) for c in tree.children[u] if c not in on_path)
        groups.append(tuple(group))
        roots = nxt
    groups.extend(() for _ in range(height - len(groups)))
    return PathDecomposition(tuple(groups))


def paths_overlap(forest, p: TreePath, q: TreePath) -> bool:
    if p.tree != q.tree:
        return False
    tree = _as_forest(forest)[p.tree]
    return any(tree.overlaps(a, b) for a in p.nodes for b in q.nodes)


def check_decomposition(forest, dec: PathDecomposition) -> None:
    """Raise ``AssertionError`` unless ``dec`` is a valid grouped path partition."""
    forest = _as_forest(forest)
    seen = set()
    for path in dec.paths():
        tree = forest[path.tree]
        for a, b in zip(path.nodes, path.nodes[1:]):
            assert tree.parents[b] == a, f"{path} is not a downward path"
        for v in path.nodes:
            assert (path.tree, v) not in seen, f"node {(path.tree, v)} appears twice"
            seen.add((path.tree, v))
    total = sum(len(t) for t in forest)
    assert len(seen) == total, f"{total - len(seen)} nodes are not covered"
    for g in dec.groups:
        for i, p in enumerate(g):
            for q in g[i + 1:]:
                assert not paths_overlap(forest, p, q), f"paths {p} and {q} overlap"
