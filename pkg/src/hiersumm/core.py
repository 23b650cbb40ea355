"""Dimension trees, their cartesian product, and the structural predicates.

A product node is a plain tuple of integer tree-node indices, one per
dimension. Ancestor tests use preorder interval labels, so every predicate is
O(d) and nothing of size ``n`` is ever materialized here.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Iterator, Sequence

from .errors import StructureError

ProductNode = tuple  # tuple[int, ...]


class DimensionTree:
    """A rooted hierarchy with a fixed child order.

    Nodes are addressed by their integer index ``0..size-1``. Each node also
    carries an external ``id`` (the key used in files) and a display ``name``.
    Children are ordered by index, which is the construction order.
    """

    def __init__(
        self,
        parents: Sequence[int | None],
        names: Sequence[str] | None = None,
        ids: Sequence[str] | None = None,
    ):
        size = len(parents)
        if size == 0:
            raise StructureError("a tree needs at least one node")
        if ids is None:
            ids = [str(i) for i in range(size)]
        if names is None:
            names = list(ids)
        if len(ids) != size or len(names) != size:
            raise StructureError("parents, names and ids must have equal length")
        if len(set(ids)) != size:
            raise StructureError("node ids must be unique")

        roots = [i for i, p in enumerate(parents) if p is None]
        if len(roots) != 1:
            raise StructureError(f"expected exactly one root, found {len(roots)}")
        children: list[list[int]] = [[] for _ in range(size)]
        for i, p in enumerate(parents):
            if p is None:
                continue
            if not (0 <= p < size) or p == i:
                raise StructureError(f"node {ids[i]!r} has invalid parent {p!r}")
            children[p].append(i)

        self.parents = tuple(parents)
        self.children = tuple(tuple(c) for c in children)
        self.names = tuple(str(s) for s in names)
        self.ids = tuple(str(s) for s in ids)
        self.root = roots[0]
        self._index = {key: i for i, key in enumerate(self.ids)}

        # preorder walk: depth plus [tin, tout) interval labels
        depth = [-1] * size
        tin = [0] * size
        tout = [0] * size
        preorder = []
        stack = [(self.root, 0, False)]
        clock = 0
        while stack:
            v, dep, done = stack.pop()
            if done:
                tout[v] = clock
                continue
            depth[v] = dep
            tin[v] = clock
            clock += 1
            preorder.append(v)
            stack.append((v, dep, True))
            for c in reversed(self.children[v]):
                stack.append((c, dep + 1, False))
        if len(preorder) != size:
            raise StructureError("parent links contain a cycle or unreachable node")
        self.depth = tuple(depth)
        self.preorder = tuple(preorder)
        self._tin = tuple(tin)
        self._tout = tuple(tout)
        self.height = max(depth) + 1  # counted in nodes

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, str | None, str]]) -> DimensionTree:
        """Build from ``(id, parent_id, name)`` rows; row order is child order."""
        rows = list(rows)
        index = {}
        for i, (key, _, _) in enumerate(rows):
            if key in index:
                raise StructureError(f"duplicate node id {key!r}")
            index[key] = i
        parents = []
        for key, parent, _ in rows:
            if parent in (None, ""):
                parents.append(None)
            elif parent not in index:
                raise StructureError(f"node {key!r} references unknown parent {parent!r}")
            else:
                parents.append(index[parent])
        return cls(parents, [r[2] for r in rows], [r[0] for r in rows])

    @classmethod
    def star(cls, root: str, leaves: Sequence[str]) -> DimensionTree:
        """A height-two tree: ``root`` with the given leaves as children."""
        return cls.from_rows([(root, None, root)] + [(x, root, x) for x in leaves])

    def __len__(self):
        return len(self.parents)

    def __repr__(self):
        return f"DimensionTree(size={len(self)}, root={self.ids[self.root]!r}, height={self.height})"

    def __eq__(self, other):
        if not isinstance(other, DimensionTree):
            return NotImplemented
        return (self.parents, self.names, self.ids) == (other.parents, other.names, other.ids)

    def __hash__(self):
        return hash((self.parents, self.names, self.ids))

    def index(self, key: str) -> int:
        try:
            return self._index[key]
        except KeyError:
            raise StructureError(f"unknown node id {key!r}") from None

    def check(self, v: int) -> None:
        if not isinstance(v, (int,)) or isinstance(v, bool) or not (0 <= v < len(self.parents)):
            raise StructureError(f"invalid tree node {v!r}")

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in self.preorder if not self.children[v])

    def is_ancestor_or_self(self, a: int, v: int) -> bool:
        return self._tin[a] <= self._tin[v] and self._tout[v] <= self._tout[a]

    def overlaps(self, p: int, q: int) -> bool:
        return self.is_ancestor_or_self(p, q) or self.is_ancestor_or_self(q, p)

    def ancestors(self, v: int) -> list[int]:
        """``v`` followed by its proper ancestors up to the root."""
        out = [v]
        while self.parents[out[-1]] is not None:
            out.append(self.parents[out[-1]])
        return out

    def subtree(self, v: int) -> list[int]:
        """Nodes below ``v`` (inclusive), in preorder."""
        lo, hi = self._tin[v], self._tout[v]
        return list(self.preorder[lo:hi])


def tree_overlap(tree: DimensionTree, p: int, q: int) -> bool:
    """True iff ``p == q`` or one is an ancestor of the other."""
    tree.check(p)
    tree.check(q)
    return tree.overlaps(p, q)


class ProductSpace:
    """The cartesian product of ``d >= 1`` dimension trees. Immutable."""

    def __init__(self, trees: Sequence[DimensionTree]):
        trees = tuple(trees)
        if not trees:
            raise StructureError("a product space needs at least one dimension")
        for t in trees:
            if not isinstance(t, DimensionTree):
                raise StructureError(f"expected DimensionTree, got {type(t).__name__}")
        self.trees = trees
        self.d = len(trees)
        self.sizes = tuple(len(t) for t in trees)
        self.n = math.prod(self.sizes)
        self.root = tuple(t.root for t in trees)

    def __repr__(self):
        return f"ProductSpace(sizes={self.sizes}, n={self.n})"

    def __eq__(self, other):
        if not isinstance(other, ProductSpace):
            return NotImplemented
        return self.trees == other.trees

    def __hash__(self):
        return hash(self.trees)

    def check(self, p: ProductNode) -> None:
        if len(p) != self.d:
            raise StructureError(f"node {p!r} has {len(p)} coordinates, space has {self.d} dimensions")
        for tree, v in zip(self.trees, p):
            tree.check(v)

    def node(self, *keys: str) -> ProductNode:
        """Look up a product node by the external ids of its coordinates."""
        if len(keys) != self.d:
            raise StructureError(f"expected {self.d} ids, got {len(keys)}")
        return tuple(t.index(key) for t, key in zip(self.trees, keys))

    def ids_of(self, p: ProductNode) -> tuple[str, ...]:
        return tuple(t.ids[v] for t, v in zip(self.trees, p))

    def names_of(self, p: ProductNode) -> tuple[str, ...]:
        return tuple(t.names[v] for t, v in zip(self.trees, p))

    def nodes(self) -> Iterator[ProductNode]:
        return itertools.product(*(range(s) for s in self.sizes))

    def leaves(self) -> Iterator[ProductNode]:
        return itertools.product(*(t.leaves for t in self.trees))

    def is_leaf(self, v: ProductNode) -> bool:
        return all(t.is_leaf(x) for t, x in zip(self.trees, v))

    def overlap(self, p: ProductNode, q: ProductNode) -> bool:
        self.check(p)
        self.check(q)
        return all(t.overlaps(a, b) for t, a, b in zip(self.trees, p, q))

    def in_subspace(self, p: ProductNode, q: ProductNode) -> bool:
        """True iff ``p`` is in Sub(q), i.e. componentwise descendant-or-equal."""
        self.check(p)
        self.check(q)
        return all(t.is_ancestor_or_self(b, a) for t, a, b in zip(self.trees, p, q))

    def children_along(self, v: ProductNode, i: int) -> list[ProductNode]:
        if not 0 <= i < self.d:
            raise StructureError(f"dimension {i} out of range for d={self.d}")
        head, tail = v[:i], v[i + 1:]
        return [head + (c,) + tail for c in self.trees[i].children[v[i]]]

    def parents_of(self, v: ProductNode) -> list[ProductNode]:
        out = []
        for i, (t, x) in enumerate(zip(self.trees, v)):
            p = t.parents[x]
            if p is not None:
                out.append(v[:i] + (p,) + v[i + 1:])
        return out

    def total_depth(self, v: ProductNode) -> int:
        return sum(t.depth[x] for t, x in zip(self.trees, v))

    def ancestors(self, v: ProductNode) -> Iterator[ProductNode]:
        """Every node whose subspace contains ``v`` (``v`` included)."""
        return itertools.product(*(t.ancestors(x) for t, x in zip(self.trees, v)))


def overlap(space: ProductSpace, p: ProductNode, q: ProductNode) -> bool:
    return space.overlap(p, q)


def in_subspace(space: ProductSpace, p: ProductNode, q: ProductNode) -> bool:
    return space.in_subspace(p, q)


def children_along(space: ProductSpace, v: ProductNode, i: int) -> list[ProductNode]:
    return space.children_along(v, i)


def total_depth(space: ProductSpace, v: ProductNode) -> int:
    return space.total_depth(v)
