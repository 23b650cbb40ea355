import numpy as np
import pytest

from hiersumm import DimensionTree
from hiersumm.decomposition import (
    TreePath,
    ceil_log2,
    check_decomposition,
    decompose_by_height,
    decompose_paths,
    forest_height,
)
from hiersumm.errors import InputError
from hiersumm.generators import random_tree


def _path(n):
    return DimensionTree([None] + list(range(n - 1)))


def test_ceil_log2():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_single_path():
    t = _path(4)
    dec = decompose_paths(t)
    assert dec.n_groups == 1
    assert dec.groups[0] == (TreePath(0, (0, 1, 2, 3)),)
    assert decompose_by_height(_path(1)).n_groups == 1
    assert decompose_by_height(DimensionTree([None, 0, 0, 0])).n_groups == 2


def test_star_with_three_leaves():
    t = DimensionTree.star("r", ["x", "y", "z"])
    dec = decompose_paths(t)
    check_decomposition(t, dec)
    assert dec.n_groups == 2
    # the middle leaf's root path is the last group
    assert dec.groups[-1] == (TreePath(0, (0, 2)),)


def test_height_two_tree():
    t = DimensionTree.star("r", ["x", "y"])
    dec = decompose_by_height(t)
    check_decomposition(t, dec)
    assert dec.n_groups == 2


def test_empty_forest_rejected():
    with pytest.raises(InputError):
        decompose_paths([])
    with pytest.raises(InputError):
        TreePath(0, ())


def test_check_decomposition_catches_overlap():
    t = DimensionTree.star("r", ["x", "y"])
    bad = decompose_paths(t).__class__(((TreePath(0, (0, 1)), TreePath(0, (2,))),))
    with pytest.raises(AssertionError):
        check_decomposition(t, bad)


def _forest(rng):
    n_trees = int(rng.integers(1, 4))
    return [random_tree(int(rng.integers(1, 30)), int(rng.integers(2, 7)), rng) for _ in range(n_trees)]


@pytest.mark.parametrize("seed", range(60))
def test_random_forests(seed):
    forest = _forest(np.random.default_rng(seed))
    ell = sum(len(t.leaves) for t in forest)
    dec = decompose_paths(forest)
    check_decomposition(forest, dec)
    assert dec.n_groups <= ceil_log2(ell + 1)
    by_h = decompose_by_height(forest)
    check_decomposition(forest, by_h)
    assert by_h.n_groups == forest_height(forest)
