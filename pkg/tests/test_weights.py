import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hiersumm import (
    CellTable,
    ConfigError,
    InputError,
    WeightMap,
    aggregate,
    build_weight_map,
    weight_absdiff,
    weight_boxcox,
    weight_composition,
)
from hiersumm.generators import gen_random, gen_two_tree_example

from conftest import spaces


def _brute_aggregate(space, cells, v):
    t = l = 0.0
    for key, (a, b) in cells.merged().items():
        if space.in_subspace(key, v):
            t += a
            l += b
    return t, l


def test_aggregate_fig1_all_up(fig1):
    x = 3.0
    cells = CellTable.from_dict(fig1, {leaf: (0.0, x) for leaf in fig1.leaves()})
    agg = aggregate(cells, fig1)
    assert agg.get(fig1.node("r1", "a2")) == (0.0, 2 * x)
    assert agg.totals == (0.0, 4 * x)


@pytest.mark.parametrize("dense", [True, False])
def test_aggregate_empty(fig1, dense):
    agg = aggregate(CellTable.empty(fig1), fig1, dense=dense)
    assert all(agg.get(v) == (0.0, 0.0) for v in fig1.nodes())


@pytest.mark.parametrize("dense", [True, False])
def test_aggregate_single_cell(fig3d, dense):
    p = fig3d.node("a1", "b2", "a3")
    agg = aggregate(CellTable.from_dict(fig3d, {p: (3.0, 5.0)}), fig3d, dense=dense)
    ancestors = set(fig3d.ancestors(p))
    for v in fig3d.nodes():
        assert agg.get(v) == ((3.0, 5.0) if v in ancestors else (0.0, 0.0))


def test_aggregate_rejects_bad_cells(fig1):
    with pytest.raises(InputError):
        CellTable.from_dict(fig1, {fig1.node("r1", "a2"): (1.0, 1.0)})
    with pytest.raises(InputError):
        CellTable.from_dict(fig1, {fig1.node("a1", "a2"): (-1.0, 1.0)})


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_aggregate_matches_subspace_sums(seed):
    inst = gen_random(2, [4, 5], max_height=3, cell_density=0.6, seed=seed)
    space, cells = inst.space, inst.cells
    dense = aggregate(cells, space, dense=True)
    sparse = aggregate(cells, space, dense=False)
    for v in space.nodes():
        expected = _brute_aggregate(space, cells, v)
        assert dense.get(v) == pytest.approx(expected)
        assert sparse.get(v) == pytest.approx(expected)
        for i in range(space.d):
            kids = space.children_along(v, i)
            if kids:
                assert sum(dense.get(c)[0] for c in kids) == pytest.approx(dense.get(v)[0])
                assert sum(dense.get(c)[1] for c in kids) == pytest.approx(dense.get(v)[1])


def test_absdiff_examples():
    assert weight_absdiff(4, 10) == 6
    assert weight_absdiff(7, 7) == 0


def test_fig1_weights():
    inst = gen_two_tree_example(1.0)
    space, w = inst.space, inst.weights
    expected = {space.node("r1", "a2"): 2.0, space.node("r1", "b2"): 2.0}
    for leaf in space.leaves():
        expected[leaf] = 1.0
    for v in space.nodes():
        assert w[v] == expected.get(v, 0.0)


def test_composition_examples():
    assert weight_composition(5, 10, 10, 20) == 0
    assert weight_composition(0, 10, 10, 20) == 0.5
    with pytest.raises(ConfigError):
        weight_composition(1, 1, 0, 5)


def test_composition_with_empty_period_is_config_error(fig1):
    cells = CellTable.from_dict(fig1, {fig1.node("a1", "a2"): (0.0, 4.0)})
    with pytest.raises(ConfigError):
        build_weight_map(cells, fig1, "composition")


@settings(max_examples=30)
@given(st.integers(0, 10_000), st.integers(2, 9))
def test_composition_invariant_under_period_scaling(seed, factor):
    inst = gen_random(3, 3, max_height=2, cell_density=0.8, seed=seed)
    cells = inst.cells
    if cells.pre.sum() == 0 or cells.cur.sum() == 0:
        return
    scaled = CellTable(inst.space, cells.coords, cells.pre * factor, cells.cur)
    a = build_weight_map(cells, inst.space, "composition", dense=True)
    b = build_weight_map(scaled, inst.space, "composition", dense=True)
    np.testing.assert_allclose(a.array, b.array, rtol=0, atol=1e-12)


def test_boxcox_examples():
    assert weight_boxcox(4, 10, 0) == 6
    assert weight_boxcox(9, 9, 0.2) == 0
    small_base = weight_boxcox(500, 1000, 0.2)
    large_base = weight_boxcox(10500, 11000, 0.2)
    # oracle: the formula evaluated with math.pow
    assert small_base == pytest.approx((1000 ** 0.8 - 500 ** 0.8) / 0.8)
    assert large_base == pytest.approx((11000 ** 0.8 - 10500 ** 0.8) / 0.8)
    assert small_base > large_base


def test_boxcox_rejects_m_out_of_range():
    for m in (1.0, 1.5, -0.1):
        with pytest.raises(ConfigError):
            weight_boxcox(1, 2, m)


def test_boxcox_clamps_zero():
    w = weight_boxcox(0.0, 1.0, 0.2)
    assert math.isfinite(w)
    assert w == pytest.approx((1 - 1e-9 ** 0.8) / 0.8)


def test_boxcox_m0_matches_absdiff_bitwise():
    rng = np.random.default_rng(7)
    t = rng.random(100_000) * 1e4
    l = rng.random(100_000) * 1e4
    assert np.array_equal(weight_boxcox(t, l, 0.0), weight_absdiff(t, l))


@given(st.floats(0.01, 1e6), st.floats(0.01, 1e6), st.floats(0.0, 0.98))
def test_boxcox_continuous_in_m(t, l, m):
    a = weight_boxcox(t, l, m)
    b = weight_boxcox(t, l, m + 1e-7)
    assert math.isfinite(a) and a >= 0
    assert abs(a - b) <= 1e-4 * max(1.0, a)


def test_build_weight_map_empty(fig1):
    for fn in ("absdiff", "boxcox"):
        w = build_weight_map(CellTable.empty(fig1), fig1, fn)
        assert w.positive_items() == []


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_absdiff_triangle_inequality(seed):
    inst = gen_random(2, [5, 4], max_height=3, cell_density=0.7, seed=seed)
    space, w = inst.space, inst.weights
    agg = aggregate(inst.cells, space)
    leaf_sum = sum(w[v] for v in space.leaves())
    assert w[space.root] <= leaf_sum + 1e-9
    for v in space.nodes():
        t, l = agg.get(v)
        assert w[v] == abs(l - t)
        for i in range(space.d):
            kids = space.children_along(v, i)
            if not kids:
                continue
            deltas = [agg.get(c)[1] - agg.get(c)[0] for c in kids]
            total = sum(w[c] for c in kids)
            assert w[v] <= total + 1e-9
            if all(x >= 0 for x in deltas) or all(x <= 0 for x in deltas):
                assert w[v] == pytest.approx(total)


def test_weight_map_validation(fig1):
    with pytest.raises(InputError):
        WeightMap.from_dict(fig1, {fig1.root: -1.0})
    with pytest.raises(InputError):
        WeightMap.from_dict(fig1, {fig1.root: float("nan")})
    with pytest.raises(InputError):
        WeightMap(fig1, array=np.zeros((2, 2)))


@settings(max_examples=30)
@given(spaces(max_d=3, max_size=3), st.data())
def test_dense_and_sparse_maps_agree(space, data):
    nodes = list(space.nodes())
    picked = data.draw(st.lists(st.sampled_from(nodes), unique=True, max_size=6))
    wm = WeightMap.from_dict(space, {v: 1.5 for v in picked})
    dense = wm.to_dense()
    assert dense.positive_items() == wm.positive_items()
    assert dense.to_sparse().sparse == wm.sparse
