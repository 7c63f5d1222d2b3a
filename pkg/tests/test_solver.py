import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtile.errors import InfeasibleBudget, OutOfBounds, PreconditionViolated, ScaleExceeded
from rtile.instance import Tile, validate_tiling, tile_weight
from rtile.solver import (approx_greedy, exact_decide, exact_optimize, max_weight,
                          structured_decide, structured_min_tiles)

grids = st.integers(1, 4).flatmap(lambda h: st.integers(1, 4).flatmap(
    lambda w: st.lists(st.lists(st.integers(1, 3), min_size=w, max_size=w),
                       min_size=h, max_size=h)))


def test_tile_weight():
    assert tile_weight([[1, 2], [2, 1]], Tile(0, 0, 0, 1)) == 3
    assert tile_weight([[5]], Tile(0, 0, 0, 0)) == 5
    assert tile_weight([[1, 1], [1, 1]], Tile(0, 0, 1, 1)) == 4
    with pytest.raises(OutOfBounds):
        tile_weight([[1]], Tile(0, 0, 0, 1))


def test_validate_tiling_reports():
    g = [[1, 2], [2, 1]]
    assert validate_tiling(g, [Tile(0, 0, 0, 1), Tile(1, 0, 1, 1)], 2, 3).ok
    rep = validate_tiling(g, [Tile(0, 0, 0, 1), Tile(0, 1, 1, 1), Tile(1, 0, 1, 0)], 2, 3)
    assert any("overlap at (0, 1)" in v for v in rep.violations)
    assert any("count 3 > 2" in v for v in rep.violations)
    rep = validate_tiling(g, [Tile(0, 0, 0, 1)], None, 3)
    assert any("gap at (1, 0)" in v for v in rep.violations)
    rep = validate_tiling(g, [Tile(0, 0, 1, 1)], None, 3)
    assert any("weight 6 > 3" in v for v in rep.violations)


def test_exact_decide_examples():
    assert exact_decide([[3]], 1, 3) is not None
    t = exact_decide([[1, 2], [2, 1]], 2, 3)
    assert sorted(t.tiles) == [Tile(0, 0, 0, 1), Tile(1, 0, 1, 1)]
    assert exact_decide([[3, 3], [3, 3]], 3, 3) is None


def test_exact_optimize_examples():
    assert exact_optimize([[1, 1], [1, 1]], 2)[0] == 2
    assert exact_optimize([[1, 1], [1, 1]], 1)[0] == 4
    assert exact_optimize([[1, 2], [2, 3]], 3)[0] == 3
    with pytest.raises(InfeasibleBudget):
        exact_optimize([[1]], 0)
    with pytest.raises(ScaleExceeded):
        exact_optimize([[1] * 9] * 9, 3)


def test_node_limit(monkeypatch):
    monkeypatch.setenv("RTILE_SEARCH_LIMIT", "5")
    with pytest.raises(ScaleExceeded):
        exact_decide([[1] * 6 for _ in range(6)], 12, 3)


def test_structured_preconditions():
    with pytest.raises(PreconditionViolated):
        structured_decide([[4]], 1, 3)
    with pytest.raises(PreconditionViolated):
        structured_decide([[1]], 1, 4)


@settings(max_examples=120, deadline=None)
@given(grids, st.integers(1, 16))
def test_oracles_agree(g, p):
    a = exact_decide(g, p, 3)
    b = structured_decide(g, p, 3)
    assert (a is None) == (b is None)
    for t in (a, b):
        if t is not None:
            assert validate_tiling(g, t, p, 3).ok


@settings(max_examples=60, deadline=None)
@given(grids)
def test_threes_are_singletons(g):
    t = structured_min_tiles(g)
    for tile in t:
        cells = list(tile.cells())
        if any(g[r][c] == 3 for r, c in cells):
            assert len(cells) == 1


def _chain_grid(rng, h, w):
    return [[rng.choice([1, 2, 3, 3, 3]) for _ in range(w)] for _ in range(h)]


@pytest.mark.parametrize("seed", range(40))
def test_chain_contraction_is_exact(seed):
    rng = random.Random(seed)
    g = _chain_grid(rng, rng.randint(3, 9), rng.randint(3, 9))
    fast = structured_min_tiles(g)
    plain = structured_min_tiles(g, contract=False)
    assert len(fast) == len(plain)
    assert validate_tiling(g, fast, None, 3).ok


@settings(max_examples=40, deadline=None)
@given(grids.filter(lambda g: len(g) * len(g[0]) <= 9))
def test_optimize_monotone(g):
    cells = len(g) * len(g[0])
    prev = None
    for p in range(1, cells + 1):
        w, t = exact_optimize(g, p)
        assert validate_tiling(g, t, p, w).ok
        if prev is not None:
            assert w <= prev
        prev = w
    assert prev == max(max(r) for r in g)


def test_greedy_examples():
    t = approx_greedy([[1] * 4 for _ in range(4)], 4)
    assert max_weight([[1] * 4] * 4, t) == 4 and len(t) <= 4
    g = [[1, 2], [2, 1]]
    assert max_weight(g, approx_greedy(g, 2)) == 3
    assert max_weight(g, approx_greedy(g, 4)) == 2
    with pytest.raises(InfeasibleBudget):
        approx_greedy(g, 0)


@settings(max_examples=40, deadline=None)
@given(grids, st.integers(1, 16))
def test_greedy_never_beats_optimum(g, p):
    t = approx_greedy(g, p)
    assert validate_tiling(g, t, p).ok
    if len(g) * len(g[0]) <= 12:
        assert max_weight(g, t) >= exact_optimize(g, p)[0]
