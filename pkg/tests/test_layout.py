import itertools

import pytest

from rtile.embedding import crossing_pairs, embed_grid
from rtile.errors import NotPlanar
from rtile.formula import Cnf, gen_planar_3sat, incidence_graph
from rtile.layout import Layout, boundary_ring, route_layout, validate_layout


def _cheb(a, b):
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def test_single_clause():
    f = Cnf.from_lists(3, [[1, -2, 3]])
    lay = route_layout(f)
    assert validate_layout(lay, f).ok
    assert sorted(lay.loops) == [1, 2, 3]
    for a, b in itertools.combinations(lay.loops.values(), 2):
        assert min(_cheb(x, y) for x in a for y in b) >= 2
    assert sorted(lay.ports) == [(1, 0), (2, 0), (3, 0)]
    roles = sorted(p.role for p in lay.ports.values())
    assert roles == ["L", "R", "U"]


def test_shared_variable_visits_both_ports():
    f = Cnf.from_lists(5, [[1, 2, 3], [-1, 4, 5]])
    lay = route_layout(f)
    assert validate_layout(lay, f).ok
    assert [p.clause for p in lay.loop_ports(1)] in ([0, 1], [1, 0])


def test_empty_formula():
    lay = route_layout(Cnf(3))
    assert lay.grid_side == 1 and not lay.loops and lay.degenerate == [1, 2, 3]


def test_degenerate_variable_reported():
    f = Cnf.from_lists(4, [[1, 2, 3]])
    lay = route_layout(f)
    assert lay.degenerate == [4] and 4 not in lay.loops


def test_nonplanar_formula():
    k33 = Cnf.from_lists(6, [[1, 4, 2], [1, 5, 2], [1, 6, 2], [3, 4, 5], [3, 4, 6], [3, 5, 6]])
    with pytest.raises(NotPlanar):
        route_layout(k33)


@pytest.mark.parametrize("seed", range(6))
def test_random_layouts(seed):
    f = gen_planar_3sat(7, 5, seed)
    lay = route_layout(f)
    assert validate_layout(lay, f).ok
    for loop in lay.loops.values():
        assert len(loop) % 2 == 0
    for j in range(f.k):
        assert len({v for (v, jj) in lay.ports if jj == j}) == 3


@pytest.mark.parametrize("scale", [1, 7, 13])
def test_scaled_embedding_stays_planar(scale):
    f = gen_planar_3sat(6, 4, 2)
    e = embed_grid(incidence_graph(f))
    coords = {v: (x * scale, y * scale) for v, (x, y) in e.coordinates.items()}
    assert crossing_pairs(coords, e.edges) == []


def test_validator_reports_touching_loops():
    a = boundary_ring({(r, c) for r in range(3) for c in range(3)})
    b = boundary_ring({(r, c) for r in range(3) for c in range(3, 6)})
    rep = validate_layout(Layout(10, loops={1: a, 2: b}))
    assert any("loops touch" in v for v in rep.violations)


def test_validator_reports_self_touching():
    loop = [(0, 0), (0, 1), (0, 2), (1, 2), (1, 1), (1, 0)]
    rep = validate_layout(Layout(5, loops={1: loop}))
    assert any("self-touching" in v for v in rep.violations)


def test_validator_accepts_single_loop():
    loop = boundary_ring({(r, c) for r in range(1, 4) for c in range(1, 5)})
    assert validate_layout(Layout(6, loops={1: loop})).ok


def test_dump_is_deterministic():
    f = Cnf.from_lists(3, [[1, -2, 3]])
    text = route_layout(f).dump()
    assert text == route_layout(f).dump()
    lines = text.splitlines()
    assert lines[0].startswith("layout side ")
    assert sum(ln.startswith("loop x") for ln in lines) == 3
    assert sum(ln.startswith("gadget c") for ln in lines) == 1
    assert sum(ln.startswith("port x") for ln in lines) == 3
