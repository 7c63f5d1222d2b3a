import itertools
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtile.errors import (FootprintTooLarge, InvalidFill, NoPorts, ParityUnresolvable,
                          StraightRunUnavailable, TooLong)
from rtile.gadgetry import (LEFT, UP, GadgetPattern, GadgetPort, LoopFill, builtin_gadget,
                            certify_gadget, check_fill, complete_loop_tiling,
                            count_min_loop_tilings, cover_remainder, enumerate_min_loop_tilings,
                            fill_loop, min_local_tiles, plan_counters, plan_segments,
                            synth_gadget)
from rtile.layout import boundary_ring


def ring(h, w, r0=0, c0=0):
    return boundary_ring({(r0 + r, c0 + c) for r in range(h) for c in range(w)})


def test_builtin_gadget_certifies():
    g = builtin_gadget()
    rep = certify_gadget(g)
    assert rep.passed
    assert rep.minima[frozenset()] == 3
    assert all(rep.minima[frozenset(s)] == 2
               for n in (1, 2, 3) for s in itertools.combinations(range(3), n))
    assert [g.cells[p.cell] for p in g.ports] == [1, 1, 1]


def test_certificate_text():
    text = certify_gadget(builtin_gadget()).text()
    assert text.splitlines()[1] == "joined {}: min tiles 3 (required 3)"
    assert text.splitlines()[-1] == "PASS"


def test_synthesis_matches_builtin():
    assert synth_gadget(1) is None
    assert synth_gadget(12) == builtin_gadget()
    assert synth_gadget(8) == synth_gadget(8)
    with pytest.raises(FootprintTooLarge):
        synth_gadget(13)


def test_certifier_rejects_bad_patterns():
    lone = GadgetPattern((((0, 0), 3),), ())
    assert not certify_gadget(lone).passed
    big = GadgetPattern(tuple(((0, c), 1) for c in range(17)), ())
    with pytest.raises(FootprintTooLarge):
        certify_gadget(big)
    # inward 1 next to a port: the older, unsound variant of the builtin shape
    leaky = GadgetPattern(
        (((0, 0), 1), ((0, 1), 2), ((0, 2), 1), ((1, 2), 1), ((1, 3), 1)),
        builtin_gadget().ports)
    rep = certify_gadget(leaky)
    assert not rep.passed and rep.problems


def test_cover_remainder_sizes():
    g = builtin_gadget()
    assert len(cover_remainder(g, [])) == 3
    for i in range(3):
        groups = cover_remainder(g, [i])
        assert len(groups) == 2
        covered = sorted(c for grp in groups for c in grp)
        assert covered == sorted(c for c in g.cells if c != g.ports[i].cell)


def test_transformed_flip_keeps_contract():
    g = builtin_gadget().transformed((10, 5), flip_rows=True)
    assert certify_gadget(g).passed
    assert g.port("U").direction == (1, 0)


def test_min_local_tiles_small():
    assert min_local_tiles({(0, 0): 1, (0, 1): 2}) == 1
    assert min_local_tiles({(0, 0): 2, (0, 1): 2}) == 2


# -- segment plans ----------------------------------------------------------

def test_changer_rule():
    def plan(length, a, b):
        return plan_segments(length + 10, [0, length], [a, b])[0]

    assert plan(10, False, True).place_changer      # even, differ
    assert plan(11, True, True).place_changer       # odd, equal
    assert not plan(10, True, True).place_changer   # even, equal
    assert not plan(11, False, True).place_changer  # odd, differ


def test_no_ports():
    with pytest.raises(NoPorts):
        plan_segments(12, [], [])


@given(st.integers(2, 6).flatmap(lambda k: st.tuples(
    st.lists(st.integers(0, 199), min_size=k, max_size=k, unique=True),
    st.lists(st.booleans(), min_size=k, max_size=k))), st.integers(0, 1))
def test_changer_count_identity(data, pad):
    starts, negs = data
    n = 200 + pad * 2
    plans = plan_segments(n, sorted(starts), negs)
    c = plan_counters(plans)
    assert sum(p.place_changer for p in plans) == c.changers
    assert c.changers % 2 == 0


# -- fills ------------------------------------------------------------------

def _fill(h, w, starts, negs):
    cells = ring(h, w)
    return fill_loop(cells, plan_segments(len(cells), starts, negs))


def test_fill_blocks():
    fl = _fill(7, 9, [1, 13], [False, True])
    vals = fl.values
    for s in fl.port_starts:
        assert [vals[(s + j) % len(vals)] for j in range(-1, 3)] == [2, 1, 1, 2]
    for s in fl.phase_changers:
        assert [vals[(s + j) % len(vals)] for j in range(-1, 5)] == [2, 1, 1, 1, 1, 2]
    assert check_fill(fl).ok
    assert fl.changer_count == 2


def test_fill_alternates_elsewhere():
    fl = _fill(7, 9, [1, 10], [False, True])
    assert fl.changer_count == 0 and not fl.fixers
    special = {s % len(fl) for s in fl.port_starts}
    for i, v in enumerate(fl.values):
        nxt = fl.values[(i + 1) % len(fl)]
        assert v != nxt or i in special


def test_fill_parity_and_straightness_errors():
    with pytest.raises(ParityUnresolvable):
        _fill(3, 3, [0, 4], [False, False])  # blocks touch
    stairs = boundary_ring({(i + dr, i + dc) for i in range(6) for dr in range(3) for dc in range(3)})
    with pytest.raises(StraightRunUnavailable):  # no four collinear consecutive cells anywhere
        fill_loop(stairs, plan_segments(len(stairs), [0, 8], [False, True]))
    with pytest.raises(ParityUnresolvable):
        fill_loop([(0, 0), (0, 1), (0, 2)], plan_segments(3, [0], [False]))


def test_check_fill_detects_adjacent_twos():
    cells = ring(3, 3)
    bad = LoopFill(tuple(cells), (2, 2, 1, 2, 1, 2, 1, 1))
    assert not check_fill(bad).ok


# -- loop tilings -----------------------------------------------------------

def test_plain_cycle_has_two_tilings():
    cells = ring(3, 3)
    res = enumerate_min_loop_tilings(LoopFill(tuple(cells), (1, 2) * 4))
    assert res.minimum == 4 and len(res.tilings) == 2
    assert all(s.a2 == 4 and s.a1 == s.a3 == 0 for s in res.stats)


def test_two_changers():
    fl = _fill(7, 9, [1, 13], [False, True])
    res = enumerate_min_loop_tilings(fl)
    assert res.minimum == (len(fl) - 2) // 2
    assert len(res.tilings) == 2
    for s in res.stats:
        assert s.a1 + 2 * s.a2 + 3 * s.a3 == len(fl)
        assert s.a3 <= fl.changer_count


def test_enumeration_errors():
    with pytest.raises(InvalidFill):
        enumerate_min_loop_tilings(LoopFill(tuple(ring(3, 3)), (2, 2, 1, 2, 1, 2, 1, 1)))
    with pytest.raises(TooLong):
        enumerate_min_loop_tilings(_fill(12, 12, [1, 20], [False, False]))


@st.composite
def ring_fills(draw, max_side=10):
    h = draw(st.integers(5, max_side))
    w = draw(st.integers(5, max_side))
    cells = ring(h, w)
    n = len(cells)
    k = draw(st.integers(1, 4))
    starts = sorted(draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True)))
    negs = draw(st.lists(st.booleans(), min_size=k, max_size=k))
    try:
        return fill_loop(cells, plan_segments(n, starts, negs)), negs
    except (ParityUnresolvable, StraightRunUnavailable):
        return None


@settings(max_examples=150, deadline=None)
@given(ring_fills())
def test_loop_modes_property(sample):
    if sample is None:
        return
    fl, negs = sample
    assert check_fill(fl).ok
    want = (len(fl) - fl.changer_count) // 2
    assert count_min_loop_tilings(fl) == (want, 2)
    if len(fl) <= 40:
        res = enumerate_min_loop_tilings(fl)
        assert res.minimum == want and len(res.tilings) == 2
    # good-phase propagation: ports with equal negation are good together
    n = len(fl)
    s0 = fl.port_starts[0]
    tiling = complete_loop_tiling(fl, (s0, s0 + 1))
    assert len(tiling) == want
    arcs = set(tiling)
    for s, neg in zip(fl.port_starts, negs):
        good = (s % n, (s + 1) % n) in arcs
        assert good == (neg == negs[0])
    other = complete_loop_tiling(fl, (s0 - 1, s0))
    assert len(other) == want and not set(other) & arcs
