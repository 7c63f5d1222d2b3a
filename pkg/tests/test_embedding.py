import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtile.embedding import check_embedding, embed_grid, segments_cross
from rtile.errors import NotPlanar
from rtile.formula import incidence_graph, gen_planar_3sat


def test_triangle():
    e = embed_grid(nx.cycle_graph(3))
    assert check_embedding(e) == []
    assert len(set(e.coordinates.values())) == 3


@pytest.mark.parametrize("g", [nx.star_graph(3), nx.path_graph(4), nx.wheel_graph(6),
                               nx.grid_2d_graph(3, 3), nx.octahedral_graph()])
def test_small_graphs(g):
    assert check_embedding(embed_grid(g)) == []


def test_nonplanar():
    with pytest.raises(NotPlanar):
        embed_grid(nx.complete_graph(5))


def test_segment_cross_cases():
    assert segments_cross(((0, 0), (2, 2)), ((0, 2), (2, 0)))
    assert not segments_cross(((0, 0), (1, 0)), ((0, 0), (0, 1)))
    assert segments_cross(((0, 0), (2, 0)), ((0, 0), (1, 0)))  # collinear overlap
    assert segments_cross(((0, 0), (2, 0)), ((1, 0), (1, 3)))  # endpoint touching interior
    assert not segments_cross(((0, 0), (1, 1)), ((2, 2), (3, 3)))


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 18), st.integers(0, 10_000))
def test_random_planar_graphs(n, seed):
    rng = random.Random(seed)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    edges = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rng.shuffle(edges)
    for a, b in edges:
        g.add_edge(a, b)
        if not nx.check_planarity(g)[0]:
            g.remove_edge(a, b)
    e = embed_grid(g)
    assert check_embedding(e) == []
    assert e.extent <= n - 2


def test_incidence_graph_embedding():
    f = gen_planar_3sat(6, 4, 3)
    e = embed_grid(incidence_graph(f))
    assert check_embedding(e) == []
