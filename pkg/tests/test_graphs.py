import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bdlimits as bd
from bdlimits.graphs import edges_from_adjacency


def test_two_path_is_smallest_connected_graph():
    g = bd.build_graph(2, [(0, 1)])
    assert g.num_vertices == 2
    assert g.edges == {(0, 1)}


def test_star_construction():
    g = bd.build_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    assert g.degree(0) == 4
    assert [g.degree(x) for x in range(1, 5)] == [1, 1, 1, 1]
    assert g == bd.star_graph(4)


def test_isolated_vertex_rejected():
    with pytest.raises(bd.DisconnectedGraphError):
        bd.build_graph(3, [(0, 1)])


@pytest.mark.parametrize(
    "edges",
    [[(0, 0)], [(0, 3)], [(0, 1), (1, 0)]],
    ids=["self-loop", "out-of-range", "duplicate"],
)
def test_bad_edges_rejected(edges):
    with pytest.raises(bd.InvalidEdgeError):
        bd.build_graph(3, edges)


def test_adjacency_of_two_path():
    assert np.array_equal(
        bd.incidence_matrix(bd.path_graph(2)), np.array([[0.0, 1.0], [1.0, 0.0]])
    )


def test_adjacency_of_triangle():
    adj = bd.incidence_matrix(bd.cycle_graph(3))
    assert np.array_equal(adj, np.ones((3, 3)) - np.eye(3))


def test_adjacency_of_three_path():
    g = bd.build_graph(3, [(0, 1), (0, 2)])  # star m=2, center 0
    adj = g.adjacency_matrix()
    assert adj[0, 1] == adj[1, 0] == 1
    assert adj[0, 2] == adj[2, 0] == 1
    assert adj[1, 2] == adj[2, 1] == 0


def test_validate_interaction_accepts_adjacent_pattern():
    g = bd.path_graph(2)
    m = bd.validate_interaction(g, [[-1.0, 0.5], [0.5, -1.0]])
    assert m.shape == (2, 2)
    assert not m.flags.writeable


def test_validate_interaction_names_offending_pair():
    g = bd.path_graph(3)  # 0-1-2, so 0 and 2 are not adjacent
    bad = np.zeros((3, 3))
    bad[0, 2] = 0.1
    with pytest.raises(bd.PatternViolationError) as exc:
        bd.validate_interaction(g, bad)
    assert (exc.value.x, exc.value.y) == (0, 2)


def test_validate_interaction_zero_matrix_and_shape():
    g = bd.cycle_graph(3)
    bd.validate_interaction(g, np.zeros((3, 3)))
    with pytest.raises(bd.DimensionMismatchError):
        bd.validate_interaction(g, np.zeros((2, 2)))


def test_degrees():
    star = bd.star_graph(4)
    assert bd.degree(star, 0) == 4
    assert bd.degree(star, 3) == 1
    assert all(bd.degree(bd.cycle_graph(3), x) == 2 for x in range(3))
    with pytest.raises(IndexError):
        bd.degree(star, 9)


def _random_connected_graph(rng: np.random.Generator, n: int) -> bd.Graph:
    # random spanning tree plus a few extra edges
    edges = set()
    for v in range(1, n):
        edges.add((int(rng.integers(0, v)), v))
    for _ in range(int(rng.integers(0, n))):
        u, v = rng.choice(n, size=2, replace=False)
        edges.add((min(u, v), max(u, v)))
    return bd.build_graph(n, edges)


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_adjacency_symmetric_zero_diagonal_row_sums(n, seed):
    g = _random_connected_graph(np.random.default_rng(seed), n)
    adj = g.adjacency_matrix()
    assert np.array_equal(adj, adj.T)
    assert np.all(np.diag(adj) == 0)
    assert np.array_equal(adj.sum(axis=1), g.degrees)


@given(st.integers(min_value=2, max_value=10), st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_edge_set_round_trip(n, seed):
    g = _random_connected_graph(np.random.default_rng(seed), n)
    assert edges_from_adjacency(g.adjacency_matrix()) == set(g.edges)


@given(
    st.integers(min_value=2, max_value=8),
    st.integers(min_value=0, max_value=2**32 - 1),
    st.floats(min_value=-5, max_value=5),
    st.floats(min_value=-5, max_value=5),
)
@settings(max_examples=40, deadline=None)
def test_linear_combination_is_interaction(n, seed, w1, w2):
    rng = np.random.default_rng(seed)
    g = _random_connected_graph(rng, n)
    pattern = g.adjacency_matrix() + np.eye(n)
    m1 = rng.normal(size=(n, n)) * pattern
    m2 = rng.normal(size=(n, n)) * pattern
    combo = w1 * bd.validate_interaction(g, m1) + w2 * bd.validate_interaction(g, m2)
    bd.validate_interaction(g, combo)  # must not raise


def test_graph_text_round_trip(tmp_path):
    g = bd.star_graph(3)
    text = bd.graph_to_text(g)
    assert bd.parse_graph_text(text) == g
    path = tmp_path / "star.g"
    path.write_text(text)
    assert bd.load_graph(path) == g


def test_graph_text_errors():
    with pytest.raises(bd.InvalidEdgeError):
        bd.parse_graph_text("e 0 1\nn 2\n")
    with pytest.raises(bd.InvalidEdgeError):
        bd.parse_graph_text("n 2\nwhat 0 1\n")
    with pytest.raises(bd.InvalidEdgeError):
        bd.parse_graph_text("# only a comment\n")


def test_alpha_beta_matrix():
    g = bd.cycle_graph(3)
    m = bd.alpha_beta_matrix(g, -2.0, 0.5)
    assert np.array_equal(np.diag(m), [-2.0, -2.0, -2.0])
    assert m[0, 1] == 0.5
    bd.validate_interaction(g, m)
