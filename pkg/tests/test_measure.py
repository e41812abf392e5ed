import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bdlimits as bd
from bdlimits.chain import gibbs_exponent


def test_two_state_generator():
    spec = bd.ChainSpec(bd.single_vertex(), [[0.0]], [[0.0]], l=0, r=1)
    q = bd.build_generator(spec).toarray()
    assert np.array_equal(q, [[-1.0, 1.0], [1.0, -1.0]])


def test_generator_rows_sum_to_zero():
    g = bd.cycle_graph(3)
    spec = bd.ChainSpec(
        g, bd.alpha_beta_matrix(g, -0.5, 0.2), bd.alpha_beta_matrix(g, 0.1, 0.0), l=1, r=2
    )
    q = bd.build_generator(spec)
    assert np.abs(np.asarray(q.sum(axis=1)).ravel()).max() < 1e-12


def test_two_path_generator_structure():
    g = bd.path_graph(2)
    spec = bd.ChainSpec(g, np.zeros((2, 2)), np.zeros((2, 2)), l=0, r=1)
    q = bd.build_generator(spec).toarray()
    assert q.shape == (4, 4)
    # with l=0, r=1 each vertex has exactly one allowed move per state
    off = q - np.diag(np.diag(q))
    assert np.all((off > 0).sum(axis=1) == 2)


def test_state_cap():
    g = bd.path_graph(3)
    spec = bd.ChainSpec(g, np.zeros((3, 3)), np.zeros((3, 3)), l=10, r=10)
    with pytest.raises(bd.StateSpaceTooLargeError):
        bd.build_generator(spec, cap=100)
    with pytest.raises(bd.StateSpaceTooLargeError):
        bd.gibbs_measure(spec, cap=100)


def test_state_enumeration_order():
    g = bd.path_graph(2)
    spec = bd.ChainSpec(g, np.zeros((2, 2)), np.zeros((2, 2)), l=1, r=1)
    states = bd.enumerate_states(spec)
    # vertex 0 is the fastest digit, value -l comes first
    assert np.array_equal(states[0], [-1, -1])
    assert np.array_equal(states[1], [0, -1])
    assert np.array_equal(states[2], [1, -1])
    assert np.array_equal(states[3], [-1, 0])
    for idx in range(states.shape[0]):
        assert bd.state_index(spec, states[idx]) == idx


def test_two_state_stationary():
    spec = bd.ChainSpec(bd.single_vertex(), [[0.0]], [[0.0]], l=0, r=1)
    assert np.allclose(bd.stationary_solve(spec), [0.5, 0.5], atol=1e-12)
    assert np.allclose(bd.gibbs_measure(spec).probabilities, [0.5, 0.5], atol=1e-12)


def test_three_state_geometric_weights():
    spec = bd.ChainSpec(bd.single_vertex(), [[-np.log(2.0)]], [[0.0]], l=0, r=2)
    expected = np.array([0.4, 0.4, 0.2])
    assert np.allclose(bd.stationary_solve(spec), expected, atol=1e-12)
    assert np.allclose(bd.gibbs_measure(spec).probabilities, expected, atol=1e-12)


def test_single_vertex_product_formula_oracle():
    # birth-death chains have the classic product-form stationary law:
    # w(k+1)/w(k) = birth(k) / death(k+1)
    rng = np.random.default_rng(8)
    for _ in range(5):
        b, d = rng.uniform(-0.8, 0.8, size=2)
        l, r = int(rng.integers(0, 3)), int(rng.integers(1, 3))
        spec = bd.ChainSpec(bd.single_vertex(), [[b]], [[d]], l=l, r=r)
        values = spec.spin_values()
        w = [1.0]
        for k in values[:-1]:
            w.append(w[-1] * np.exp(b * k) / np.exp(d * (k + 1)))
        w = np.array(w) / np.sum(w)
        assert np.abs(bd.stationary_solve(spec) - w).max() < 1e-12


def test_pair_weights_on_two_path():
    beta = 0.9
    g = bd.path_graph(2)
    spec = bd.ChainSpec(g, [[0.0, beta], [beta, 0.0]], np.zeros((2, 2)), l=0, r=1)
    dist = bd.gibbs_measure(spec)
    w = np.array([1.0, 1.0, 1.0, np.exp(beta)])
    assert np.allclose(dist.probabilities, w / w.sum(), atol=1e-14)
    assert dist.log_partition == pytest.approx(np.log(w.sum()))
    assert np.abs(dist.probabilities - bd.stationary_solve(spec)).max() < 1e-12


def test_single_vertex_two_level_measure_is_uniform_for_any_alpha():
    for alpha in (-2.0, 0.0, 1.3):
        spec = bd.ChainSpec(bd.single_vertex(), [[alpha]], [[0.0]], l=0, r=1)
        assert np.allclose(bd.gibbs_measure(spec).probabilities, [0.5, 0.5], atol=1e-14)


def test_asymmetric_net_matrix_refused():
    g = bd.path_graph(2)
    ab = np.array([[0.0, 0.4], [0.1, 0.0]])
    spec = bd.ChainSpec(g, ab, np.zeros((2, 2)), l=0, r=1)
    with pytest.raises(bd.AsymmetricMatrixError):
        bd.gibbs_measure(spec)
    with pytest.raises(bd.AsymmetricMatrixError):
        bd.check_detailed_balance(spec)


def _random_symmetric_spec(seed: int, zero_death_diagonal: bool) -> bd.ChainSpec:
    rng = np.random.default_rng(seed)
    graph = [bd.single_vertex(), bd.path_graph(2), bd.path_graph(3), bd.cycle_graph(3)][
        seed % 4
    ]
    n = graph.num_vertices
    pattern = graph.adjacency_matrix() + np.eye(n)
    sym = rng.uniform(-0.75, 0.75, size=(n, n))
    sym = 0.5 * (sym + sym.T) * pattern
    split_pattern = graph.adjacency_matrix() if zero_death_diagonal else pattern
    split = rng.uniform(-0.5, 0.5, size=(n, n)) * split_pattern
    l = int(rng.integers(0, 3))
    r = int(rng.integers(1, 5 - l))
    return bd.ChainSpec(graph, sym + split, split, l=l, r=r)


def test_detailed_balance_residual_tiny_for_symmetric_specs():
    for seed in range(8):
        spec = _random_symmetric_spec(seed, zero_death_diagonal=seed % 2 == 0)
        assert bd.check_detailed_balance(spec) < 1e-12


def test_uniform_measure_when_birth_equals_death():
    g = bd.path_graph(2)
    m = np.array([[0.3, -0.2], [-0.2, 0.3]])
    spec = bd.ChainSpec(g, m, m, l=1, r=1)
    dist = bd.gibbs_measure(spec)
    assert np.allclose(dist.probabilities, 1.0 / 9.0, atol=1e-14)
    assert bd.check_detailed_balance(spec) < 1e-13


def test_gibbs_matches_generator_kernel_for_diagonal_free_death():
    for seed in range(6):
        spec = _random_symmetric_spec(seed, zero_death_diagonal=True)
        diff = np.abs(
            bd.gibbs_measure(spec).probabilities - bd.stationary_solve(spec)
        ).max()
        assert diff < 1e-11


def test_death_diagonal_tilts_the_stationary_law():
    # with a death self-term delta the chain's stationary law is the
    # closed-form measure reweighted by exp(-(delta, xi))
    for seed in range(6):
        spec = _random_symmetric_spec(seed, zero_death_diagonal=False)
        states = bd.enumerate_states(spec)
        delta = np.diag(spec.death_matrix)
        energy = gibbs_exponent(spec, states) - states @ delta
        tilted = np.exp(energy - energy.max())
        tilted /= tilted.sum()
        assert np.abs(tilted - bd.stationary_solve(spec)).max() < 1e-12


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=30, deadline=None)
def test_pairwise_sum_equals_vector_form(seed):
    spec = _random_symmetric_spec(seed, zero_death_diagonal=False)
    a = spec.drift_matrix
    states = bd.enumerate_states(spec)
    # explicit sum over vertices and unordered adjacent pairs
    pairwise = 0.5 * (states * (states - 1)) @ np.diag(a)
    for x, y in spec.graph.edges:
        pairwise = pairwise + a[x, y] * states[:, x] * states[:, y]
    assert np.abs(pairwise - gibbs_exponent(spec, states)).max() < 1e-10
