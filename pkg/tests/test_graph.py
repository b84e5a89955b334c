import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
import swarmbench as sb
from conftest import make_rand_tsp
from swarmbench.core import (
    ConfigurationError,
    InvalidCandidateError,
    InvalidStateError,
    NumericError,
    RunConfig,
)
from swarmbench.graph import (
    AcoParams,
    Drop,
    IwdParams,
    aco_construct_tour,
    aco_pheromone_update,
    aco_transition_probs,
    iwd_edge_probs,
    iwd_global_update,
    iwd_move,
    tour_length,
)
from swarmbench.problems import builtin_problem

SQUARE = np.array(oracles.euclidean_matrix(oracles.unit_square_coords()))


# ---------------------------------------------------------------------------
# tour length

def test_tour_length_unit_square():
    assert tour_length(SQUARE, [0, 1, 2, 3]) == 4.0


def test_tour_length_zero_matrix():
    dist = np.zeros((5, 5))
    assert tour_length(dist, [3, 1, 4, 0, 2]) == 0.0


def test_tour_length_reversal_invariant():
    prob = make_rand_tsp(11, 7)
    tour = [2, 5, 0, 3, 6, 1, 4]
    assert tour_length(prob.space.dist, tour) == pytest.approx(
        tour_length(prob.space.dist, tour[::-1]), abs=1e-12)


@given(st.integers(min_value=0, max_value=6), st.randoms(use_true_random=False))
def test_tour_length_rotation_invariant(shift, rng):
    prob = make_rand_tsp(17, 7)
    tour = list(range(7))
    rng.shuffle(tour)
    rotated = tour[shift:] + tour[:shift]
    assert tour_length(prob.space.dist, tour) == pytest.approx(
        tour_length(prob.space.dist, rotated), abs=1e-12)


def test_tour_length_rejects_non_permutation():
    with pytest.raises(InvalidCandidateError):
        tour_length(SQUARE, [0, 1, 2, 0])


# ---------------------------------------------------------------------------
# ACO transition probabilities

def test_aco_probs_uniform_when_symmetric():
    tau = np.full((4, 4), 0.3)
    dist = np.full((4, 4), 2.0)
    np.fill_diagonal(dist, 0.0)
    probs = aco_transition_probs(0, [0], tau, dist, AcoParams())
    assert probs[0] == 0.0
    assert np.allclose(probs[1:], 1.0 / 3.0, atol=1e-12)


def test_aco_probs_pheromone_only_matches_oracle():
    tau = np.array([[0.0, 2.0, 1.0],
                    [2.0, 0.0, 1.0],
                    [1.0, 1.0, 0.0]])
    dist = np.array([[0.0, 1.0, 2.0],
                     [1.0, 0.0, 1.0],
                     [2.0, 1.0, 0.0]])
    params = AcoParams(beta=0.0)
    probs = aco_transition_probs(0, [0], tau, dist, params)
    expected = oracles.aco_probs([2.0, 1.0], [1.0, 2.0], 1.0, 0.0)
    assert abs(probs[1] - expected[0]) <= 1e-12
    assert abs(probs[2] - expected[1]) <= 1e-12
    assert probs[1] == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_aco_probs_single_unvisited():
    tau = np.full((3, 3), 0.1)
    probs = aco_transition_probs(0, [0, 1], tau, SQUARE[:3, :3], AcoParams())
    assert probs.tolist() == [0.0, 0.0, 1.0]


def test_aco_probs_requires_unvisited():
    tau = np.full((3, 3), 0.1)
    with pytest.raises(InvalidStateError):
        aco_transition_probs(0, [0, 1, 2], tau, SQUARE[:3, :3], AcoParams())


def test_aco_probs_zero_distance_capped():
    tau = np.full((3, 3), 0.1)
    dist = np.zeros((3, 3))
    probs = aco_transition_probs(0, [0], tau, dist, AcoParams())
    assert np.isfinite(probs).all()
    assert abs(probs.sum() - 1.0) <= 1e-12


# ---------------------------------------------------------------------------
# ACO construction and pheromone update

def test_aco_construct_tour_is_permutation():
    prob = make_rand_tsp(23, 8)
    tau = np.full((8, 8), 0.1)
    stream = sb.make_stream(5)
    for start in range(8):
        tour = aco_construct_tour(start, tau, prob.space.dist,
                                  AcoParams(), stream)
        assert tour[0] == start
        assert sorted(tour.tolist()) == list(range(8))


def test_aco_construct_tour_deterministic_replay():
    prob = make_rand_tsp(23, 8)
    tau = np.full((8, 8), 0.1)
    a = aco_construct_tour(2, tau, prob.space.dist, AcoParams(),
                           sb.make_stream(9))
    b = aco_construct_tour(2, tau, prob.space.dist, AcoParams(),
                           sb.make_stream(9))
    assert a.tolist() == b.tolist()


def test_aco_concentrated_pheromone_goes_greedy():
    # tau hugely favors the ring 0-1-2-3-4-0; with beta=0 the construction
    # should follow it almost surely
    n = 5
    tau = np.full((n, n), 1e-9)
    for k in range(n):
        a, b = k, (k + 1) % n
        tau[a, b] = tau[b, a] = 1e3
    dist = np.full((n, n), 1.0)
    np.fill_diagonal(dist, 0.0)
    params = AcoParams(beta=0.0)
    stream = sb.make_stream(123)
    follows = 0
    for _ in range(1000):
        tour = aco_construct_tour(0, tau, dist, params, stream)
        if tour.tolist() in ([0, 1, 2, 3, 4], [0, 4, 3, 2, 1]):
            follows += 1
    assert follows >= 990


def test_aco_pheromone_pure_evaporation_and_floor():
    params = AcoParams(rho=0.5, tau_min=1e-3)
    tau = np.full((3, 3), 0.002)
    out = aco_pheromone_update(tau, np.empty((0, 3), dtype=np.int64),
                               np.empty(0), params)
    assert np.all(out[~np.eye(3, dtype=bool)] == 1e-3)  # floored
    assert np.all(tau == 0.002)  # input untouched


def test_aco_pheromone_single_ant_matches_oracle():
    params = AcoParams()
    tau = np.full((4, 4), params.tau0)
    tour = np.array([0, 1, 2, 3], dtype=np.int64)
    length = 4.0
    out = aco_pheromone_update(tau, tour, [length], params)
    expected = oracles.pheromone_after_deposit(params.tau0, params.rho,
                                               params.q, length)
    assert abs(out[0, 1] - expected) <= 1e-12
    assert out[0, 1] == out[1, 0]
    # edge not on the tour: evaporation only
    assert out[0, 2] == (1.0 - params.rho) * params.tau0


def test_aco_pheromone_rejects_bad_length():
    params = AcoParams()
    tau = np.full((4, 4), params.tau0)
    tour = np.array([0, 1, 2, 3], dtype=np.int64)
    with pytest.raises(NumericError):
        aco_pheromone_update(tau, tour, [0.0], params)


def test_aco_run_on_zero_matrix_raises_numeric_error():
    # an all-zero matrix passes validation but every tour has length 0,
    # which the deposit rule cannot handle
    prob = sb.Problem("degenerate", sb.TourSpace(np.zeros((4, 4))))
    with pytest.raises(NumericError):
        sb.run(AcoParams(), prob, RunConfig(seed=1, iterations=3, population=4))


def test_aco_pheromone_never_below_floor_during_run(square4):
    params = AcoParams()
    cfg = RunConfig(seed=3, iterations=40, population=4)
    trace = sb.run(params, square4, cfg)
    assert trace.records[-1].best == 4.0


# ---------------------------------------------------------------------------
# IWD probabilities and moves

def test_iwd_probs_equal_soils_uniform():
    soil = np.full((4, 4), 10.0)
    probs = iwd_edge_probs(0, [0], soil, IwdParams())
    assert np.allclose(probs[1:], 1.0 / 3.0, atol=1e-12)


def test_iwd_probs_match_oracle():
    soil = np.zeros((3, 3))
    soil[0, 1] = soil[1, 0] = 0.0
    soil[0, 2] = soil[2, 0] = 1.0
    probs = iwd_edge_probs(0, [0], soil, IwdParams())
    expected = oracles.iwd_probs([0.0, 1.0], 0.0001)
    assert abs(probs[1] - expected[0]) <= 1e-12
    assert abs(probs[2] - expected[1]) <= 1e-12


def test_iwd_probs_negative_minimum_shift():
    stream = sb.make_stream(31)
    for _ in range(50):
        n = 5
        soil = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                v = stream.uniform(-50.0, 50.0)
                soil[i, j] = soil[j, i] = v
        probs = iwd_edge_probs(0, [0], soil, IwdParams())
        candidates = soil[0, 1:]
        assert abs(probs.sum() - 1.0) <= 1e-12
        assert np.all(probs[1:] > 0.0)
        # the least-soiled edge is the most likely
        assert np.argmax(probs[1:]) == np.argmin(candidates)


def test_iwd_probs_requires_unvisited():
    soil = np.full((3, 3), 1.0)
    with pytest.raises(InvalidStateError):
        iwd_edge_probs(0, [0, 1, 2], soil, IwdParams())


def test_iwd_move_velocity_gain_matches_oracle():
    params = IwdParams()
    soil = np.zeros((3, 3))
    dist = np.full((3, 3), 1.0)
    drop = Drop(velocity=200.0)
    moved, _ = iwd_move(drop, (0, 1), soil, dist, params)
    gain = oracles.iwd_velocity_gain(0.0, params.a_v, params.b_v, params.c_v)
    assert gain == 100000.0
    assert abs(moved.velocity - (200.0 + gain)) <= 1e-12 * 1e5
    assert moved.soil > 0.0  # dsoil is always positive


def test_iwd_move_soil_update_matches_oracle():
    # arrange dist so that dsoil lands on 10 (within float error), then the
    # local soil rule must give (1-0.9)*10000 - 0.9*10 = 991
    params = IwdParams()
    soil = np.full((2, 2), 10000.0)
    np.fill_diagonal(soil, 0.0)
    soil[0, 1] = soil[1, 0] = 10000.0
    vel0 = params.initial_velocity
    vel1 = vel0 + params.a_v / (params.b_v + params.c_v * 10000.0 ** 2)
    time_for_10 = math.sqrt((params.a_s / 10.0 - params.b_s) / params.c_s)
    dist = np.zeros((2, 2))
    dist[0, 1] = dist[1, 0] = time_for_10 * vel1
    moved, out = iwd_move(Drop(velocity=vel0), (0, 1), soil, dist, params)
    expected = oracles.iwd_local_soil(10000.0, 10.0, params.rho_n)
    assert abs(out[0, 1] - expected) <= 1e-12
    assert abs(expected - 991.0) <= 1e-10
    assert out[0, 1] == out[1, 0]
    assert abs(moved.soil - 10.0) <= 1e-12


def test_iwd_move_dsoil_positive_property():
    params = IwdParams()
    stream = sb.make_stream(77)
    for _ in range(100):
        soil = np.full((2, 2), stream.uniform(-1e4, 1e4))
        np.fill_diagonal(soil, 0.0)
        dist = np.full((2, 2), stream.uniform(1e-6, 1e3))
        np.fill_diagonal(dist, 0.0)
        moved, _ = iwd_move(Drop(velocity=params.initial_velocity),
                            (0, 1), soil, dist, params)
        assert moved.soil > 0.0


def test_iwd_global_update_examples():
    params = IwdParams()
    soil = np.full((4, 4), 50.0)
    tour = [0, 1, 2, 3]
    out = iwd_global_update(soil, tour, 0.0, params)
    assert out[0, 1] == (1.0 + params.rho_iwd) * 50.0  # soil_ib == 0

    n = 10
    soil = np.full((n, n), 100.0)
    tour = list(range(n))
    out = iwd_global_update(soil, tour, 990.0, params)
    expected = oracles.iwd_global_edge(100.0, 0.9, 990.0, n)
    assert abs(out[0, 1] - expected) <= 1e-12
    assert abs(expected - 91.0) <= 1e-10
    # off-tour edges untouched
    assert out[0, 2] == 100.0


def test_iwd_rho_zero_rejected():
    with pytest.raises(ConfigurationError):
        IwdParams(rho_iwd=0.0)
    with pytest.raises(ConfigurationError):
        IwdParams(rho_n=1.0)


def test_iwd_drops_capped_at_nodes(square4):
    with pytest.raises(ConfigurationError):
        sb.run(IwdParams(drops=9), square4,
               RunConfig(seed=1, iterations=2, population=4))


# ---------------------------------------------------------------------------
# full graph iterations

def test_square4_best_never_below_optimum(square4):
    for params in (AcoParams(), IwdParams()):
        trace = sb.run(params, square4,
                       RunConfig(seed=6, iterations=15, population=4))
        for rec in trace.records:
            assert rec.best >= 4.0


def test_graph_step_determinism(square4):
    for params in (AcoParams(), IwdParams()):
        cfg = RunConfig(seed=12, iterations=10, population=4)
        assert (sb.run(params, square4, cfg).records
                == sb.run(params, square4, cfg).records)


def test_recorded_tours_are_permutations():
    prob = make_rand_tsp(29, 6)
    for params in (AcoParams(), IwdParams()):
        trace = sb.run(params, prob, RunConfig(seed=4, iterations=15,
                                               population=6))
        for rec in trace.records:
            assert sorted(rec.candidate) == list(range(6))


def test_aco_finds_small_instance_optimum():
    prob = make_rand_tsp(41, 6)
    best_len, _ = oracles.brute_force_tsp(prob.space.dist.tolist())
    trace = sb.run(AcoParams(), prob,
                   RunConfig(seed=2, iterations=60, population=6))
    assert trace.solution.value <= best_len + 1e-9


def test_pheromone_stays_at_or_above_floor():
    prob = make_rand_tsp(43, 5)
    params = AcoParams(tau_min=1e-6)
    from swarmbench.core import algorithm_info
    info = algorithm_info("aco")
    algo = info.factory(params, prob, RunConfig(seed=3, iterations=1,
                                                population=5))
    stream = sb.make_stream(3)
    algo.init(stream)
    for t in range(200):
        algo.step(t, stream)
    off_diag = ~np.eye(5, dtype=bool)
    assert np.all(algo.tau[off_diag] >= params.tau_min)
    assert np.isfinite(algo.tau).all()


def test_iwd_soil_stays_finite():
    prob = make_rand_tsp(47, 5)
    from swarmbench.core import algorithm_info
    info = algorithm_info("iwd")
    algo = info.factory(IwdParams(), prob, RunConfig(seed=3, iterations=1,
                                                     population=5))
    stream = sb.make_stream(3)
    algo.init(stream)
    for t in range(300):
        algo.step(t, stream)
    assert np.isfinite(algo.soil).all()
