"""Cross-backend equivalence: the compiled kernels must reproduce the pure
Python kernels bit for bit, trace for trace."""

import numpy as np
import pytest

import swarmbench as sb
from swarmbench import _kernels
from swarmbench.continuous import AbcParams, FaParams, PsoParams
from swarmbench.core import RunConfig
from swarmbench.graph import AcoParams, IwdParams
from swarmbench.problems import builtin_problem

pytestmark = pytest.mark.skipif(
    "native" not in _kernels.available_backends(),
    reason="compiled backend not built")


@pytest.fixture
def both_backends():
    from swarmbench._kernels import pyfallback
    native = _kernels._native
    return pyfallback, native


@pytest.fixture(autouse=True)
def restore_backend():
    previous = _kernels.backend_name()
    yield
    _kernels.set_backend(previous)


CASES = [
    (PsoParams(), "rastrigin", 4),
    (AbcParams(), "ackley", 3),
    (FaParams(), "rosenbrock", 3),
    (AcoParams(), "tsp-circle8", None),
    (IwdParams(), "tsp-rand10", None),
]


@pytest.mark.parametrize("params,problem_id,dim", CASES,
                         ids=[type(c[0]).__name__ for c in CASES])
def test_traces_bit_identical(params, problem_id, dim):
    problem = builtin_problem(problem_id, dim)
    cfg = RunConfig(seed=2024, iterations=30, population=10)
    results = {}
    for backend in ("python", "native"):
        _kernels.set_backend(backend)
        results[backend] = sb.run(params, problem, cfg)
    assert results["python"].records == results["native"].records
    assert results["python"].solution == results["native"].solution


def test_rng_equivalence(both_backends):
    py, nat = both_backends
    for seed in (0, 7, 2 ** 63, 2 ** 64 - 1):
        a = py.RandomStream(seed)
        b = nat.RandomStream(seed)
        assert [a.next_u64() for _ in range(256)] == \
               [b.next_u64() for _ in range(256)]
        assert [a.random() for _ in range(256)] == \
               [b.random() for _ in range(256)]
        assert [a.randbelow(11) for _ in range(64)] == \
               [b.randbelow(11) for _ in range(64)]
        assert a.state() == b.state()


def test_objective_kernels_bitwise_equal(both_backends):
    py, nat = both_backends
    stream = py.RandomStream(5)
    for code in range(4):
        for _ in range(50):
            x = np.array([stream.uniform(-30.0, 30.0) for _ in range(8)])
            assert py.eval_objective(code, x) == nat.eval_objective(code, x)


def test_probability_kernels_bitwise_equal(both_backends):
    py, nat = both_backends
    stream = py.RandomStream(6)
    n = 7
    for _ in range(50):
        tau = np.array([[stream.uniform(1e-6, 5.0) for _ in range(n)]
                        for _ in range(n)])
        tau = (tau + tau.T) / 2.0
        dist = np.array([[stream.uniform(1e-3, 9.0) for _ in range(n)]
                         for _ in range(n)])
        dist = (dist + dist.T) / 2.0
        np.fill_diagonal(dist, 0.0)
        soil = np.array([[stream.uniform(-100.0, 100.0) for _ in range(n)]
                         for _ in range(n)])
        soil = (soil + soil.T) / 2.0
        visited = np.zeros(n, dtype=np.uint8)
        visited[0] = 1
        visited[3] = 1
        a = py.aco_transition_probs(0, visited, tau, dist, 1.0, 5.0)
        b = nat.aco_transition_probs(0, visited, tau, dist, 1.0, 5.0)
        assert a.tolist() == b.tolist()
        a = py.iwd_edge_probs(0, visited, soil, 1e-4)
        b = nat.iwd_edge_probs(0, visited, soil, 1e-4)
        assert a.tolist() == b.tolist()
        fits = np.array([stream.uniform(1e-6, 2.0) for _ in range(n)])
        assert (py.abc_onlooker_probs(fits).tolist()
                == nat.abc_onlooker_probs(fits).tolist())


def test_scalar_kernels_bitwise_equal(both_backends):
    py, nat = both_backends
    stream = py.RandomStream(8)
    for _ in range(200):
        f = stream.uniform(-50.0, 50.0)
        assert py.abc_fitness(f) == nat.abc_fitness(f)
        r = stream.uniform(0.0, 10.0)
        g = stream.uniform(1e-4, 4.0)
        assert py.fa_attractiveness(r, 1.0, g) == nat.fa_attractiveness(r, 1.0, g)
