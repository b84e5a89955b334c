"""Ant System and Intelligent Water Drops steppers for symmetric TSP.

Tours are permutations of 0..n-1, closed implicitly (last node connects
back to the first). Pheromone and soil matrices are symmetric; their
diagonals are never read.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from swarmbench import _kernels
from swarmbench.core import (
    TOUR,
    AlgorithmInfo,
    ConfigurationError,
    InvalidCandidateError,
    InvalidStateError,
    NumericError,
    ParamField,
    register_algorithm,
)


def _check(cond, name, message):
    if not cond:
        raise ConfigurationError(f"{name}: {message}")


@dataclass(frozen=True)
class AcoParams:
    """Ant System: evaporation plus Q/L deposits from every ant, with a
    pheromone floor to prevent numerical extinction."""

    alpha: float = 1.0
    beta: float = 5.0
    rho: float = 0.5
    q: float = 100.0
    tau0: float = 0.1
    tau_min: float = 1e-12
    ants: Optional[int] = None  # default: one per node

    def __post_init__(self):
        _check(self.alpha >= 0.0, "alpha", "must be >= 0")
        _check(self.beta >= 0.0, "beta", "must be >= 0")
        _check(0.0 < self.rho < 1.0, "rho", "must be within (0, 1)")
        _check(self.q > 0.0, "q", "must be > 0")
        _check(self.tau_min > 0.0, "tau_min", "must be > 0")
        _check(self.tau0 > self.tau_min, "tau0", "must be > tau_min")
        if self.ants is not None:
            _check(self.ants >= 1, "ants", "must be >= 1")


@dataclass(frozen=True)
class IwdParams:
    """Intelligent Water Drops with the standard coefficient set."""

    a_v: float = 1000.0
    b_v: float = 0.01
    c_v: float = 1.0
    a_s: float = 1000.0
    b_s: float = 0.01
    c_s: float = 1.0
    initial_soil: float = 10000.0
    initial_velocity: float = 200.0
    rho_n: float = 0.9
    rho_iwd: float = 0.9
    epsilon: float = 0.0001
    drops: Optional[int] = None  # default: one per node

    def __post_init__(self):
        for name in ("a_v", "b_v", "c_v", "a_s", "b_s", "c_s",
                     "initial_velocity", "epsilon"):
            _check(getattr(self, name) > 0.0, name, "must be > 0")
        _check(self.initial_soil > 0.0, "initial_soil", "must be > 0")
        _check(0.0 < self.rho_n < 1.0, "rho_n", "must be within (0, 1)")
        _check(0.0 < self.rho_iwd < 1.0, "rho_iwd", "must be within (0, 1)")
        if self.drops is not None:
            _check(self.drops >= 1, "drops", "must be >= 1")


@dataclass(frozen=True)
class Drop:
    """A water drop's per-construction state."""

    velocity: float
    soil: float = 0.0


# ---------------------------------------------------------------------------
# tour utilities

def _as_tour(tour, n):
    arr = np.ascontiguousarray(tour, dtype=np.int64)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise InvalidCandidateError(f"expected a length-{n} tour")
    seen = np.zeros(n, dtype=bool)
    for node in arr:
        if node < 0 or node >= n or seen[node]:
            raise InvalidCandidateError(f"tour is not a permutation of 0..{n - 1}")
        seen[node] = True
    return arr


def tour_length(dist, tour):
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    arr = _as_tour(tour, dist.shape[0])
    return _kernels.active().tour_length(dist, arr)


def _visited_mask(visited, n, current):
    mask = np.zeros(n, dtype=np.uint8)
    for node in visited:
        node = int(node)
        if node < 0 or node >= n:
            raise InvalidStateError(f"visited node {node} out of range")
        mask[node] = 1
    if not mask[current]:
        raise InvalidStateError("visited set must include the current node")
    if int(mask.sum()) >= n:
        raise InvalidStateError("no unvisited nodes left")
    return mask


# ---------------------------------------------------------------------------
# ACO operations

def aco_transition_probs(current, visited, tau, dist, params):
    """Probability of each unvisited node from `current`; visited entries
    are zero. tau^alpha * (1/d)^beta, normalized."""
    tau = np.ascontiguousarray(tau, dtype=np.float64)
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    mask = _visited_mask(visited, tau.shape[0], current)
    return _kernels.active().aco_transition_probs(
        int(current), mask, tau, dist, params.alpha, params.beta)


def aco_construct_tour(start, tau, dist, params, stream):
    tau = np.ascontiguousarray(tau, dtype=np.float64)
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    n = tau.shape[0]
    if n < 3:
        raise InvalidStateError("need at least 3 nodes")
    tour = np.empty(n, dtype=np.int64)
    _kernels.active().aco_construct_tour(
        int(start), tau, dist, params.alpha, params.beta, stream, tour)
    return tour


def aco_pheromone_update(tau, tours, lengths, params):
    """Evaporated + deposited + floored copy of the pheromone matrix."""
    tau = np.array(tau, dtype=np.float64)
    n = tau.shape[0]
    tours = np.ascontiguousarray(tours, dtype=np.int64)
    if tours.ndim == 1:
        tours = tours.reshape(1, -1)
    lengths = np.ascontiguousarray(lengths, dtype=np.float64).reshape(-1)
    if lengths.shape[0] != tours.shape[0]:
        raise InvalidStateError("one length per tour required")
    for k in range(tours.shape[0]):
        _as_tour(tours[k], n)
        if lengths[k] <= 0.0 or not np.isfinite(lengths[k]):
            raise NumericError(f"tour length must be positive, got {lengths[k]}")
    _kernels.active().aco_pheromone_update(
        tau, tours, lengths, params.rho, params.q, params.tau_min)
    return tau


# ---------------------------------------------------------------------------
# IWD operations

def iwd_edge_probs(current, visited, soil, params):
    soil = np.ascontiguousarray(soil, dtype=np.float64)
    mask = _visited_mask(visited, soil.shape[0], current)
    return _kernels.active().iwd_edge_probs(
        int(current), mask, soil, params.epsilon)


def iwd_move(drop, edge, soil, dist, params):
    """Traverse one edge: returns (updated drop, soil matrix). The soil
    matrix is updated in place on both orientations."""
    i, j = int(edge[0]), int(edge[1])
    soil = np.ascontiguousarray(soil, dtype=np.float64)
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    vel, carried = _kernels.active().iwd_move(
        float(drop.velocity), float(drop.soil), i, j, soil, dist,
        params.a_v, params.b_v, params.c_v,
        params.a_s, params.b_s, params.c_s,
        params.rho_n, params.epsilon)
    return replace(drop, velocity=vel, soil=carried), soil


def iwd_global_update(soil, tour, soil_ib, params):
    """Iteration-best reinforcement; returns an updated copy."""
    soil = np.array(soil, dtype=np.float64)
    n = soil.shape[0]
    if n < 2:
        raise InvalidStateError("need at least 2 nodes")
    arr = _as_tour(tour, n)
    _kernels.active().iwd_global_update(soil, arr, float(soil_ib),
                                        params.rho_iwd)
    return soil


# ---------------------------------------------------------------------------
# run-loop adapters

class _GraphRun:
    def __init__(self, params, problem, config):
        self.params = params
        self.problem = problem
        self.config = config
        self.n = problem.space.n
        self.dist = problem.space.dist
        self.tours = None
        self.lengths = None

    def _alloc(self, count):
        self.tours = np.empty((count, self.n), dtype=np.int64)
        self.lengths = np.empty(count)

    def _baseline(self, stream):
        # iteration-0 population: uniform random tours, no deposits
        impl = _kernels.active()
        impl.random_tours(self.n, self.tours, stream)
        for a in range(self.tours.shape[0]):
            self.lengths[a] = impl.tour_length(self.dist, self.tours[a])

    def values(self):
        return self.lengths

    def candidate(self, index):
        return tuple(int(v) for v in self.tours[index])


class _AcoRun(_GraphRun):
    def __init__(self, params, problem, config):
        super().__init__(params, problem, config)
        self.ants = params.ants if params.ants is not None else self.n
        self.tau = None

    def init(self, stream):
        self.tau = np.full((self.n, self.n), self.params.tau0)
        self._alloc(self.ants)
        self._baseline(stream)

    def step(self, t, stream):
        p = self.params
        try:
            _kernels.active().aco_step(
                self.dist, self.tau, self.tours, self.lengths,
                p.alpha, p.beta, p.rho, p.q, p.tau_min, stream)
        except ValueError as exc:  # zero-length tours on degenerate instances
            raise NumericError(str(exc)) from exc

    def resolved_params(self):
        p = self.params
        return {"alpha": p.alpha, "beta": p.beta, "rho": p.rho, "q": p.q,
                "tau0": p.tau0, "tau_min": p.tau_min, "ants": self.ants}


class _IwdRun(_GraphRun):
    def __init__(self, params, problem, config):
        super().__init__(params, problem, config)
        self.drops = params.drops if params.drops is not None else self.n
        if self.drops > self.n:
            raise ConfigurationError(
                "drops: must be <= node count (drops start at distinct nodes)")
        self.soil = None

    def init(self, stream):
        self.soil = np.full((self.n, self.n), self.params.initial_soil)
        self._alloc(self.drops)
        self._baseline(stream)

    def step(self, t, stream):
        p = self.params
        _kernels.active().iwd_step(
            self.dist, self.soil, self.tours, self.lengths,
            p.a_v, p.b_v, p.c_v, p.a_s, p.b_s, p.c_s,
            p.initial_velocity, p.rho_n, p.rho_iwd, p.epsilon, stream)

    def resolved_params(self):
        p = self.params
        return {"a_v": p.a_v, "b_v": p.b_v, "c_v": p.c_v,
                "a_s": p.a_s, "b_s": p.b_s, "c_s": p.c_s,
                "initial_soil": p.initial_soil,
                "initial_velocity": p.initial_velocity,
                "rho_n": p.rho_n, "rho_iwd": p.rho_iwd,
                "epsilon": p.epsilon, "drops": self.drops}


register_algorithm(AlgorithmInfo(
    id="aco",
    space_kind=TOUR,
    params_type=AcoParams,
    fields=(
        ParamField("alpha", "float", 1.0, min=0.0,
                   description="pheromone weight"),
        ParamField("beta", "float", 5.0, min=0.0,
                   description="heuristic (1/distance) weight"),
        ParamField("rho", "float", 0.5, min=0.0, max=1.0,
                   exclusive_min=True, exclusive_max=True,
                   description="evaporation rate"),
        ParamField("q", "float", 100.0, min=0.0, exclusive_min=True,
                   description="deposit constant (Q/L per ant edge)"),
        ParamField("tau0", "float", 0.1, min=0.0, exclusive_min=True,
                   description="initial pheromone (must exceed tau_min)"),
        ParamField("tau_min", "float", 1e-12, min=0.0, exclusive_min=True,
                   description="pheromone floor"),
        ParamField("ants", "int", None, min=1,
                   description="ants per iteration (default: node count)"),
    ),
    factory=_AcoRun,
))

register_algorithm(AlgorithmInfo(
    id="iwd",
    space_kind=TOUR,
    params_type=IwdParams,
    fields=(
        ParamField("a_v", "float", 1000.0, min=0.0, exclusive_min=True,
                   description="velocity update numerator"),
        ParamField("b_v", "float", 0.01, min=0.0, exclusive_min=True,
                   description="velocity update offset"),
        ParamField("c_v", "float", 1.0, min=0.0, exclusive_min=True,
                   description="velocity update soil coefficient"),
        ParamField("a_s", "float", 1000.0, min=0.0, exclusive_min=True,
                   description="soil update numerator"),
        ParamField("b_s", "float", 0.01, min=0.0, exclusive_min=True,
                   description="soil update offset"),
        ParamField("c_s", "float", 1.0, min=0.0, exclusive_min=True,
                   description="soil update time coefficient"),
        ParamField("initial_soil", "float", 10000.0, min=0.0,
                   exclusive_min=True, description="starting soil per edge"),
        ParamField("initial_velocity", "float", 200.0, min=0.0,
                   exclusive_min=True, description="drop velocity at reset"),
        ParamField("rho_n", "float", 0.9, min=0.0, max=1.0,
                   exclusive_min=True, exclusive_max=True,
                   description="local soil update rate"),
        ParamField("rho_iwd", "float", 0.9, min=0.0, max=1.0,
                   exclusive_min=True, exclusive_max=True,
                   description="global (iteration-best) soil update rate"),
        ParamField("epsilon", "float", 0.0001, min=0.0, exclusive_min=True,
                   description="selection and velocity-floor constant"),
        ParamField("drops", "int", None, min=1,
                   description="drops per iteration (default: node count, "
                               "must not exceed it)"),
    ),
    factory=_IwdRun,
))
