"""PSO, ABC and FA steppers for box-constrained continuous minimization.

Each algorithm exposes its parameter set, an init/step pair operating on a
small state object, and registers itself with the core run loop. All
randomness flows through the run's single stream in the documented order
(see swarmbench._kernels.pyfallback).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from swarmbench import _kernels
from swarmbench.core import (
    CONTINUOUS,
    OBJECTIVE_CODES,
    AlgorithmInfo,
    ConfigurationError,
    InvalidArgumentError,
    InvalidStateError,
    NumericError,
    ParamField,
    register_algorithm,
)


def _check(cond, name, message):
    if not cond:
        raise ConfigurationError(f"{name}: {message}")


# ---------------------------------------------------------------------------
# PSO

@dataclass(frozen=True)
class PsoParams:
    """Global-best PSO with constriction-equivalent defaults."""

    w: float = 0.7298
    c1: float = 1.49618
    c2: float = 1.49618
    vfrac: float = 0.5

    def __post_init__(self):
        _check(0.0 <= self.w <= 1.2, "w", "must be within [0, 1.2]")
        _check(self.c1 >= 0.0, "c1", "must be >= 0")
        _check(self.c2 >= 0.0, "c2", "must be >= 0")
        _check(0.0 < self.vfrac <= 1.0, "vfrac", "must be within (0, 1]")


@dataclass
class PsoState:
    x: np.ndarray
    v: np.ndarray
    values: np.ndarray
    pbest: np.ndarray
    pbest_values: np.ndarray
    gbest: np.ndarray
    gbest_value: float


def pso_init(problem, population, stream):
    space = problem.space
    code = OBJECTIVE_CODES[problem.objective]
    impl = _kernels.active()
    x = impl.init_positions(population, space.lower, space.upper, stream)
    v = np.zeros_like(x)  # velocities start at rest: no extra draws
    values = np.empty(population)
    for i in range(population):
        values[i] = impl.eval_objective(code, x[i])
    best = 0
    for i in range(1, population):
        if values[i] < values[best]:
            best = i
    return PsoState(
        x=x, v=v, values=values,
        pbest=x.copy(), pbest_values=values.copy(),
        gbest=x[best].copy(), gbest_value=float(values[best]))


def pso_step(state, problem, params, stream):
    """One sweep: velocity update with fresh r1, r2 per dimension, clamp to
    +/- vfrac * width, move, clamp to bounds zeroing the violating velocity
    component, then strict pbest/gbest updates."""
    space = problem.space
    code = OBJECTIVE_CODES[problem.objective]
    vmax = params.vfrac * (space.upper - space.lower)
    state.gbest_value = _kernels.active().pso_step(
        code, state.x, state.v, state.values,
        state.pbest, state.pbest_values, state.gbest, state.gbest_value,
        space.lower, space.upper, vmax,
        params.w, params.c1, params.c2, stream)
    return state


# ---------------------------------------------------------------------------
# ABC

@dataclass(frozen=True)
class AbcParams:
    """Artificial bee colony. The food source count is population // 2;
    limit defaults to sources * dimension when left unset."""

    limit: Optional[int] = None

    def __post_init__(self):
        if self.limit is not None:
            _check(self.limit >= 1, "limit", "must be >= 1")


@dataclass
class AbcState:
    positions: np.ndarray
    values: np.ndarray
    trials: np.ndarray


def abc_source_count(population):
    sources = population // 2
    if sources < 2:
        raise ConfigurationError(
            "abc needs population >= 4 (food sources = population // 2)")
    return sources


def abc_resolved_limit(params, sources, dimension):
    if params.limit is not None:
        return int(params.limit)
    return sources * dimension


def abc_init(problem, population, stream):
    space = problem.space
    code = OBJECTIVE_CODES[problem.objective]
    sources = abc_source_count(population)
    impl = _kernels.active()
    xs = impl.init_positions(sources, space.lower, space.upper, stream)
    values = np.empty(sources)
    for i in range(sources):
        values[i] = impl.eval_objective(code, xs[i])
    return AbcState(positions=xs, values=values,
                    trials=np.zeros(sources, dtype=np.int64))


def abc_step(state, problem, params, stream):
    space = problem.space
    code = OBJECTIVE_CODES[problem.objective]
    sources, dim = state.positions.shape
    if sources < 2:
        raise ConfigurationError("abc needs at least 2 food sources")
    limit = abc_resolved_limit(params, sources, dim)
    _kernels.active().abc_step(
        code, state.positions, state.values, state.trials,
        space.lower, space.upper, limit, stream)
    return state


def abc_fitness(f):
    """Karaboga's fitness mapping: 1/(1+f) for f >= 0, else 1+|f|."""
    if not math.isfinite(f):
        raise NumericError(f"objective value must be finite, got {f!r}")
    return _kernels.active().abc_fitness(float(f))


def abc_onlooker_probs(fitness):
    arr = np.ascontiguousarray(fitness, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidStateError("fitness vector must be non-empty")
    if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
        raise InvalidStateError("fitness values must be positive and finite")
    return _kernels.active().abc_onlooker_probs(arr)


# ---------------------------------------------------------------------------
# FA

@dataclass(frozen=True)
class FaParams:
    """Firefly algorithm with geometric randomization decay.

    gamma left unset auto-scales to 1 / (mean bound width)^2 for the
    problem at hand, keeping the default usable across problem scales.
    """

    beta0: float = 1.0
    gamma: Optional[float] = None
    alpha0: float = 0.25
    decay: float = 0.97

    def __post_init__(self):
        _check(self.beta0 > 0.0, "beta0", "must be > 0")
        if self.gamma is not None:
            _check(self.gamma > 0.0, "gamma", "must be > 0")
        _check(0.0 <= self.alpha0 <= 1.0, "alpha0", "must be within [0, 1]")
        _check(0.0 < self.decay <= 1.0, "decay", "must be within (0, 1]")


@dataclass
class FaState:
    x: np.ndarray
    values: np.ndarray


def fa_resolved_gamma(params, space):
    if params.gamma is not None:
        return float(params.gamma)
    dim = space.dimension
    total = 0.0
    for d in range(dim):
        total += float(space.upper[d]) - float(space.lower[d])
    mean_width = total / dim
    return 1.0 / (mean_width * mean_width)


def fa_init(problem, population, stream):
    space = problem.space
    code = OBJECTIVE_CODES[problem.objective]
    impl = _kernels.active()
    x = impl.init_positions(population, space.lower, space.upper, stream)
    values = np.empty(population)
    for i in range(population):
        values[i] = impl.eval_objective(code, x[i])
    return FaState(x=x, values=values)


def fa_step(state, problem, params, stream, t):
    """One sweep at 0-based iteration t; the randomization amplitude is
    alpha0 * decay**t, so the first sweep uses alpha0 exactly."""
    space = problem.space
    code = OBJECTIVE_CODES[problem.objective]
    gamma = fa_resolved_gamma(params, space)
    alpha_t = params.alpha0 * params.decay ** t
    _kernels.active().fa_step(
        code, state.x, state.values, space.lower, space.upper,
        params.beta0, gamma, alpha_t, stream)
    return state


def fa_attractiveness(r, params):
    """beta0 * exp(-gamma * r^2); needs a concrete gamma."""
    if r < 0.0:
        raise InvalidArgumentError("distance must be >= 0")
    if params.gamma is None:
        raise ConfigurationError(
            "gamma is unset; resolve it against a problem first "
            "(fa_resolved_gamma)")
    return _kernels.active().fa_attractiveness(
        float(r), params.beta0, params.gamma)


# ---------------------------------------------------------------------------
# run-loop adapters

class _ContinuousRun:
    state = None

    def __init__(self, params, problem, config):
        self.params = params
        self.problem = problem
        self.config = config

    def values(self):
        raise NotImplementedError

    def candidate(self, index):
        raise NotImplementedError


class _PsoRun(_ContinuousRun):
    def init(self, stream):
        self.state = pso_init(self.problem, self.config.population, stream)

    def step(self, t, stream):
        pso_step(self.state, self.problem, self.params, stream)

    def values(self):
        return self.state.values

    def candidate(self, index):
        return tuple(float(v) for v in self.state.x[index])

    def resolved_params(self):
        p = self.params
        return {"w": p.w, "c1": p.c1, "c2": p.c2, "vfrac": p.vfrac}


class _AbcRun(_ContinuousRun):
    def __init__(self, params, problem, config):
        super().__init__(params, problem, config)
        self._sources = abc_source_count(config.population)
        self._limit = abc_resolved_limit(
            params, self._sources, problem.space.dimension)

    def init(self, stream):
        self.state = abc_init(self.problem, self.config.population, stream)

    def step(self, t, stream):
        abc_step(self.state, self.problem, self.params, stream)

    def values(self):
        return self.state.values

    def candidate(self, index):
        return tuple(float(v) for v in self.state.positions[index])

    def resolved_params(self):
        return {"limit": self._limit}


class _FaRun(_ContinuousRun):
    def __init__(self, params, problem, config):
        super().__init__(params, problem, config)
        self._gamma = fa_resolved_gamma(params, problem.space)

    def init(self, stream):
        self.state = fa_init(self.problem, self.config.population, stream)

    def step(self, t, stream):
        fa_step(self.state, self.problem, self.params, stream, t - 1)

    def values(self):
        return self.state.values

    def candidate(self, index):
        return tuple(float(v) for v in self.state.x[index])

    def resolved_params(self):
        p = self.params
        return {"beta0": p.beta0, "gamma": self._gamma,
                "alpha0": p.alpha0, "decay": p.decay}


register_algorithm(AlgorithmInfo(
    id="pso",
    space_kind=CONTINUOUS,
    params_type=PsoParams,
    fields=(
        ParamField("w", "float", 0.7298, min=0.0, max=1.2,
                   description="inertia weight"),
        ParamField("c1", "float", 1.49618, min=0.0,
                   description="cognitive pull toward the particle best"),
        ParamField("c2", "float", 1.49618, min=0.0,
                   description="social pull toward the swarm best"),
        ParamField("vfrac", "float", 0.5, min=0.0, max=1.0,
                   exclusive_min=True,
                   description="velocity clamp as a fraction of bound width"),
    ),
    factory=_PsoRun,
))

register_algorithm(AlgorithmInfo(
    id="abc",
    space_kind=CONTINUOUS,
    params_type=AbcParams,
    fields=(
        ParamField("limit", "int", None, min=1,
                   description="scout trigger: failed trials allowed before "
                               "reinitialization (default sources*dimension)"),
    ),
    factory=_AbcRun,
))

register_algorithm(AlgorithmInfo(
    id="fa",
    space_kind=CONTINUOUS,
    params_type=FaParams,
    fields=(
        ParamField("beta0", "float", 1.0, min=0.0, exclusive_min=True,
                   description="attractiveness at distance zero"),
        ParamField("gamma", "float", None, min=0.0, exclusive_min=True,
                   description="light absorption "
                               "(default 1 / mean bound width squared)"),
        ParamField("alpha0", "float", 0.25, min=0.0, max=1.0,
                   description="initial randomization amplitude"),
        ParamField("decay", "float", 0.97, min=0.0, max=1.0,
                   exclusive_min=True,
                   description="per-iteration randomization decay"),
    ),
    factory=_FaRun,
))
