"""Problem model, deterministic random stream and the generic run loop.

Everything minimizes. To maximize, negate the objective. Problems built by
hand (rather than through the problems module) should be checked with
``swarmbench.problems.validate_problem`` before running; the driver only
guards what it needs to stay well-defined.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, Sequence, Union

import numpy as np

from swarmbench import _kernels

ENGINE_VERSION = "0.1.0"

CONTINUOUS = "continuous"
TOUR = "tour"

# builtin objective ids -> kernel codes
OBJECTIVE_CODES = {
    "sphere": 0,
    "rastrigin": 1,
    "rosenbrock": 2,
    "ackley": 3,
}


class SwarmError(Exception):
    """Base class for engine errors."""


class ConfigurationError(SwarmError):
    pass


class InvalidCandidateError(SwarmError):
    pass


class InvalidStateError(SwarmError):
    pass


class InvalidArgumentError(SwarmError):
    pass


class InvalidTraceError(SwarmError):
    pass


class NumericError(SwarmError):
    pass


class UnsupportedOperationError(SwarmError):
    pass


def make_stream(seed):
    """A fresh deterministic random stream from the active backend."""
    return _kernels.active().RandomStream(seed)


# ---------------------------------------------------------------------------
# search spaces and problems

@dataclass(frozen=True)
class ContinuousSpace:
    """Box-bounded real search space."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.ascontiguousarray(self.lower, dtype=np.float64)
        hi = np.ascontiguousarray(self.upper, dtype=np.float64)
        if lo.ndim != 1 or hi.shape != lo.shape or lo.size == 0:
            raise ConfigurationError("bounds must be equal-length 1-D arrays")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def kind(self):
        return CONTINUOUS

    @property
    def dimension(self):
        return int(self.lower.shape[0])


@dataclass(frozen=True)
class TourSpace:
    """Symmetric TSP over a full distance matrix.

    coords is kept when the instance came from city coordinates; it is
    used for serialization and tour rendering only.
    """

    dist: np.ndarray
    coords: Optional[tuple] = None

    def __post_init__(self):
        d = np.ascontiguousarray(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ConfigurationError("distance matrix must be square")
        object.__setattr__(self, "dist", d)
        if self.coords is not None:
            object.__setattr__(
                self, "coords",
                tuple((float(x), float(y)) for x, y in self.coords))

    @property
    def kind(self):
        return TOUR

    @property
    def n(self):
        return int(self.dist.shape[0])


SearchSpace = Union[ContinuousSpace, TourSpace]


@dataclass(frozen=True)
class Problem:
    """A named minimization objective over a search space.

    objective is a builtin function id for continuous spaces and None for
    tour spaces (where the objective is the tour length).
    """

    name: str
    space: SearchSpace
    objective: Optional[str] = None

    def __post_init__(self):
        if self.space.kind == CONTINUOUS:
            if self.objective not in OBJECTIVE_CODES:
                raise ConfigurationError(
                    f"unknown builtin objective {self.objective!r}; "
                    f"known: {', '.join(sorted(OBJECTIVE_CODES))}")
        elif self.objective is not None:
            raise ConfigurationError("tour problems take no objective id")


@dataclass(frozen=True)
class RunConfig:
    """Reproducibility and budget knobs shared by every algorithm."""

    seed: int
    iterations: int
    population: int
    target: Optional[float] = None
    stride: int = 1

    def __post_init__(self):
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be >= 1")
        if self.population < 2:
            raise ConfigurationError("population must be >= 2")
        if self.stride < 1 or self.stride > self.iterations:
            raise ConfigurationError("stride must be in [1, iterations]")
        if self.target is not None and not math.isfinite(self.target):
            raise ConfigurationError("target must be finite")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    best: float
    iteration_best: float
    mean: float
    candidate: tuple


@dataclass(frozen=True)
class Solution:
    value: float
    candidate: tuple
    first_attained: int


@dataclass(frozen=True)
class TraceHeader:
    problem: str
    algorithm: str
    params: dict
    seed: int
    iterations: int
    population: int
    stride: int
    target: Optional[float]
    version: str = ENGINE_VERSION


@dataclass(frozen=True)
class RunTrace:
    header: TraceHeader
    records: tuple
    solution: Solution
    duration_seconds: float
    stop_reason: str = "budget"  # budget | target | cancelled


def best_so_far(trace):
    """Final Solution reconstructed from the recorded rows.

    The first-attained iteration is the iteration index of the earliest
    record holding the final best value; with stride > 1 this may be later
    than the exact iteration tracked by the live run.
    """
    if not trace.records:
        raise InvalidTraceError("trace has no records")
    best = min(rec.best for rec in trace.records)
    for rec in trace.records:
        if rec.best == best:
            return Solution(best, rec.candidate, rec.iteration)
    raise InvalidTraceError("unreachable")  # pragma: no cover


# ---------------------------------------------------------------------------
# evaluation

def _as_position(space, candidate):
    arr = np.ascontiguousarray(candidate, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != space.dimension:
        raise InvalidCandidateError(
            f"expected a length-{space.dimension} position, "
            f"got shape {arr.shape}")
    return arr


def _as_tour(space, candidate):
    arr = np.ascontiguousarray(candidate, dtype=np.int64)
    n = space.n
    if arr.ndim != 1 or arr.shape[0] != n:
        raise InvalidCandidateError(
            f"expected a length-{n} tour, got shape {arr.shape}")
    seen = np.zeros(n, dtype=bool)
    for node in arr:
        if node < 0 or node >= n or seen[node]:
            raise InvalidCandidateError(
                f"tour is not a permutation of 0..{n - 1}")
        seen[node] = True
    return arr


def evaluate(problem, candidate):
    """Objective value of a candidate. Pure and deterministic."""
    space = problem.space
    if space.kind == CONTINUOUS:
        arr = _as_position(space, candidate)
        code = OBJECTIVE_CODES[problem.objective]
        return _kernels.active().eval_objective(code, arr)
    arr = _as_tour(space, candidate)
    return _kernels.active().tour_length(space.dist, arr)


def clamp_to_bounds(space, position):
    """Project a position into the box, component-wise."""
    if space.kind != CONTINUOUS:
        raise UnsupportedOperationError("clamping applies to continuous spaces")
    arr = _as_position(space, position)
    return np.minimum(np.maximum(arr, space.lower), space.upper)


# ---------------------------------------------------------------------------
# algorithm registry

class Algorithm(Protocol):
    """Stepper protocol the run loop drives."""

    def init(self, stream) -> None: ...

    def step(self, t: int, stream) -> None: ...

    def values(self) -> np.ndarray: ...

    def candidate(self, index: int) -> tuple: ...


@dataclass(frozen=True)
class ParamField:
    """One entry of an algorithm's parameter schema."""

    name: str
    type: str  # "float" | "int"
    default: object
    min: Optional[float] = None
    max: Optional[float] = None
    exclusive_min: bool = False
    exclusive_max: bool = False
    description: str = ""


@dataclass(frozen=True)
class AlgorithmInfo:
    id: str
    space_kind: str
    params_type: type
    fields: tuple
    factory: Callable

    def defaults(self):
        return self.params_type()


ALGORITHMS: dict = {}


def register_algorithm(info):
    ALGORITHMS[info.id] = info


def algorithm_ids():
    return sorted(ALGORITHMS)


def algorithm_info(algo_id):
    try:
        return ALGORITHMS[algo_id]
    except KeyError:
        raise ConfigurationError(
            f"unknown algorithm {algo_id!r}; known: "
            f"{', '.join(algorithm_ids())}") from None


def _info_for_params(params):
    for info in ALGORITHMS.values():
        if type(params) is info.params_type:
            return info
    raise ConfigurationError(
        f"no registered algorithm for parameter type {type(params).__name__}")


def params_echo(params):
    """Parameter dict as declared (unresolved optionals stay None)."""
    info = _info_for_params(params)
    return {f.name: getattr(params, f.name) for f in info.fields}


# ---------------------------------------------------------------------------
# run loop

def _check_problem(problem):
    space = problem.space
    if space.kind == CONTINUOUS:
        for d in range(space.dimension):
            lo = float(space.lower[d])
            hi = float(space.upper[d])
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
                raise ConfigurationError(
                    f"bounds invalid at dimension {d}: [{lo}, {hi}]")
    else:
        if space.n < 3:
            raise ConfigurationError("tour problems need at least 3 nodes")


def run(params, problem, config, observer=None, should_stop=None):
    """Execute one optimization run and return its trace.

    The algorithm is selected by the concrete type of ``params``. Records
    are written at iteration 0, every ``stride`` iterations, at the final
    iteration, and at any early-stop iteration; ``observer`` is called
    after each recorded iteration. ``should_stop`` is polled between
    iterations; when it returns true the run ends with stop_reason
    "cancelled" and the trace so far.
    """
    info = _info_for_params(params)
    if info.space_kind != problem.space.kind:
        raise ConfigurationError(
            f"{info.id} runs on {info.space_kind} problems, "
            f"got a {problem.space.kind} problem")
    _check_problem(problem)
    if not isinstance(config, RunConfig):
        raise ConfigurationError("config must be a RunConfig")

    algo = info.factory(params, problem, config)
    header = TraceHeader(
        problem=problem.name,
        algorithm=info.id,
        params=algo.resolved_params(),
        seed=config.seed,
        iterations=config.iterations,
        population=config.population,
        stride=config.stride,
        target=config.target,
    )

    stream = make_stream(config.seed)
    started = time.perf_counter()
    algo.init(stream)

    records = []
    best_value = math.inf
    best_candidate = None
    first_attained = 0

    def snapshot(t):
        nonlocal best_value, best_candidate, first_attained
        vals = algo.values()
        count = len(vals)
        ib = 0
        total = 0.0
        for i in range(count):
            vi = float(vals[i])
            total += vi
            if vi < float(vals[ib]):
                ib = i
        iter_best = float(vals[ib])
        mean = total / count
        if iter_best < best_value:
            best_value = iter_best
            best_candidate = algo.candidate(ib)
            first_attained = t
        return IterationRecord(t, best_value, iter_best, mean, best_candidate)

    def emit(rec):
        records.append(rec)
        if observer is not None:
            observer(rec)

    stop_reason = "budget"
    rec = snapshot(0)
    emit(rec)
    stopping = False
    if config.target is not None and best_value <= config.target:
        stop_reason = "target"
        stopping = True
    elif should_stop is not None and should_stop():
        stop_reason = "cancelled"
        stopping = True

    if not stopping:
        for t in range(1, config.iterations + 1):
            algo.step(t, stream)
            rec = snapshot(t)
            stop_now = False
            if config.target is not None and best_value <= config.target:
                stop_reason = "target"
                stop_now = True
            elif should_stop is not None and should_stop():
                stop_reason = "cancelled"
                stop_now = True
            if t % config.stride == 0 or t == config.iterations or stop_now:
                emit(rec)
            if stop_now:
                break

    duration = time.perf_counter() - started
    solution = Solution(best_value, best_candidate, first_attained)
    return RunTrace(header, tuple(records), solution, duration, stop_reason)
