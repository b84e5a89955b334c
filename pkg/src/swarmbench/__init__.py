"""swarmbench: a deterministic swarm-intelligence workbench.

Five algorithms (pso, abc, fa, aco, iwd) over one problem abstraction,
with XML problem files, a headless CLI, an HTTP run service and an
optional browser workbench. Importing this package registers all
algorithms with the run loop.
"""

from swarmbench import continuous, graph  # noqa: F401  (registration)
from swarmbench._kernels import backend_name
from swarmbench.core import (
    ConfigurationError,
    ContinuousSpace,
    IterationRecord,
    Problem,
    RunConfig,
    RunTrace,
    Solution,
    SwarmError,
    TourSpace,
    algorithm_ids,
    algorithm_info,
    best_so_far,
    evaluate,
    clamp_to_bounds,
    make_stream,
    run,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ContinuousSpace",
    "IterationRecord",
    "Problem",
    "RunConfig",
    "RunTrace",
    "Solution",
    "SwarmError",
    "TourSpace",
    "algorithm_ids",
    "algorithm_info",
    "backend_name",
    "best_so_far",
    "clamp_to_bounds",
    "evaluate",
    "make_stream",
    "run",
    "__version__",
]
