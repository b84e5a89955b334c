import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))  # makes `import oracles` work

settings.register_profile(
    "workbench",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("workbench")

import swarmbench as sb  # noqa: E402
import oracles  # noqa: E402


@pytest.fixture
def sphere2():
    from swarmbench.problems import builtin_problem
    return builtin_problem("sphere", 2)


@pytest.fixture
def square4():
    from swarmbench.problems import builtin_problem
    return builtin_problem("tsp-square4")


def make_rand_tsp(seed, n):
    """Seeded Euclidean instance in the unit square (test helper)."""
    stream = sb.make_stream(seed)
    coords = [(stream.random(), stream.random()) for _ in range(n)]
    dist = np.array(oracles.euclidean_matrix(coords))
    return sb.Problem(f"rand{n}-{seed}", sb.TourSpace(dist, coords=tuple(coords)))
