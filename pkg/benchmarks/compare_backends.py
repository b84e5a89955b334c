"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the same seeded workload on both backends, checks the final best
values agree bit for bit (they must: the backends are written to the same
floating-point operation order), and reports iterations per second.

Usage: python benchmarks/compare_backends.py [--repeats N]
"""

import argparse
import time

import swarmbench as sb
from swarmbench import _kernels
from swarmbench.continuous import AbcParams, FaParams, PsoParams
from swarmbench.core import RunConfig
from swarmbench.graph import AcoParams, IwdParams
from swarmbench.problems import builtin_problem

WORKLOADS = [
    ("pso", PsoParams(), lambda: builtin_problem("sphere", 10), 2000, 30),
    ("abc", AbcParams(), lambda: builtin_problem("rastrigin", 10), 2000, 30),
    ("fa", FaParams(), lambda: builtin_problem("ackley", 10), 300, 30),
    ("aco", AcoParams(), lambda: builtin_problem("tsp-rand12"), 150, 12),
    ("iwd", IwdParams(), lambda: builtin_problem("tsp-rand12"), 150, 12),
]


def run_backend(backend, params, problem, iterations, population):
    _kernels.set_backend(backend)
    config = RunConfig(seed=7, iterations=iterations, population=population)
    start = time.perf_counter()
    trace = sb.run(params, problem, config)
    elapsed = time.perf_counter() - start
    return elapsed, trace.solution.value


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats per backend (best is kept)")
    args = parser.parse_args()

    backends = _kernels.available_backends()
    if "native" not in backends:
        print("compiled backend is not built; only the pure-Python "
              "fallback is available")
        return 1

    print(f"{'algorithm':<10} {'iters':>6} {'python':>12} {'native':>12} "
          f"{'speedup':>8}")
    original = _kernels.backend_name()
    try:
        for name, params, make_problem, iterations, population in WORKLOADS:
            problem = make_problem()
            times = {}
            values = {}
            for backend in ("python", "native"):
                best = float("inf")
                for _ in range(args.repeats):
                    elapsed, value = run_backend(backend, params, problem,
                                                 iterations, population)
                    best = min(best, elapsed)
                times[backend] = best
                values[backend] = value
            assert values["python"] == values["native"], (
                f"{name}: backends disagree "
                f"({values['python']!r} vs {values['native']!r})")
            py_rate = iterations / times["python"]
            nat_rate = iterations / times["native"]
            print(f"{name:<10} {iterations:>6} "
                  f"{py_rate:>10.0f}/s {nat_rate:>10.0f}/s "
                  f"{nat_rate / py_rate:>7.1f}x")
    finally:
        _kernels.set_backend(original)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
