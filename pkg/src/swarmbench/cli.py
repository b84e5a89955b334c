"""Headless command line: list, validate, run.

Exit codes: 0 success, 1 usage problems (bad flags, unknown ids or
parameters, incompatible algorithm/problem kinds), 2 invalid or unreadable
input files, 3 runtime failures.
"""

from __future__ import annotations

import argparse
import sys

from swarmbench import core, plotting, problems, traces
from swarmbench.core import ConfigurationError, NumericError, RunConfig, SwarmError


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser():
    parser = _Parser(prog="swarmbench", add_help=True)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p_list = sub.add_parser("list", help="list algorithms or problems")
    p_list.add_argument("kind", choices=["algorithms", "problems"])

    p_val = sub.add_parser("validate", help="check a problem file")
    p_val.add_argument("path")

    p_run = sub.add_parser("run", help="execute one optimization run")
    p_run.add_argument("--algorithm", required=True)
    p_run.add_argument("--problem")
    p_run.add_argument("--problem-file")
    p_run.add_argument("--dimension", type=int)
    p_run.add_argument("--iterations", type=int, required=True)
    p_run.add_argument("--population", type=int, required=True)
    p_run.add_argument("--seed", type=int, required=True)
    p_run.add_argument("--param", action="append", default=[],
                       metavar="NAME=VALUE")
    p_run.add_argument("--target", type=float)
    p_run.add_argument("--stride", type=int, default=1)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--plot")
    p_run.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    return parser


def _range_text(field):
    lo = "-inf" if field.min is None else f"{field.min:g}"
    hi = "inf" if field.max is None else f"{field.max:g}"
    left = "(" if field.exclusive_min or field.min is None else "["
    right = ")" if field.exclusive_max or field.max is None else "]"
    return f"{left}{lo}, {hi}{right}"


def _cmd_list(kind, out):
    if kind == "algorithms":
        for algo_id in core.algorithm_ids():
            info = core.algorithm_info(algo_id)
            out.write(f"{algo_id}  ({info.space_kind})\n")
            for field in info.fields:
                default = "auto" if field.default is None else field.default
                out.write(f"  {field.name:<18} {field.type:<5} "
                          f"default={default!s:<10} range={_range_text(field)}"
                          f"  {field.description}\n")
    else:
        for entry in (problems.builtin_summary(pid)
                      for pid in problems.builtin_ids()):
            if entry["kind"] == "continuous":
                lo, hi = entry["bounds"]
                out.write(f"{entry['id']:<14} continuous  any dimension "
                          f"(default {entry['default_dimension']}), "
                          f"bounds [{lo:g}, {hi:g}]\n")
            else:
                out.write(f"{entry['id']:<14} tour        "
                          f"{entry['nodes']} nodes\n")
    return 0


def _cmd_validate(path, err):
    try:
        with open(path, "rb") as fh:
            text = fh.read()
    except OSError as exc:
        err.write(f"cannot read {path}: {exc.strerror or exc}\n")
        return 2
    try:
        problems.parse_problem_xml(text)
    except problems.ProblemFormatError as exc:
        for diag in exc.diagnostics:
            err.write(f"{diag}\n")
        return 2
    return 0


def _parse_params(pairs, info):
    valid = {field.name: field for field in info.fields}
    out = {}
    for pair in pairs:
        name, sep, raw = pair.partition("=")
        if not sep:
            raise _UsageError(f"--param needs NAME=VALUE, got {pair!r}")
        if name not in valid:
            raise _UsageError(
                f"unknown parameter {name!r} for {info.id}; valid names: "
                f"{', '.join(f.name for f in info.fields)}")
        field = valid[name]
        try:
            if field.type == "int":
                value = int(raw)
            else:
                value = float(raw)
        except ValueError:
            raise _UsageError(
                f"parameter {name!r} expects {field.type}, got {raw!r}")
        out[name] = value
    return out


def _cmd_run(args, out, err):
    info = None
    try:
        info = core.algorithm_info(args.algorithm)
    except ConfigurationError as exc:
        raise _UsageError(str(exc))

    if (args.problem is None) == (args.problem_file is None):
        raise _UsageError("give exactly one of --problem or --problem-file")
    if args.problem_file is not None and args.dimension is not None:
        raise _UsageError("--dimension applies to builtin continuous problems")

    if args.problem is not None:
        if (args.dimension is not None
                and args.problem not in problems.CONTINUOUS_BOUNDS):
            raise _UsageError("--dimension applies to builtin continuous problems")
        try:
            problem = problems.builtin_problem(args.problem, args.dimension)
        except problems.UnknownProblemError as exc:
            raise _UsageError(str(exc))
    else:
        try:
            problem = problems.load_problem(args.problem_file)
        except OSError as exc:
            err.write(f"cannot read {args.problem_file}: "
                      f"{exc.strerror or exc}\n")
            return 2
        except problems.ProblemFormatError as exc:
            for diag in exc.diagnostics:
                err.write(f"{diag}\n")
            return 2

    params_kv = _parse_params(args.param, info)
    try:
        params = info.params_type(**params_kv)
        config = RunConfig(seed=args.seed, iterations=args.iterations,
                           population=args.population, target=args.target,
                           stride=args.stride)
        trace = core.run(params, problem, config)
    except ConfigurationError as exc:
        raise _UsageError(str(exc))
    except NumericError as exc:
        err.write(f"numeric failure: {exc}\n")
        return 3

    try:
        if args.format == "jsonl":
            traces.write_jsonl(trace, args.out)
        else:
            traces.write_csv(trace, args.out)
        if args.plot:
            plotting.save_convergence_svg(trace, args.plot)
    except OSError as exc:
        err.write(f"cannot write output: {exc.strerror or exc}\n")
        return 2

    sol = trace.solution
    out.write(f"best {sol.value!r} first-attained {sol.first_attained} "
              f"duration {trace.duration_seconds:.3f}s\n")
    return 0


def main(argv=None, stdout=None, stderr=None):
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a command is required (list, validate, run)")
        if args.command == "list":
            return _cmd_list(args.kind, out)
        if args.command == "validate":
            return _cmd_validate(args.path, err)
        return _cmd_run(args, out, err)
    except _UsageError as exc:
        err.write(f"error: {exc}\n")
        err.write("run with --help for usage\n")
        return 1
    except SwarmError as exc:
        err.write(f"runtime failure: {exc}\n")
        return 3


def console_main():  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
