"""Trace files.

JSONL (default): first line is a header object with keys algorithm,
problem, params, seed, iterations, population, stride, target, version;
every following line is one record with keys iter, best, iter_best, mean,
candidate. Wall-clock duration is deliberately not written so identical
runs produce byte-identical files.

CSV: header row ``iter,best,iter_best,mean``; candidates omitted.
"""

from __future__ import annotations

import json

from swarmbench.core import (
    InvalidTraceError,
    IterationRecord,
    RunTrace,
    TraceHeader,
    best_so_far,
)


def header_dict(trace):
    h = trace.header
    return {
        "algorithm": h.algorithm,
        "problem": h.problem,
        "params": dict(h.params),
        "seed": h.seed,
        "iterations": h.iterations,
        "population": h.population,
        "stride": h.stride,
        "target": h.target,
        "version": h.version,
    }


def record_dict(rec):
    return {
        "iter": rec.iteration,
        "best": rec.best,
        "iter_best": rec.iteration_best,
        "mean": rec.mean,
        "candidate": list(rec.candidate),
    }


def jsonl_lines(trace):
    yield json.dumps(header_dict(trace))
    for rec in trace.records:
        yield json.dumps(record_dict(rec))


def write_jsonl(trace, path):
    with open(path, "w", encoding="utf-8") as fh:
        for line in jsonl_lines(trace):
            fh.write(line)
            fh.write("\n")


def write_csv(trace, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("iter,best,iter_best,mean\n")
        for rec in trace.records:
            fh.write(f"{rec.iteration},{rec.best!r},"
                     f"{rec.iteration_best!r},{rec.mean!r}\n")


def record_from_dict(obj):
    return IterationRecord(
        iteration=int(obj["iter"]),
        best=float(obj["best"]),
        iteration_best=float(obj["iter_best"]),
        mean=float(obj["mean"]),
        candidate=tuple(obj["candidate"]),
    )


def read_jsonl(path):
    """Rebuild a RunTrace from a JSONL file.

    The solution is reconstructed from the records and the duration is not
    recoverable (stored as 0.0).
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise InvalidTraceError(f"{path}: empty trace file")
    head = json.loads(lines[0])
    header = TraceHeader(
        problem=head["problem"],
        algorithm=head["algorithm"],
        params=dict(head["params"]),
        seed=int(head["seed"]),
        iterations=int(head["iterations"]),
        population=int(head["population"]),
        stride=int(head["stride"]),
        target=head.get("target"),
        version=head.get("version", ""),
    )
    records = tuple(record_from_dict(json.loads(line)) for line in lines[1:])
    if not records:
        raise InvalidTraceError(f"{path}: trace has no records")
    probe = RunTrace(header, records, None, 0.0)
    return RunTrace(header, records, best_so_far(probe), 0.0)
