"""HTTP run service.

JSON API under /api/v1 plus optional static serving of the web bundle:

* GET  /api/v1/algorithms            parameter schemas, stable order
* GET  /api/v1/problems              builtin + uploaded problems
* POST /api/v1/problems              problem XML upload (<= 1 MiB)
* POST /api/v1/runs                  launch a run on the worker pool (202)
* GET  /api/v1/runs/{id}?from=K      status + records with index >= K
* POST /api/v1/runs/{id}/cancel      cancel pending or running run

Runs execute on a bounded thread pool (SWARMBENCH_WORKERS, default 4) and
live in memory only; terminal runs beyond the newest 100 are evicted
least-recently-polled first. Record lists are append-only, so successive
polls never lose data.
"""

from __future__ import annotations

import argparse
import json
import mimetypes
import os
import sys
import threading
import time
import uuid
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlsplit

from swarmbench import core, problems, traces
from swarmbench.core import ConfigurationError, RunConfig

MAX_PROBLEM_BYTES = 1 << 20
DEFAULT_LISTEN = "127.0.0.1:8750"
RUN_CAPACITY = 100

PENDING = "pending"
RUNNING = "running"
DONE = "done"
CANCELLED = "cancelled"
FAILED = "failed"
TERMINAL = frozenset({DONE, CANCELLED, FAILED})


class ApiError(Exception):
    def __init__(self, status, body):
        self.status = status
        self.body = body
        super().__init__(str(body))


def _error(code, message, **extra):
    return ApiError(code, {"error": message, **extra})


class ServiceRun:
    __slots__ = ("run_id", "request", "status", "records", "solution",
                 "error", "created", "started", "finished",
                 "cancel_requested")

    def __init__(self, run_id, request):
        self.run_id = run_id
        self.request = request
        self.status = PENDING
        self.records = []
        self.solution = None
        self.error = None
        self.created = time.time()
        self.started = None
        self.finished = None
        self.cancel_requested = False


def algorithm_schemas():
    out = []
    for algo_id in core.algorithm_ids():
        info = core.algorithm_info(algo_id)
        out.append({
            "id": algo_id,
            "kind": info.space_kind,
            "params": [{
                "name": f.name,
                "type": f.type,
                "default": f.default,
                "min": f.min,
                "max": f.max,
                "exclusive_min": f.exclusive_min,
                "exclusive_max": f.exclusive_max,
                "description": f.description,
            } for f in info.fields],
        })
    return out


def _problem_entry(problem_id, problem, builtin):
    space = problem.space
    entry = {"id": problem_id, "name": problem.name,
             "kind": space.kind, "builtin": builtin}
    if space.kind == "continuous":
        if builtin:
            entry["default_dimension"] = problems.DEFAULT_DIMENSION
            bound = problems.CONTINUOUS_BOUNDS[problem_id]
            entry["bounds"] = [-bound, bound]
        else:
            entry["dimension"] = space.dimension
            entry["bounds"] = [float(space.lower[0]), float(space.upper[0])]
    else:
        entry["nodes"] = space.n
        entry["cities"] = ([list(pt) for pt in space.coords]
                          if space.coords is not None else None)
    return entry


class SwarmService:
    """In-memory application state shared by the request handlers."""

    def __init__(self, workers=None, capacity=RUN_CAPACITY):
        if workers is None:
            workers = int(os.environ.get("SWARMBENCH_WORKERS", "4"))
        self.workers = workers
        self.capacity = capacity
        self.pool = ThreadPoolExecutor(max_workers=workers,
                                       thread_name_prefix="swarm-run")
        self.lock = threading.RLock()
        self.runs: OrderedDict[str, ServiceRun] = OrderedDict()
        self.uploaded: dict[str, object] = {}

    # -- problems ----------------------------------------------------------

    def list_problems(self):
        entries = [_problem_entry(pid, problems.builtin_problem(pid), True)
                   for pid in problems.builtin_ids()]
        with self.lock:
            extra = list(self.uploaded.items())
        entries.extend(_problem_entry(pid, prob, False)
                       for pid, prob in extra)
        return entries

    def add_problem(self, xml_bytes):
        if len(xml_bytes) > MAX_PROBLEM_BYTES:
            raise _error(413, "problem file exceeds 1 MiB")
        try:
            problem = problems.parse_problem_xml(xml_bytes)
        except problems.ProblemFormatError as exc:
            raise _error(422, "problem file rejected",
                         diagnostics=[{"code": d.code, "message": d.message}
                                      for d in exc.diagnostics])
        problem_id = "p-" + uuid.uuid4().hex[:10]
        with self.lock:
            self.uploaded[problem_id] = problem
        return problem_id

    def _resolve_problem(self, problem_id, dimension):
        with self.lock:
            uploaded = self.uploaded.get(problem_id)
        if uploaded is not None:
            if dimension is not None:
                raise _error(422, "dimension applies to builtin continuous "
                                  "problems only", field="dimension")
            return uploaded
        try:
            return problems.builtin_problem(problem_id, dimension)
        except problems.UnknownProblemError as exc:
            if problem_id in problems.builtin_ids():
                raise _error(422, str(exc), field="dimension")
            raise _error(404, str(exc))

    # -- runs --------------------------------------------------------------

    def _validate_params(self, info, raw):
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise _error(422, "params must be an object", field="params")
        valid = {f.name: f for f in info.fields}
        kwargs = {}
        for name, value in raw.items():
            field = valid.get(name)
            if field is None:
                raise _error(422, f"unknown parameter {name!r} for {info.id}",
                             field=name)
            if field.type == "int":
                if not isinstance(value, int) or isinstance(value, bool):
                    raise _error(422, f"{name} must be an integer", field=name)
            else:
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise _error(422, f"{name} must be a number", field=name)
                value = float(value)
            if field.min is not None:
                if value < field.min or (field.exclusive_min and value == field.min):
                    raise _error(422, f"{name} below allowed range", field=name)
            if field.max is not None:
                if value > field.max or (field.exclusive_max and value == field.max):
                    raise _error(422, f"{name} above allowed range", field=name)
            kwargs[name] = value
        try:
            return info.params_type(**kwargs)
        except ConfigurationError as exc:
            raise _error(422, str(exc), field=next(iter(kwargs), "params"))

    @staticmethod
    def _require_int(payload, name, minimum=None, maximum=None):
        value = payload.get(name)
        if not isinstance(value, int) or isinstance(value, bool):
            raise _error(422, f"{name} must be an integer", field=name)
        if minimum is not None and value < minimum:
            raise _error(422, f"{name} must be >= {minimum}", field=name)
        if maximum is not None and value > maximum:
            raise _error(422, f"{name} must be <= {maximum}", field=name)
        return value

    def create_run(self, payload):
        if not isinstance(payload, dict):
            raise _error(422, "request body must be a JSON object")
        algorithm = payload.get("algorithm")
        if not isinstance(algorithm, str):
            raise _error(422, "algorithm must be a string", field="algorithm")
        try:
            info = core.algorithm_info(algorithm)
        except ConfigurationError as exc:
            raise _error(404, str(exc))
        problem_id = payload.get("problem_id")
        if not isinstance(problem_id, str):
            raise _error(422, "problem_id must be a string", field="problem_id")
        dimension = payload.get("dimension")
        if dimension is not None:
            dimension = self._require_int(payload, "dimension", minimum=1)
        problem = self._resolve_problem(problem_id, dimension)
        if info.space_kind != problem.space.kind:
            raise _error(422, f"{algorithm} runs on {info.space_kind} "
                              f"problems but {problem_id} is "
                              f"{problem.space.kind}", field="algorithm")

        params = self._validate_params(info, payload.get("params"))
        seed = self._require_int(payload, "seed", minimum=0,
                                 maximum=2 ** 64 - 1)
        iterations = self._require_int(payload, "iterations", minimum=1)
        population = self._require_int(payload, "population", minimum=2)
        stride = payload.get("stride")
        if stride is None:
            stride = 1
        else:
            stride = self._require_int({"stride": stride}, "stride", minimum=1)
        target = payload.get("target")
        if target is not None and (isinstance(target, bool)
                                   or not isinstance(target, (int, float))):
            raise _error(422, "target must be a number", field="target")
        try:
            config = RunConfig(seed=seed, iterations=iterations,
                               population=population,
                               target=None if target is None else float(target),
                               stride=stride)
            info.factory(params, problem, config)  # pre-flight checks
        except ConfigurationError as exc:
            raise _error(422, str(exc), field="config")

        run_id = "r-" + uuid.uuid4().hex[:10]
        echo = {"algorithm": algorithm, "problem_id": problem_id,
                "dimension": dimension,
                "params": core.params_echo(params),
                "seed": seed, "iterations": iterations,
                "population": population, "stride": stride, "target": target}
        record = ServiceRun(run_id, echo)
        with self.lock:
            self.runs[run_id] = record
            self._evict_locked()
        self.pool.submit(self._execute, record, params, problem, config)
        return run_id

    def _evict_locked(self):
        while len(self.runs) > self.capacity:
            victim = None
            for run_id, rec in self.runs.items():
                if rec.status in TERMINAL:
                    victim = run_id
                    break
            if victim is None:
                break  # everything is live; allow temporary overflow
            del self.runs[victim]

    def _execute(self, record, params, problem, config):
        with self.lock:
            if record.status != PENDING:
                return  # cancelled while queued
            record.status = RUNNING
            record.started = time.time()

        def observer(rec):
            row = traces.record_dict(rec)
            with self.lock:
                record.records.append(row)

        def should_stop():
            return record.cancel_requested

        try:
            trace = core.run(params, problem, config,
                             observer=observer, should_stop=should_stop)
        except Exception as exc:  # surfaced to the client as status=failed
            with self.lock:
                record.status = FAILED
                record.error = f"{type(exc).__name__}: {exc}"
                record.finished = time.time()
            return
        with self.lock:
            record.status = (CANCELLED if trace.stop_reason == "cancelled"
                             else DONE)
            sol = trace.solution
            record.solution = {"value": sol.value,
                               "candidate": list(sol.candidate),
                               "first_attained": sol.first_attained}
            record.finished = time.time()

    def _get_run(self, run_id):
        with self.lock:
            record = self.runs.get(run_id)
            if record is None:
                raise _error(404, f"unknown run {run_id!r}")
            self.runs.move_to_end(run_id)
            return record

    def poll_run(self, run_id, start):
        record = self._get_run(run_id)
        if start < 0:
            raise _error(400, "from must be >= 0")
        with self.lock:
            return {
                "run_id": run_id,
                "status": record.status,
                "from": start,
                "total": len(record.records),
                "records": record.records[start:],
                "solution": record.solution,
                "error": record.error,
                "request": record.request,
                "created": record.created,
                "started": record.started,
                "finished": record.finished,
            }

    def cancel_run(self, run_id):
        record = self._get_run(run_id)
        with self.lock:
            if record.status in TERMINAL:
                raise _error(409, "run already finished",
                             status=record.status)
            if record.status == PENDING:
                record.status = CANCELLED
                record.finished = time.time()
            else:
                record.cancel_requested = True
            return {"run_id": run_id, "status": record.status}

    def shutdown(self):
        with self.lock:
            for record in self.runs.values():
                record.cancel_requested = True
        self.pool.shutdown(wait=True, cancel_futures=True)


class Handler(BaseHTTPRequestHandler):
    server_version = "swarmbench/" + core.ENGINE_VERSION
    protocol_version = "HTTP/1.1"

    @property
    def service(self):
        return self.server.service

    def log_message(self, fmt, *args):  # quiet by default
        if self.server.verbose:
            sys.stderr.write("%s - %s\n" % (self.address_string(),
                                            fmt % args))

    def _send_json(self, status, body):
        data = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _read_body(self, limit=None):
        try:
            length = int(self.headers.get("Content-Length", "0") or "0")
        except ValueError:
            raise _error(400, "bad Content-Length header")
        if limit is not None and length > limit:
            # refuse without draining; the connection cannot be reused
            self.close_connection = True
            self.rfile.read(min(length, limit + 1))
            raise _error(413, "request body too large")
        return self.rfile.read(length)

    def _json_body(self):
        raw = self._read_body()
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise _error(400, "request body is not valid JSON")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        try:
            url = urlsplit(self.path)
            parts = [p for p in url.path.split("/") if p]
            if parts[:2] == ["api", "v1"]:
                self._api_get(parts[2:], parse_qs(url.query))
            else:
                self._static(url.path)
        except ApiError as exc:
            self._send_json(exc.status, exc.body)

    def do_POST(self):
        try:
            url = urlsplit(self.path)
            parts = [p for p in url.path.split("/") if p]
            if parts[:2] != ["api", "v1"]:
                raise _error(404, "not found")
            self._api_post(parts[2:])
        except ApiError as exc:
            self._send_json(exc.status, exc.body)

    def _api_get(self, parts, query):
        if parts == ["algorithms"]:
            self._send_json(200, {"algorithms": algorithm_schemas()})
        elif parts == ["problems"]:
            self._send_json(200, {"problems": self.service.list_problems()})
        elif len(parts) == 2 and parts[0] == "runs":
            raw = query.get("from", ["0"])[0]
            try:
                start = int(raw)
            except ValueError:
                raise _error(400, "from must be an integer")
            self._send_json(200, self.service.poll_run(parts[1], start))
        else:
            raise _error(404, "not found")

    def _api_post(self, parts):
        if parts == ["problems"]:
            ctype = (self.headers.get("Content-Type") or "").split(";")[0].strip()
            if ctype and ctype not in ("application/xml", "text/xml",
                                       "application/octet-stream"):
                raise _error(415, "problem uploads take XML "
                                  "(application/xml)")
            body = self._read_body(limit=MAX_PROBLEM_BYTES)
            problem_id = self.service.add_problem(body)
            self._send_json(201, {"problem_id": problem_id})
        elif parts == ["runs"]:
            run_id = self.service.create_run(self._json_body())
            self._send_json(202, {"run_id": run_id})
        elif len(parts) == 3 and parts[0] == "runs" and parts[2] == "cancel":
            self._send_json(200, self.service.cancel_run(parts[1]))
        else:
            raise _error(404, "not found")

    def _static(self, raw_path):
        root = self.server.static_dir
        if root is None:
            raise _error(404, "not found (no static bundle configured)")
        rel = unquote(raw_path).lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if not str(target).startswith(str(root.resolve())):
            raise _error(404, "not found")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            raise _error(404, "not found")
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def make_server(listen=DEFAULT_LISTEN, workers=None, static_dir=None,
                verbose=False):
    host, _, port = listen.rpartition(":")
    server = ThreadingHTTPServer((host or "127.0.0.1", int(port)), Handler)
    server.daemon_threads = True
    server.service = SwarmService(workers=workers)
    server.static_dir = Path(static_dir) if static_dir else None
    server.verbose = verbose
    return server


def _default_static():
    env = os.environ.get("SWARMBENCH_STATIC")
    if env:
        return env
    candidate = Path("frontend") / "dist"
    return str(candidate) if candidate.is_dir() else None


def main(argv=None):
    parser = argparse.ArgumentParser(prog="swarmbench-serve")
    parser.add_argument("--listen", default=DEFAULT_LISTEN,
                        metavar="HOST:PORT")
    parser.add_argument("--workers", type=int, default=None,
                        help="run worker threads (default "
                             "$SWARMBENCH_WORKERS or 4)")
    parser.add_argument("--static", default=None,
                        help="directory with the web bundle to serve at /")
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)
    static_dir = args.static if args.static is not None else _default_static()
    server = make_server(args.listen, args.workers, static_dir, args.verbose)
    host, port = server.server_address[:2]
    sys.stderr.write(f"swarmbench service on http://{host}:{port}/ "
                     f"(workers={server.service.workers}, "
                     f"static={static_dir or 'none'})\n")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.service.shutdown()
        server.server_close()
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
