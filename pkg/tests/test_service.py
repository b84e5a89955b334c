import threading
import time

import pytest
import requests

import swarmbench as sb
from swarmbench import service as service_mod
from swarmbench.continuous import PsoParams
from swarmbench.core import RunConfig
from swarmbench.problems import builtin_problem, serialize_problem_xml

TERMINAL = {"done", "cancelled", "failed"}


@pytest.fixture
def server():
    srv = service_mod.make_server("127.0.0.1:0")
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    host, port = srv.server_address[:2]
    yield f"http://{host}:{port}"
    srv.shutdown()
    srv.service.shutdown()
    srv.server_close()
    thread.join(timeout=5)


@pytest.fixture
def single_worker_server():
    srv = service_mod.make_server("127.0.0.1:0", workers=1)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    host, port = srv.server_address[:2]
    yield f"http://{host}:{port}"
    srv.shutdown()
    srv.service.shutdown()
    srv.server_close()
    thread.join(timeout=5)


def _run_request(**overrides):
    body = {"algorithm": "pso", "problem_id": "sphere", "dimension": 2,
            "seed": 7, "iterations": 20, "population": 6}
    body.update(overrides)
    return body


def _wait_terminal(base, run_id, timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        body = requests.get(f"{base}/api/v1/runs/{run_id}").json()
        if body["status"] in TERMINAL:
            return body
        time.sleep(0.01)
    raise AssertionError(f"run {run_id} did not finish: {body['status']}")


# ---------------------------------------------------------------------------
# algorithms

def test_algorithms_schema(server):
    r = requests.get(f"{server}/api/v1/algorithms")
    assert r.status_code == 200
    algos = r.json()["algorithms"]
    assert [a["id"] for a in algos] == ["abc", "aco", "fa", "iwd", "pso"]
    pso = next(a for a in algos if a["id"] == "pso")
    assert [p["name"] for p in pso["params"]] == ["w", "c1", "c2", "vfrac"]
    assert pso["params"][0]["default"] == 0.7298
    assert requests.get(f"{server}/api/v1/algorithms").json() == r.json()


# ---------------------------------------------------------------------------
# problems

def test_problem_catalog_and_upload(server):
    r = requests.get(f"{server}/api/v1/problems")
    ids = [p["id"] for p in r.json()["problems"]]
    assert "sphere" in ids and "tsp-square4" in ids

    xml = serialize_problem_xml(builtin_problem("tsp-circle8"))
    r = requests.post(f"{server}/api/v1/problems", data=xml.encode(),
                      headers={"Content-Type": "application/xml"})
    assert r.status_code == 201
    new_id = r.json()["problem_id"]
    listed = requests.get(f"{server}/api/v1/problems").json()["problems"]
    entry = next(p for p in listed if p["id"] == new_id)
    assert entry["kind"] == "tour"
    assert entry["nodes"] == 8
    assert len(entry["cities"]) == 8


def test_problem_upload_rejects_invalid(server):
    bad = """<problem format-version="1"><name>x</name>
    <tsp><matrix n="3">0 1 2 9 0 1 2 1 0</matrix></tsp></problem>"""
    r = requests.post(f"{server}/api/v1/problems", data=bad.encode(),
                      headers={"Content-Type": "application/xml"})
    assert r.status_code == 422
    codes = [d["code"] for d in r.json()["diagnostics"]]
    assert "ASYMMETRIC_DISTANCE" in codes


def test_problem_upload_size_limit(server):
    huge = b"<problem>" + b" " * (1 << 20) + b"</problem>"
    r = requests.post(f"{server}/api/v1/problems", data=huge,
                      headers={"Content-Type": "application/xml"})
    assert r.status_code == 413


def test_problem_upload_content_type(server):
    r = requests.post(f"{server}/api/v1/problems", data=b"{}",
                      headers={"Content-Type": "application/json"})
    assert r.status_code == 415


# ---------------------------------------------------------------------------
# runs

def test_run_lifecycle_and_records(server):
    r = requests.post(f"{server}/api/v1/runs", json=_run_request())
    assert r.status_code == 202
    run_id = r.json()["run_id"]
    body = _wait_terminal(server, run_id)
    assert body["status"] == "done"
    assert body["total"] == 21  # iterations 0..20
    assert body["solution"]["value"] == body["records"][-1]["best"]
    assert body["request"]["algorithm"] == "pso"
    assert body["created"] <= body["started"] <= body["finished"]

    # same-seed in-process run must match exactly
    trace = sb.run(PsoParams(), builtin_problem("sphere", 2),
                   RunConfig(seed=7, iterations=20, population=6))
    assert [rec["best"] for rec in body["records"]] == \
           [rec.best for rec in trace.records]


def test_run_poll_from_cursor(server):
    run_id = requests.post(f"{server}/api/v1/runs",
                           json=_run_request()).json()["run_id"]
    body = _wait_terminal(server, run_id)
    total = body["total"]
    tail = requests.get(f"{server}/api/v1/runs/{run_id}?from={total - 3}").json()
    assert [r["iter"] for r in tail["records"]] == [18, 19, 20]
    empty = requests.get(f"{server}/api/v1/runs/{run_id}?from={total}").json()
    assert empty["records"] == []
    assert empty["status"] == "done"
    assert requests.get(f"{server}/api/v1/runs/{run_id}?from=-1").status_code == 400
    assert requests.get(f"{server}/api/v1/runs/{run_id}?from=zz").status_code == 400


def test_run_poll_monotone_while_running(server):
    body = _run_request(iterations=400000, stride=1000, population=4)
    run_id = requests.post(f"{server}/api/v1/runs", json=body).json()["run_id"]
    seen = []
    status = "pending"
    while status not in TERMINAL:
        got = requests.get(
            f"{server}/api/v1/runs/{run_id}?from={len(seen)}").json()
        status = got["status"]
        assert got["total"] >= len(seen)
        seen.extend(got["records"])
        time.sleep(0.005)
    iters = [r["iter"] for r in seen]
    assert iters == sorted(iters)
    assert len(set(iters)) == len(iters)
    assert status == "done"


def test_run_same_seed_same_result(server):
    ids = [requests.post(f"{server}/api/v1/runs",
                         json=_run_request()).json()["run_id"]
           for _ in range(2)]
    finals = [_wait_terminal(server, rid)["solution"]["value"] for rid in ids]
    assert finals[0] == finals[1]


def test_run_validation_errors(server):
    r = requests.post(f"{server}/api/v1/runs",
                      json=_run_request(algorithm="nope"))
    assert r.status_code == 404
    r = requests.post(f"{server}/api/v1/runs",
                      json=_run_request(problem_id="nope"))
    assert r.status_code == 404
    r = requests.post(f"{server}/api/v1/runs",
                      json=_run_request(algorithm="aco"))
    assert r.status_code == 422  # kind mismatch
    r = requests.post(f"{server}/api/v1/runs",
                      json=_run_request(params={"zeta": 1}))
    assert r.status_code == 422
    assert r.json()["field"] == "zeta"
    r = requests.post(f"{server}/api/v1/runs",
                      json=_run_request(params={"w": 9.0}))
    assert r.status_code == 422
    assert r.json()["field"] == "w"
    r = requests.post(f"{server}/api/v1/runs", json=_run_request(seed=-4))
    assert r.status_code == 422
    assert r.json()["field"] == "seed"
    r = requests.post(f"{server}/api/v1/runs",
                      json=_run_request(population="many"))
    assert r.status_code == 422
    assert requests.get(f"{server}/api/v1/runs/unknown").status_code == 404


def test_run_param_boundary_mirrors_schema(server):
    # rho is exclusive at both ends: 1.0 must be rejected, 0.999 accepted
    bad = _run_request(algorithm="aco", problem_id="tsp-square4",
                       params={"rho": 1.0}, population=4)
    bad.pop("dimension")
    r = requests.post(f"{server}/api/v1/runs", json=bad)
    assert r.status_code == 422
    good = _run_request(algorithm="aco", problem_id="tsp-square4",
                        params={"rho": 0.999}, iterations=3, population=4)
    good.pop("dimension")
    r = requests.post(f"{server}/api/v1/runs", json=good)
    assert r.status_code == 202
    _wait_terminal(server, r.json()["run_id"])


# ---------------------------------------------------------------------------
# cancellation

def test_cancel_pending_run(single_worker_server):
    base = single_worker_server
    blocker = _run_request(iterations=2000000, stride=1000000, population=4)
    requests.post(f"{base}/api/v1/runs", json=blocker)
    queued = requests.post(f"{base}/api/v1/runs",
                           json=_run_request()).json()["run_id"]
    state = requests.get(f"{base}/api/v1/runs/{queued}").json()["status"]
    assert state == "pending"
    r = requests.post(f"{base}/api/v1/runs/{queued}/cancel")
    assert r.status_code == 200
    assert r.json()["status"] == "cancelled"
    body = requests.get(f"{base}/api/v1/runs/{queued}").json()
    assert body["status"] == "cancelled"
    assert body["total"] == 0


def test_cancel_running_run(server):
    body = _run_request(iterations=5000000, stride=1000000, population=4)
    run_id = requests.post(f"{server}/api/v1/runs", json=body).json()["run_id"]
    deadline = time.time() + 10
    while time.time() < deadline:
        if requests.get(f"{server}/api/v1/runs/{run_id}").json()["status"] == "running":
            break
        time.sleep(0.005)
    r = requests.post(f"{server}/api/v1/runs/{run_id}/cancel")
    assert r.status_code == 200
    final = _wait_terminal(server, run_id)
    assert final["status"] == "cancelled"
    assert final["total"] >= 1  # partial trace retained


def test_cancel_finished_run_conflicts(server):
    run_id = requests.post(f"{server}/api/v1/runs",
                           json=_run_request(iterations=3)).json()["run_id"]
    _wait_terminal(server, run_id)
    r = requests.post(f"{server}/api/v1/runs/{run_id}/cancel")
    assert r.status_code == 409
    assert r.json()["status"] == "done"


def test_unknown_endpoints_are_404(server):
    assert requests.get(f"{server}/api/v1/nope").status_code == 404
    assert requests.post(f"{server}/api/v1/runs/x/other").status_code == 404
    assert requests.get(f"{server}/missing.html").status_code == 404


def test_static_serving(tmp_path):
    (tmp_path / "index.html").write_text("<html><body>bench</body></html>")
    (tmp_path / "app.js").write_text("console.log(1)")
    srv = service_mod.make_server("127.0.0.1:0", static_dir=tmp_path)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    host, port = srv.server_address[:2]
    base = f"http://{host}:{port}"
    try:
        r = requests.get(f"{base}/")
        assert r.status_code == 200
        assert "bench" in r.text
        assert requests.get(f"{base}/app.js").status_code == 200
        assert requests.get(f"{base}/../etc/passwd").status_code in (400, 404)
        # API still reachable with static configured
        assert requests.get(f"{base}/api/v1/algorithms").status_code == 200
    finally:
        srv.shutdown()
        srv.service.shutdown()
        srv.server_close()
        thread.join(timeout=5)
