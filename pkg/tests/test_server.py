from __future__ import annotations

import json
import math
import threading
import time
import urllib.error
import urllib.request

import pytest

from qgraph.experiments import cycle_graph, get_config
from qgraph.graph import to_dict
from qgraph.server import make_server

PI = math.pi


@pytest.fixture
def server():
    srv = make_server(port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()


def call(srv, method, path, body=None):
    port = srv.server_address[1]
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        f"http://127.0.0.1:{port}{path}", data=data, method=method,
        headers={"Content-Type": "application/json"} if data else {})
    try:
        with urllib.request.urlopen(req, timeout=60) as resp:
            raw = resp.read()
            ctype = resp.headers.get("Content-Type", "")
            return resp.status, json.loads(raw) if "json" in ctype else raw.decode()
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


def wait_for(srv, predicate, timeout=120.0):
    t0 = time.time()
    while time.time() - t0 < timeout:
        status, state = call(srv, "GET", "/api/run/state")
        assert status == 200
        if predicate(state):
            return state
        time.sleep(0.2)
    raise AssertionError("timed out waiting for run state")


class TestGraphEndpoints:
    def test_get_before_put_is_404(self, server):
        assert call(server, "GET", "/api/graph")[0] == 404

    def test_put_then_get(self, server):
        status, _ = call(server, "PUT", "/api/graph", to_dict(cycle_graph(3)))
        assert status == 200
        status, got = call(server, "GET", "/api/graph")
        assert status == 200
        assert got["vertices"] == 3

    def test_put_invalid_graph_400(self, server):
        bad = {"vertices": 2, "edges": [{"u": 0, "v": 1, "len": -2.0}]}
        assert call(server, "PUT", "/api/graph", bad)[0] == 400


class TestComputeEndpoints:
    def test_dk_matches_cli_csv(self, server, tmp_path):
        call(server, "PUT", "/api/graph", to_dict(cycle_graph(3)))
        status, csv_text = call(
            server, "GET", f"/api/dk?k0=0&k1={4 * PI!r}&n=200&format=csv")
        assert status == 200
        from qgraph.cli import main
        from qgraph.graph import save_graph
        gpath = tmp_path / "t.json"
        save_graph(cycle_graph(3), gpath)
        out = tmp_path / "t.csv"
        assert main(["plot-dk", str(gpath), "--k-range", f"0:{4 * PI!r}:200",
                     "--out", str(out)]) == 0
        assert csv_text == out.read_text()

    def test_dk_json_has_dips(self, server):
        call(server, "PUT", "/api/graph", to_dict(cycle_graph(3)))
        status, data = call(server, "GET", f"/api/dk?k0=0&k1={4 * PI!r}&n=500")
        assert status == 200
        assert min(data["sigma_min"][1:]) < 1e-6
        assert len(data["k"]) == 501

    def test_dk_validation(self, server):
        call(server, "PUT", "/api/graph", to_dict(cycle_graph(3)))
        assert call(server, "GET", "/api/dk?k0=5&k1=1&n=100")[0] == 400

    def test_spectrum_endpoint(self, server):
        call(server, "PUT", "/api/graph", to_dict(cycle_graph(3)))
        status, data = call(server, "POST", "/api/spectrum", {"k_max": 20.0})
        assert status == 200
        ks = [r["k"] for r in data["roots"]]
        assert ks[0] == 0.0
        assert ks[1] == pytest.approx(2 * PI, abs=1e-8)
        assert data["roots"][1]["multiplicity"] == 2


class TestRunLifecycle:
    def test_zero_steps_rejected(self, server):
        cfg = get_config("exp1").to_dict()
        cfg["steps"] = 0
        assert call(server, "POST", "/api/run", cfg)[0] == 400

    def test_full_run_and_conflicts(self, server):
        cfg = get_config("exp5").to_dict()
        cfg["steps"] = 3
        assert call(server, "POST", "/api/run", cfg)[0] == 200
        assert call(server, "POST", "/api/run", cfg)[0] == 409
        state = wait_for(server, lambda s: s["state"] == "done")
        assert state["total_steps"] == 3
        assert call(server, "POST", "/api/run/pause")[0] == 409
        # cursor-based polling returns only the tail
        status, tail = call(server, "GET", "/api/run/state?cursor=2")
        assert [s["step"] for s in tail["steps"]] == [2]

    def test_goal_replacement_mid_run(self, server):
        cfg = get_config("exp5").to_dict()
        cfg["steps"] = 6
        assert call(server, "POST", "/api/run", cfg)[0] == 200
        time.sleep(1.0)
        assert call(server, "POST", "/api/run/pause")[0] == 200
        status, state = call(server, "GET", "/api/run/state")
        n_paused = state["total_steps"]
        assert state["state"] == "paused"
        assert call(server, "PUT", "/api/run/goal", {"type": "max_lambda1"})[0] == 200
        assert call(server, "POST", "/api/run/step")[0] == 200
        assert call(server, "POST", "/api/run/resume")[0] == 200
        state = wait_for(server, lambda s: s["state"] == "done")
        events = [e for e in state["events"] if e["type"] == "goal_change"]
        assert len(events) == 1
        assert events[0]["at_step"] == n_paused
        phases = [s["phase"] for s in state["steps"]]
        assert phases == sorted(phases)
        assert phases[-1] == 1
        # steps after the switch are scored under max_lambda1 (negative)
        post = [s["chosen_score"] for s in state["steps"] if s["phase"] == 1]
        assert all(v < 0 for v in post)

    def test_step_requires_paused(self, server):
        assert call(server, "POST", "/api/run/step")[0] == 409

    def test_stop_and_graph_conflict(self, server):
        cfg = get_config("exp5").to_dict()
        cfg["steps"] = 12
        call(server, "POST", "/api/run", cfg)
        time.sleep(0.5)
        # replacing the session graph mid-run is a conflicting transition
        assert call(server, "PUT", "/api/graph", to_dict(cycle_graph(3)))[0] == 409
        assert call(server, "POST", "/api/run/stop")[0] == 200
        status, state = call(server, "GET", "/api/run/state")
        assert state["state"] == "done"
