"""HTTP/JSON service consumed by the web UI (stdlib only).

One evolution run per session.  State machine: idle -> running -> paused ->
done, with goal replacement applied only at step boundaries; conflicting
transitions answer 409.  Handlers never block on a whole run: a worker thread
advances the run one step at a time and every query polls current state.
"""

from __future__ import annotations

import json
import math
import threading
import traceback
from dataclasses import replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .errors import NoLegalMove, QGraphError, StepFailure
from .evolution import EvolutionStep, RunConfig
from .evolution import step as evolution_step
from .goals import Goal, ProgramPhase, StepCountStop, as_phases, goal_from_dict
from .graph import MetricGraph, bind, from_dict, normalize, to_dict, validate
from .secular import SecularEvaluator, plot_samples
from .spectrum import RootSearchOptions, compute_spectrum

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".json": "application/json",
}


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


class RunSession:
    """Session graph plus at most one evolution run."""

    def __init__(self) -> None:
        self.lock = threading.RLock()
        self.graph: MetricGraph | None = None
        self._reset_run()

    def _reset_run(self) -> None:
        self.state = "idle"
        self.config: RunConfig | None = None
        self.phases: list[ProgramPhase] = []
        self.phase_idx = 0
        self.phase_steps = 0
        self.steps: list[EvolutionStep] = []
        self.events: list[dict] = []
        self.current: MetricGraph | None = None
        self.pending_goal: Goal | None = None
        self.error: str | None = None
        self._worker: threading.Thread | None = None
        self._pause_requested = False

    # -- graph ------------------------------------------------------------

    def set_graph(self, g: MetricGraph) -> None:
        with self.lock:
            if self.state in ("running", "paused"):
                raise ApiError(409, "a run is active; stop it before replacing the graph")
            bad = validate(g)
            hard = [v for v in bad if v.code != "Disconnected"]
            if hard:
                raise ApiError(400, "; ".join(str(v) for v in hard))
            self.graph = g
            self._reset_run()

    def bound_graph(self, binding: dict[str, float]) -> MetricGraph:
        with self.lock:
            if self.graph is None:
                raise ApiError(404, "no graph loaded")
            g = self.graph
        try:
            g = normalize(bind(g, binding, allow_zero=True))
        except QGraphError as exc:
            raise ApiError(400, str(exc)) from None
        bad = validate(g)
        if bad:
            raise ApiError(400, "; ".join(str(v) for v in bad))
        return g

    # -- run lifecycle ------------------------------------------------------

    def start(self, config: RunConfig) -> None:
        with self.lock:
            if self.state in ("running", "paused"):
                raise ApiError(409, f"run already {self.state}")
            self._reset_run()
            self.config = config
            self.phases = list(as_phases(config.goal))
            self.current = normalize(config.initial_graph)
            self.state = "running"
            self._launch_worker()

    def _launch_worker(self) -> None:
        self._worker = threading.Thread(target=self._run_loop, daemon=True)
        self._worker.start()

    def _run_loop(self) -> None:
        while True:
            with self.lock:
                if self.state != "running":
                    return
                if self._pause_requested:
                    self._pause_requested = False
                    self.state = "paused"
                    return
                if len(self.steps) >= self.config.steps:
                    self.state = "done"
                    return
            try:
                self._advance_one()
            except ApiError:
                return

    def _advance_one(self) -> None:
        """Execute exactly one step at the current boundary."""
        with self.lock:
            if self.config is None or self.current is None:
                raise ApiError(409, "no run configured")
            if len(self.steps) >= self.config.steps:
                self.state = "done"
                raise ApiError(409, "run already finished")
            if self.pending_goal is not None:
                # The replacement becomes a fresh phase; stops of earlier
                # phases are never evaluated again.
                self.phases = self.phases[:self.phase_idx + 1]
                self.phases.append(ProgramPhase(self.pending_goal, None))
                self.phase_idx += 1
                self.phase_steps = 0
                self.events.append({"type": "goal_change", "at_step": len(self.steps),
                                    "phase": self.phase_idx})
                self.pending_goal = None
            index = len(self.steps)
            phase = self.phases[self.phase_idx]
            parent = self.current
            mode = self.config.policy.mode_for_step(index)
            config = self.config
            phase_idx = self.phase_idx

        try:
            st = evolution_step(parent, phase.goal, config.policy, config.roots,
                                index=index, phase=phase_idx, mode=mode)
        except (NoLegalMove, StepFailure) as exc:
            with self.lock:
                self.state = "done"
                self.error = f"{type(exc).__name__}: {exc}"
            raise ApiError(409, self.error) from None

        with self.lock:
            self.phase_steps += 1
            switch = False
            if phase.stop is not None and self.phase_idx + 1 < len(self.phases):
                if isinstance(phase.stop, StepCountStop):
                    switch = self.phase_steps >= phase.stop.steps
                else:
                    try:
                        switch = phase.stop.triggered(st.chosen_spectrum)
                    except QGraphError:
                        switch = False
            if switch:
                st = replace(st, stop_triggered=True)
                self.phase_idx += 1
                self.phase_steps = 0
                self.events.append({"type": "phase_switch", "at_step": index + 1,
                                    "phase": self.phase_idx})
            self.steps.append(st)
            self.current = st.chosen
            if len(self.steps) >= self.config.steps:
                self.state = "done"

    def pause(self) -> None:
        with self.lock:
            if self.state != "running":
                raise ApiError(409, f"cannot pause a {self.state} run")
            self._pause_requested = True
        if self._worker is not None:
            self._worker.join(timeout=300)
        with self.lock:
            if self.state == "running":  # worker died without pausing
                self.state = "paused"

    def resume(self) -> None:
        with self.lock:
            if self.state != "paused":
                raise ApiError(409, f"cannot resume a {self.state} run")
            self.state = "running"
            self._launch_worker()

    def single_step(self) -> None:
        with self.lock:
            if self.state != "paused":
                raise ApiError(409, f"single-step requires a paused run, not {self.state}")
        self._advance_one()

    def stop(self) -> None:
        with self.lock:
            if self.state not in ("running", "paused"):
                raise ApiError(409, f"cannot stop a {self.state} run")
            self.state = "done"
        if self._worker is not None:
            self._worker.join(timeout=300)

    def replace_goal(self, goal: Goal) -> None:
        with self.lock:
            if self.state not in ("running", "paused"):
                raise ApiError(409, f"cannot replace the goal of a {self.state} run")
            self.pending_goal = goal

    def state_payload(self, cursor: int) -> dict:
        with self.lock:
            steps = [s.to_dict() for s in self.steps[cursor:]]
            payload = {
                "state": self.state,
                "phase": self.phase_idx,
                "total_steps": len(self.steps),
                "configured_steps": self.config.steps if self.config else 0,
                "cursor": cursor,
                "steps": steps,
                "events": list(self.events),
                "error": self.error,
            }
            if self.current is not None:
                payload["current_graph"] = to_dict(self.current)
            return payload


def _parse_binding_param(text: str) -> dict[str, float]:
    binding: dict[str, float] = {}
    if not text:
        return binding
    for part in text.split(","):
        if not part:
            continue
        name, _, value = part.partition("=")
        try:
            binding[name.strip()] = float(value)
        except ValueError:
            raise ApiError(400, f"bad binding entry {part!r}") from None
    return binding


def make_handler(session: RunSession, static_dir: Path | None):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        # -- plumbing ----------------------------------------------------

        def _send(self, status: int, body: bytes, content_type: str) -> None:
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _json(self, status: int, payload) -> None:
            self._send(status, (json.dumps(payload) + "\n").encode("utf-8"),
                       "application/json")

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            raw = self.rfile.read(length)
            try:
                data = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ApiError(400, f"invalid JSON body: {exc.msg}") from None
            if not isinstance(data, dict):
                raise ApiError(400, "body must be a JSON object")
            return data

        def _dispatch(self, method: str) -> None:
            url = urlparse(self.path)
            try:
                handled = self._route(method, url.path, parse_qs(url.query))
            except ApiError as exc:
                self._json(exc.status, {"error": str(exc)})
                return
            except QGraphError as exc:
                self._json(400, {"error": str(exc)})
                return
            except Exception:  # pragma: no cover - last resort
                self._json(500, {"error": traceback.format_exc(limit=3)})
                return
            if not handled:
                self._json(404, {"error": f"no route for {method} {url.path}"})

        def do_GET(self) -> None:
            self._dispatch("GET")

        def do_POST(self) -> None:
            self._dispatch("POST")

        def do_PUT(self) -> None:
            self._dispatch("PUT")

        # -- routes --------------------------------------------------------

        def _route(self, method: str, path: str, query: dict) -> bool:
            if path == "/api/graph" and method == "GET":
                with session.lock:
                    g = session.graph
                if g is None:
                    raise ApiError(404, "no graph loaded")
                self._json(200, to_dict(g))
                return True
            if path == "/api/graph" and method == "PUT":
                session.set_graph(from_dict(self._body()))
                self._json(200, {"ok": True})
                return True
            if path == "/api/dk" and method == "GET":
                return self._handle_dk(query)
            if path == "/api/spectrum" and method == "POST":
                return self._handle_spectrum(self._body())
            if path == "/api/run" and method == "POST":
                return self._handle_run_start(self._body())
            if path == "/api/run/state" and method == "GET":
                cursor = int(query.get("cursor", ["0"])[0])
                self._json(200, session.state_payload(cursor))
                return True
            if path == "/api/run/goal" and method == "PUT":
                session.replace_goal(goal_from_dict(self._body()))
                self._json(200, {"ok": True})
                return True
            if path == "/api/run/step" and method == "POST":
                session.single_step()
                self._json(200, session.state_payload(max(0, len(session.steps) - 1)))
                return True
            if path == "/api/run/pause" and method == "POST":
                session.pause()
                self._json(200, {"state": session.state})
                return True
            if path == "/api/run/resume" and method == "POST":
                session.resume()
                self._json(200, {"state": session.state})
                return True
            if path == "/api/run/stop" and method == "POST":
                session.stop()
                self._json(200, {"state": session.state})
                return True
            if method == "GET":
                return self._static(path)
            return False

        def _handle_dk(self, query: dict) -> bool:
            binding = _parse_binding_param(query.get("bind", [""])[0])
            try:
                k0 = float(query.get("k0", ["0.0"])[0])
                k1 = float(query.get("k1", [repr(4 * math.pi)])[0])
                n = int(query.get("n", ["1000"])[0])
            except ValueError:
                raise ApiError(400, "k0/k1/n must be numbers") from None
            if n < 2 or n > 200_000 or not k1 > k0:
                raise ApiError(400, "need k1 > k0 and 2 <= n <= 200000")
            g = session.bound_graph(binding)
            # n counts intervals, matching the CLI's a:b:n convention.
            samples = plot_samples(SecularEvaluator(g), k0, k1, n + 1)
            if query.get("format", ["json"])[0] == "csv":
                import io

                from .secular import write_plot_csv
                buf = io.StringIO()
                write_plot_csv(buf, samples)
                self._send(200, buf.getvalue().encode("utf-8"), "text/csv; charset=utf-8")
            else:
                self._json(200, {
                    "k": [float(x) for x in samples["k"]],
                    "sigma_min": [float(x) for x in samples["sigma_min"]],
                    "re_det": [float(x) for x in samples["re_det"]],
                    "im_det": [float(x) for x in samples["im_det"]],
                })
            return True

        def _handle_spectrum(self, body: dict) -> bool:
            binding = {str(k): float(v) for k, v in (body.get("bind") or {}).items()}
            g = session.bound_graph(binding)
            opts = RootSearchOptions(k_max=float(body.get("k_max", 12 * math.pi)))
            mode = body.get("mode", "auto")
            if mode not in ("auto", "scan", "rational"):
                raise ApiError(400, f"unknown mode {mode!r}")
            spec = compute_spectrum(g, opts, mode=mode)
            self._json(200, {"mode": spec.mode, "k_max": spec.k_max,
                             "roots": [{"k": k, "multiplicity": m, "lambda": k * k}
                                       for k, m in zip(spec.ks, spec.mults)]})
            return True

        def _handle_run_start(self, body: dict) -> bool:
            if "initial_graph" not in body:
                with session.lock:
                    if session.graph is None:
                        raise ApiError(400, "no initial_graph and no session graph")
                    body = dict(body)
                    body["initial_graph"] = to_dict(session.graph)
            try:
                config = RunConfig.from_dict(body)
            except (ValueError, KeyError) as exc:
                raise ApiError(400, f"bad run config: {exc}") from None
            session.start(config)
            self._json(200, {"state": "running", "configured_steps": config.steps})
            return True

        def _static(self, path: str) -> bool:
            if static_dir is None:
                return False
            rel = path.lstrip("/") or "index.html"
            target = (static_dir / rel).resolve()
            try:
                target.relative_to(static_dir.resolve())
            except ValueError:
                raise ApiError(403, "path escapes static root") from None
            if not target.is_file():
                return False
            ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
            self._send(200, target.read_bytes(), ctype)
            return True

    return Handler


def make_server(host: str = "127.0.0.1", port: int = 8077,
                static_dir: str | Path | None = None) -> ThreadingHTTPServer:
    session = RunSession()
    handler = make_handler(session, Path(static_dir) if static_dir else None)
    server = ThreadingHTTPServer((host, port), handler)
    server.session = session  # type: ignore[attr-defined]
    return server


def serve(host: str = "127.0.0.1", port: int = 8077,
          static_dir: str | Path | None = None) -> None:
    server = make_server(host, port, static_dir)
    print(f"qgraph service on http://{host}:{server.server_address[1]}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:  # pragma: no cover
        pass
    finally:
        server.server_close()
