"""Spectrum-driven evolution: grow (or prune) a graph toward a spectral goal.

Each step enumerates every child reachable by the move policy, scores the
spectrum of each child under the active goal, and keeps the argmin.  Ties go
to the first candidate in canonical enumeration order (pendant moves by
vertex id, then vertex pairs lexicographically, then deletions by edge
index), which makes runs deterministic and replayable.

A new edge gets raw length 1/N with N the parent's edge count (configurable
to the child count), and every candidate is renormalized to total length one.
"""

from __future__ import annotations

import json
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .errors import (InsufficientRange, NoLegalMove, QGraphError, StepFailure,
                     ZeroGap)
from .goals import (Goal, Score, StepCountStop, as_phases, goal_from_dict,
                    goal_to_dict, required_eigen_count, score)
from .graph import (Edge, MetricGraph, canonical, from_dict, normalize,
                    require_run_ready, to_dict)
from .spectrum import RootSearchOptions, Spectrum, spectrum_with_count

# Spectra are computed with enough room for the UI's k-trajectories even when
# the goal itself needs fewer eigenvalues.
_MIN_EIGEN_COUNT = 5
_K_PREFIX_LEN = 8


@dataclass(frozen=True)
class MovePolicy:
    add_pendant: bool = True
    add_between: bool = True
    delete_edge: bool = False
    alternate: bool = False
    alternate_order: tuple[str, ...] = ("add", "delete")
    trees_only: bool = False
    allow_parallel: bool = True
    new_edge_length: str = "parent"  # 1/N with N = parent ("parent") or child ("child") edge count

    def __post_init__(self) -> None:
        if self.new_edge_length not in ("parent", "child"):
            raise ValueError("new_edge_length must be 'parent' or 'child'")
        if self.alternate:
            if sorted(self.alternate_order) != ["add", "delete"]:
                raise ValueError("alternate_order must contain 'add' and 'delete'")
        if not (self.add_pendant or self.add_between) and not self.alternate:
            if not self.delete_edge:
                raise ValueError("policy enables no moves")
            raise ValueError("at least one additive move is required outside alternate mode")

    def mode_for_step(self, index: int) -> Optional[str]:
        """'add'/'delete' restriction in alternate mode, else None (all moves)."""
        if not self.alternate:
            return None
        return self.alternate_order[index % len(self.alternate_order)]


def _new_length(policy: MovePolicy, parent_edges: int) -> float:
    n = parent_edges if policy.new_edge_length == "parent" else parent_edges + 1
    return 1.0 / n


def candidates(parent: MetricGraph, policy: MovePolicy,
               mode: Optional[str] = None) -> list[MetricGraph]:
    """Every legal child of the parent, renormalized, in canonical order.

    mode restricts to additive or delete moves (alternate stepping); None
    applies every move the policy enables.
    """
    require_run_ready(parent)
    out: list[MetricGraph] = []
    raw = _new_length(policy, parent.num_edges)
    add_ok = mode in (None, "add")
    del_ok = mode in (None, "delete") and policy.delete_edge

    if add_ok and policy.add_pendant:
        for v in range(parent.num_vertices):
            child = MetricGraph(parent.num_vertices + 1,
                                parent.edges + (Edge(v, parent.num_vertices, raw),),
                                parent.allow_loops)
            out.append(normalize(child))

    if add_ok and policy.add_between and not policy.trees_only:
        adjacent = {(min(e.u, e.v), max(e.u, e.v)) for e in parent.edges}
        for i in range(parent.num_vertices):
            for j in range(i + 1, parent.num_vertices):
                if (i, j) in adjacent and not policy.allow_parallel:
                    continue
                child = MetricGraph(parent.num_vertices,
                                    parent.edges + (Edge(i, j, raw),),
                                    parent.allow_loops)
                out.append(normalize(child))

    if del_ok:
        for drop in range(parent.num_edges):
            rest = parent.edges[:drop] + parent.edges[drop + 1:]
            if not rest:
                continue
            used = sorted({x for e in rest for x in (e.u, e.v)})
            relabel = {v: i for i, v in enumerate(used)}
            child = MetricGraph(len(used),
                                tuple(Edge(relabel[e.u], relabel[e.v], e.length) for e in rest),
                                parent.allow_loops)
            if not child.is_connected():
                continue
            out.append(normalize(child))

    if not out:
        raise NoLegalMove(f"policy yields no candidates for mode={mode!r}")
    return out


@dataclass(frozen=True)
class EvolutionStep:
    index: int
    parent: MetricGraph
    chosen: MetricGraph
    num_candidates: int
    candidate_scores: tuple[Optional[float], ...]
    chosen_index: int
    chosen_score: float
    k_prefix: tuple[float, ...]
    phase: int
    stop_triggered: bool = False
    warnings: tuple[str, ...] = ()
    chosen_spectrum: Optional[Spectrum] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "step": self.index,
            "phase": self.phase,
            "n_candidates": self.num_candidates,
            "candidate_scores": list(self.candidate_scores),
            "chosen_index": self.chosen_index,
            "chosen_score": self.chosen_score,
            "k_prefix": list(self.k_prefix),
            "stop_triggered": self.stop_triggered,
            "warnings": list(self.warnings),
            "parent": to_dict(self.parent),
            "chosen": to_dict(self.chosen),
        }


@dataclass(frozen=True)
class RunConfig:
    initial_graph: MetricGraph
    goal: Goal
    policy: MovePolicy = MovePolicy()
    steps: int = 10
    roots: RootSearchOptions = RootSearchOptions()
    seed: Optional[int] = None
    max_candidates: Optional[int] = None  # optional seeded subsampling cap

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError("max steps must be >= 1")

    def to_dict(self) -> dict:
        policy = {
            "moves": [name for name, on in (("pendant", self.policy.add_pendant),
                                            ("between", self.policy.add_between),
                                            ("delete", self.policy.delete_edge)) if on],
            "trees_only": self.policy.trees_only,
            "alternate": self.policy.alternate,
            "alternate_order": list(self.policy.alternate_order),
            "allow_parallel": self.policy.allow_parallel,
            "new_edge_length": self.policy.new_edge_length,
        }
        out = {
            "initial_graph": to_dict(self.initial_graph),
            "goal": goal_to_dict(self.goal),
            "policy": policy,
            "steps": self.steps,
            "roots": {"k_max_auto": True},
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.max_candidates is not None:
            out["max_candidates"] = self.max_candidates
        return out

    @staticmethod
    def from_dict(data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ValueError("run config must be a JSON object")
        for key in ("initial_graph", "goal", "steps"):
            if key not in data:
                raise ValueError(f"run config missing field {key!r}")
        pol = data.get("policy", {})
        moves = pol.get("moves", ["pendant", "between"])
        policy = MovePolicy(
            add_pendant="pendant" in moves,
            add_between="between" in moves,
            delete_edge="delete" in moves,
            alternate=bool(pol.get("alternate", False)),
            alternate_order=tuple(pol.get("alternate_order", ("add", "delete"))),
            trees_only=bool(pol.get("trees_only", False)),
            allow_parallel=bool(pol.get("allow_parallel", True)),
            new_edge_length=pol.get("new_edge_length", "parent"),
        )
        roots_data = data.get("roots", {})
        roots = RootSearchOptions()
        if isinstance(roots_data, dict) and not roots_data.get("k_max_auto", True):
            roots = replace(roots, k_max=float(roots_data["k_max"]))
        return RunConfig(
            initial_graph=from_dict(data["initial_graph"]),
            goal=goal_from_dict(data["goal"]),
            policy=policy,
            steps=int(data["steps"]),
            roots=roots,
            seed=data.get("seed"),
            max_candidates=data.get("max_candidates"),
        )


@dataclass
class RunLog:
    config: RunConfig
    steps: list[EvolutionStep] = field(default_factory=list)
    wall_ms: list[float] = field(default_factory=list)
    aborted: bool = False
    error: Optional[str] = None

    @property
    def final_graph(self) -> MetricGraph:
        return self.steps[-1].chosen if self.steps else self.config.initial_graph

    def chosen_sequence(self) -> list[MetricGraph]:
        return [s.chosen for s in self.steps]

    def to_jsonl(self, include_timing: bool = True) -> str:
        lines = [json.dumps({"config": self.config.to_dict()}, sort_keys=True)]
        for i, step in enumerate(self.steps):
            d = step.to_dict()
            if include_timing and i < len(self.wall_ms):
                d["wall_ms"] = self.wall_ms[i]
            lines.append(json.dumps(d, sort_keys=True))
        if self.aborted:
            lines.append(json.dumps({"aborted": True, "error": self.error}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def canonical_bytes(self) -> bytes:
        """Deterministic serialization (timing excluded) for replay checks."""
        return self.to_jsonl(include_timing=False).encode("utf-8")


def _spectrum_workers() -> int:
    raw = os.environ.get("QG_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _score_candidate(child: MetricGraph, goal: Goal, n_eigs: int,
                     opts: RootSearchOptions) -> tuple[Optional[Score], Optional[Spectrum], Optional[str]]:
    try:
        sp = spectrum_with_count(child, n_eigs, opts)
        return score(goal, sp), sp, None
    except (InsufficientRange, ZeroGap, QGraphError) as exc:
        return None, None, f"{type(exc).__name__}: {exc}"


def step(parent: MetricGraph, goal: Goal, policy: MovePolicy,
         opts: RootSearchOptions | None = None, *, index: int = 0, phase: int = 0,
         mode: Optional[str] = None,
         subsample: Optional[Callable[[int], list[int]]] = None) -> EvolutionStep:
    """Score every candidate child and keep the argmin (first on ties)."""
    opts = opts or RootSearchOptions()
    cands = candidates(parent, policy, mode)
    if subsample is not None and len(cands) > 0:
        keep = sorted(subsample(len(cands)))
        cands = [cands[i] for i in keep]
    n_eigs = max(required_eigen_count(goal), _MIN_EIGEN_COUNT)

    workers = _spectrum_workers()
    if workers > 1 and len(cands) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: _score_candidate(c, goal, n_eigs, opts), cands))
    else:
        results = [_score_candidate(c, goal, n_eigs, opts) for c in cands]

    notes = tuple(f"candidate {i}: {err}" for i, (_, _, err) in enumerate(results) if err)
    best_idx = -1
    best: Optional[Score] = None
    for i, (sc, _, _) in enumerate(results):
        if sc is not None and (best is None or sc.value < best.value):
            best, best_idx = sc, i
    if best is None:
        raise StepFailure(f"all {len(cands)} candidates failed: {'; '.join(notes)}")

    chosen = cands[best_idx]
    chosen_spec = results[best_idx][1]
    assert chosen_spec is not None
    return EvolutionStep(
        index=index,
        parent=parent,
        chosen=chosen,
        num_candidates=len(cands),
        candidate_scores=tuple(sc.value if sc is not None else None for sc, _, _ in results),
        chosen_index=best_idx,
        chosen_score=best.value,
        k_prefix=tuple(chosen_spec.k_values(_K_PREFIX_LEN)),
        phase=phase,
        warnings=notes,
        chosen_spectrum=chosen_spec,
    )


def run(config: RunConfig) -> RunLog:
    """Execute the whole evolution; the log replays to the same sequence."""
    g = normalize(config.initial_graph)
    require_run_ready(g)
    phases = as_phases(config.goal)
    log = RunLog(config=config)
    phase_idx = 0
    phase_steps = 0

    rng = None
    if config.max_candidates is not None:
        import numpy as np
        rng = np.random.default_rng(config.seed or 0)

    for i in range(config.steps):
        actual_phase = phases[phase_idx]
        mode = config.policy.mode_for_step(i)
        subsample = None
        if rng is not None:
            cap = config.max_candidates

            def subsample(n: int, _cap=cap, _rng=rng) -> list[int]:
                if n <= _cap:
                    return list(range(n))
                return list(_rng.choice(n, size=_cap, replace=False))

        t0 = time.perf_counter()
        try:
            st = step(g, actual_phase.goal, config.policy, config.roots,
                      index=i, phase=phase_idx, mode=mode, subsample=subsample)
        except (NoLegalMove, StepFailure) as exc:
            log.aborted = True
            log.error = f"{type(exc).__name__}: {exc}"
            warnings.warn(f"evolution aborted at step {i}: {exc}", stacklevel=2)
            return log
        wall = (time.perf_counter() - t0) * 1000.0

        phase_steps += 1
        switch = False
        if actual_phase.stop is not None and phase_idx + 1 < len(phases):
            if isinstance(actual_phase.stop, StepCountStop):
                switch = phase_steps >= actual_phase.stop.steps
            else:
                assert st.chosen_spectrum is not None
                try:
                    switch = actual_phase.stop.triggered(st.chosen_spectrum)
                except InsufficientRange:
                    switch = False
        if switch:
            st = replace(st, stop_triggered=True)
            phase_idx += 1
            phase_steps = 0

        log.steps.append(st)
        log.wall_ms.append(wall)
        g = st.chosen
    return log


# ---------------------------------------------------------------------------
# Cycle detection over the chosen-graph sequence
# ---------------------------------------------------------------------------

_LENGTH_ROUND = 1e-9


def _length_key(x: float) -> int:
    return int(round(x / _LENGTH_ROUND))


def _profiles(g: MetricGraph) -> list[tuple]:
    deg = g.degrees()
    prof: list[list[tuple[int, int]]] = [[] for _ in range(g.num_vertices)]
    for e in g.edges:
        key = _length_key(float(e.length))
        prof[e.u].append((key, deg[e.v]))
        prof[e.v].append((key, deg[e.u]))
    return [tuple(sorted(p)) for p in prof]


def are_isomorphic(g1: MetricGraph, g2: MetricGraph) -> bool:
    """Isomorphism of labeled multigraphs with lengths rounded to 1e-9."""
    if g1.num_vertices != g2.num_vertices or g1.num_edges != g2.num_edges:
        return False
    p1, p2 = _profiles(g1), _profiles(g2)
    if sorted(p1) != sorted(p2):
        return False

    def pair_counts(g: MetricGraph) -> dict:
        counts: dict = {}
        for e in g.edges:
            key = (min(e.u, e.v), max(e.u, e.v), _length_key(float(e.length)))
            counts[key] = counts.get(key, 0) + 1
        return counts

    adj2 = pair_counts(g2)

    # Backtracking assignment, most-constrained vertex first.
    order = sorted(range(g1.num_vertices), key=lambda v: (p1.count(p1[v]), v))
    cand = {v: [w for w in range(g2.num_vertices) if p2[w] == p1[v]] for v in order}

    incident: list[list[tuple[int, int]]] = [[] for _ in range(g1.num_vertices)]
    for e in g1.edges:
        key = _length_key(float(e.length))
        incident[e.u].append((e.v, key))
        incident[e.v].append((e.u, key))

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def countif(u2: int, v2: int, key: int) -> int:
        return adj2.get((min(u2, v2), max(u2, v2), key), 0)

    def consistent(v1: int, v2: int) -> bool:
        needed: dict[tuple[int, int], int] = {}
        for (w1, key) in incident[v1]:
            if w1 in mapping:
                needed[(mapping[w1], key)] = needed.get((mapping[w1], key), 0) + 1
        for (w2, key), n in needed.items():
            if countif(v2, w2, key) != n:
                return False
        return True

    def backtrack(pos: int) -> bool:
        if pos == len(order):
            return True
        v1 = order[pos]
        for v2 in cand[v1]:
            if v2 in used or not consistent(v1, v2):
                continue
            mapping[v1] = v2
            used.add(v2)
            if backtrack(pos + 1):
                return True
            del mapping[v1]
            used.discard(v2)
        return False

    return backtrack(0)


def detect_cycle(log: RunLog, score_tol: float = 1e-9) -> Optional[tuple[int, int]]:
    """First repetition (start, period) of isomorphic graphs with equal score."""
    seq = log.steps
    for j in range(1, len(seq)):
        for i in range(j):
            close = abs(seq[i].chosen_score - seq[j].chosen_score) \
                <= score_tol * (1.0 + abs(seq[j].chosen_score))
            if close and are_isomorphic(seq[i].chosen, seq[j].chosen):
                return (i, j - i)
    return None
