"""Built-in graphs and evolution run configs.

Single source of truth shared by the CLI (`qgraph experiments`), the
acceptance suite and the docs.  All builders return equilateral graphs of
total length one.
"""

from __future__ import annotations

import math

from .evolution import MovePolicy, RunConfig
from .goals import (EigenvalueStop, MaximizeLambda1, MaximizeRatio,
                    MinimizeDistance, Program, ProgramPhase, TargetSpectrum)
from .graph import Edge, MetricGraph, normalize

PI2 = math.pi ** 2


def path_graph(n_vertices: int) -> MetricGraph:
    if n_vertices < 2:
        raise ValueError("a path needs at least two vertices")
    n = n_vertices - 1
    edges = tuple(Edge(i, i + 1, 1.0 / n) for i in range(n))
    return MetricGraph(n_vertices, edges)


def star_graph(arms: int) -> MetricGraph:
    edges = tuple(Edge(0, i + 1, 1.0 / arms) for i in range(arms))
    return MetricGraph(arms + 1, edges)


def cycle_graph(n_vertices: int) -> MetricGraph:
    edges = tuple(Edge(i, (i + 1) % n_vertices, 1.0 / n_vertices) for i in range(n_vertices))
    return MetricGraph(n_vertices, edges)


def complete_graph(m: int) -> MetricGraph:
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    edges = tuple(Edge(i, j, 1.0 / len(pairs)) for i, j in pairs)
    return MetricGraph(m, edges)


def grid_graph(rows: int, cols: int) -> MetricGraph:
    def vid(r: int, c: int) -> int:
        return r * cols + c

    pairs = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                pairs.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                pairs.append((vid(r, c), vid(r + 1, c)))
    edges = tuple(Edge(u, v, 1.0 / len(pairs)) for u, v in pairs)
    return MetricGraph(rows * cols, edges)


def dumbbell_graph(m: int) -> MetricGraph:
    """Two equilateral complete graphs K_m joined by a single bridge edge."""
    if m < 2:
        raise ValueError("dumbbell blocks need at least two vertices")
    pairs = []
    for base in (0, m):
        for i in range(m):
            for j in range(i + 1, m):
                pairs.append((base + i, base + j))
    pairs.append((0, m))
    edges = tuple(Edge(u, v, 1.0 / len(pairs)) for u, v in pairs)
    return MetricGraph(2 * m, edges)


def interval_graph() -> MetricGraph:
    return MetricGraph(2, (Edge(0, 1, 1.0),))


def pendant_triangle(c1: float = math.pi, c2: float = math.pi) -> MetricGraph:
    """Triangle with edges (c1, pi, c1) plus a pendant edge of length c2.

    With c1 = c2 = pi this normalizes to four edges of length 1/4; c2 = 0
    contracts the pendant away leaving an equilateral triangle.
    """
    edges = [Edge(0, 1, c1), Edge(1, 2, math.pi), Edge(2, 0, c1)]
    vertices = 3
    if c2 > 0:
        edges.append(Edge(0, 3, c2))
        vertices = 4
    return normalize(MetricGraph(vertices, tuple(edges)))


# ---------------------------------------------------------------------------
# Experiment run configs
# ---------------------------------------------------------------------------

def _target(values, space="lambda") -> MinimizeDistance:
    return MinimizeDistance(TargetSpectrum(tuple(values), space))


def exp1_config() -> RunConfig:
    """Path growth toward the leading interval eigenvalues."""
    return RunConfig(
        initial_graph=path_graph(3),
        goal=_target([0.0, PI2, 4 * PI2]),
        policy=MovePolicy(add_pendant=True, add_between=True),
        steps=8,
    )


def exp2_config() -> RunConfig:
    """Maximize the spectral gap by adding edges."""
    return RunConfig(
        initial_graph=path_graph(3),
        goal=MaximizeLambda1(),
        policy=MovePolicy(add_pendant=True, add_between=True),
        steps=12,
    )


def exp3_config() -> RunConfig:
    """Maximize lambda_2/lambda_1; dumbbell-like shapes emerge."""
    return RunConfig(
        initial_graph=path_graph(6),
        goal=MaximizeRatio(),
        policy=MovePolicy(add_pendant=True, add_between=True),
        steps=15,
    )


def exp4_config() -> RunConfig:
    """Alternate delete/add from a 2x3 grid, maximizing the gap.

    Deleting first keeps the edge count in {6, 7}, which is what lets the
    sequence settle on the complete graph K4 (6 edges) and then alternate.
    """
    return RunConfig(
        initial_graph=grid_graph(2, 3),
        goal=MaximizeLambda1(),
        policy=MovePolicy(add_pendant=True, add_between=True, delete_edge=True,
                          alternate=True, alternate_order=("delete", "add")),
        steps=24,
    )


def exp5_config() -> RunConfig:
    """Tree-restricted growth toward (0, (2pi)^2, (3pi)^2, (3pi)^2).

    The child-count length rule (new edge 1/(N+1)) is used here: it breaks
    equilaterality, which pendant-only growth would otherwise preserve, and
    that freedom is what lets 12 steps get close to the target.
    """
    return RunConfig(
        initial_graph=path_graph(5),
        goal=_target([0.0, 4 * PI2, 9 * PI2, 9 * PI2]),
        policy=MovePolicy(add_pendant=True, add_between=False, trees_only=True,
                          new_edge_length="child"),
        steps=12,
    )


def fig9_config() -> RunConfig:
    """Programmed growth: raise the gap past (5pi)^2, then chase a target."""
    phase1 = ProgramPhase(MaximizeLambda1(), EigenvalueStop(1, ">=", 25 * PI2))
    phase2 = ProgramPhase(_target([0.0, 25 * PI2, 225 * PI2]), None)
    return RunConfig(
        initial_graph=path_graph(3),
        goal=Program((phase1, phase2)),
        policy=MovePolicy(add_pendant=True, add_between=True),
        steps=22,
    )


EXPERIMENTS = {
    "exp1": exp1_config,
    "exp2": exp2_config,
    "exp3": exp3_config,
    "exp4": exp4_config,
    "exp5": exp5_config,
    "fig9": fig9_config,
}


def get_config(name: str) -> RunConfig:
    try:
        return EXPERIMENTS[name]()
    except KeyError:
        raise KeyError(f"unknown experiment {name!r}; available: {sorted(EXPERIMENTS)}") from None
