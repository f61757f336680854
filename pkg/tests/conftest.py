from __future__ import annotations

import math

import numpy as np
import pytest

from qgraph.experiments import (cycle_graph, dumbbell_graph, grid_graph,
                                interval_graph, path_graph, pendant_triangle,
                                star_graph)
from qgraph.graph import Edge, MetricGraph, normalize


@pytest.fixture
def interval() -> MetricGraph:
    return normalize(interval_graph())


@pytest.fixture
def triangle() -> MetricGraph:
    return cycle_graph(3)


@pytest.fixture
def star3() -> MetricGraph:
    return star_graph(3)


@pytest.fixture
def pendant_tri() -> MetricGraph:
    """Triangle with a pendant edge, all four edges 1/4 after normalization."""
    return pendant_triangle()


def random_connected_graph(rng: np.random.Generator, max_vertices: int = 5,
                           max_edges: int = 7) -> MetricGraph:
    """Seeded random multigraph with rational lengths (denominators <= 12)."""
    m = int(rng.integers(2, max_vertices + 1))
    edges = []

    def rational_length() -> float:
        den = int(rng.integers(2, 13))
        num = int(rng.integers(max(1, den // 4), den + 1))
        return num / den

    order = [int(x) for x in rng.permutation(m)]
    for i in range(1, m):
        u = order[int(rng.integers(0, i))]
        edges.append(Edge(min(u, order[i]), max(u, order[i]), rational_length()))
    extra = int(rng.integers(0, max_edges - len(edges) + 1))
    for _ in range(extra):
        u, v = rng.integers(0, m, size=2)
        if u == v:
            continue
        edges.append(Edge(min(int(u), int(v)), max(int(u), int(v)), rational_length()))
    return normalize(MetricGraph(m, tuple(edges)))


def assert_spectra_match(a, b, tol: float = 1e-7, k_cap: float | None = None) -> None:
    """Positions and multiplicities agree on the common covered range."""
    cap = min(a.k_max, b.k_max) if k_cap is None else k_cap
    ra = [(k, m) for k, m in zip(a.ks, a.mults) if k <= cap + 1e-9]
    rb = [(k, m) for k, m in zip(b.ks, b.mults) if k <= cap + 1e-9]
    assert len(ra) == len(rb), f"root counts differ: {ra} vs {rb}"
    for (ka, ma), (kb, mb) in zip(ra, rb):
        assert abs(ka - kb) <= tol, f"positions differ: {ka} vs {kb}"
        assert ma == mb, f"multiplicities differ at k={ka}: {ma} vs {mb}"
