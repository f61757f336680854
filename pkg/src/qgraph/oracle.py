"""Independent eigenvalue oracle for cross-validating the secular route.

Writes the eigenfunction on edge n as A_n cos(kx) + B_n sin(kx) with x the
local coordinate from the first endpoint, and imposes the vertex conditions
directly: values agree at each vertex and outward derivatives sum to zero
(the derivative rows are divided by k so the matrix stays well scaled as
k -> 0).  Eigenvalues are the k where the resulting 2N x 2N homogeneous
system is singular, located by scanning its smallest singular value.

This module deliberately shares no code with qgraph.secular or
qgraph.spectrum beyond the graph types, so agreement between the two routes
is meaningful evidence.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import RefinementFailure
from .graph import MetricGraph
from .spectrum import Spectrum

_ORACLE_BATCH = 4096


class _MatchingSystem:
    """Row plan for the homogeneous system; filled per k."""

    def __init__(self, g: MetricGraph):
        self.lengths = np.asarray(g.concrete_lengths())
        n = g.num_edges
        self.size = 2 * n
        # Edge ends incident to each vertex: (edge index, end) with end 0 at u.
        ends_at: list[list[tuple[int, int]]] = [[] for _ in range(g.num_vertices)]
        for i, e in enumerate(g.edges):
            ends_at[e.u].append((i, 0))
            ends_at[e.v].append((i, 1))
        # Terms are (row, col, kind, edge) with kind naming the k-dependent
        # coefficient: const 1/-1, +/-cos(k l_e), +/-sin(k l_e).
        self.terms: list[tuple[int, int, str, int]] = []
        row = 0
        for ends in ends_at:
            first = ends[0]
            for other in ends[1:]:
                self._value_terms(row, first, +1)
                self._value_terms(row, other, -1)
                row += 1
            for end in ends:
                self._derivative_terms(row, end)
            row += 1
        assert row == self.size

    def _value_terms(self, row: int, end: tuple[int, int], sign: int) -> None:
        edge, side = end
        a_col, b_col = 2 * edge, 2 * edge + 1
        if side == 0:
            self.terms.append((row, a_col, "const+" if sign > 0 else "const-", edge))
        else:
            self.terms.append((row, a_col, "cos+" if sign > 0 else "cos-", edge))
            self.terms.append((row, b_col, "sin+" if sign > 0 else "sin-", edge))

    def _derivative_terms(self, row: int, end: tuple[int, int]) -> None:
        # Outward derivative divided by k: B at the x=0 end, and
        # A sin(k l) - B cos(k l) at the x=l end.
        edge, side = end
        a_col, b_col = 2 * edge, 2 * edge + 1
        if side == 0:
            self.terms.append((row, b_col, "const+", edge))
        else:
            self.terms.append((row, a_col, "sin+", edge))
            self.terms.append((row, b_col, "cos-", edge))

    def matrices(self, ks: np.ndarray) -> np.ndarray:
        cos = np.cos(np.multiply.outer(ks, self.lengths))
        sin = np.sin(np.multiply.outer(ks, self.lengths))
        out = np.zeros((len(ks), self.size, self.size))
        for row, col, kind, edge in self.terms:
            if kind == "const+":
                out[:, row, col] += 1.0
            elif kind == "const-":
                out[:, row, col] -= 1.0
            elif kind == "cos+":
                out[:, row, col] += cos[:, edge]
            elif kind == "cos-":
                out[:, row, col] -= cos[:, edge]
            elif kind == "sin+":
                out[:, row, col] += sin[:, edge]
            else:
                out[:, row, col] -= sin[:, edge]
        return out

    def smallest_singular(self, ks: np.ndarray) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        flat = np.atleast_1d(ks)
        out = np.empty(flat.shape)
        for lo in range(0, len(flat), _ORACLE_BATCH):
            chunk = flat[lo:lo + _ORACLE_BATCH]
            svals = np.linalg.svd(self.matrices(chunk), compute_uv=False)
            out[lo:lo + _ORACLE_BATCH] = svals[:, -1]
        return out.reshape(ks.shape)

    def singular_values(self, k: float) -> np.ndarray:
        return np.linalg.svd(self.matrices(np.asarray([k]))[0], compute_uv=False)


def _shrink_to_min(f, a: float, b: float, xtol: float = 1e-12, max_iter: int = 90):
    # Golden-ratio interval shrinking, written out locally on purpose.
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - ratio * (b - a)
    x2 = a + ratio * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > xtol and it < max_iter:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - ratio * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + ratio * (b - a)
            f2 = f(x2)
        it += 1
    return (x1, f1) if f1 < f2 else (x2, f2)


def oracle_roots(g: MetricGraph, k_max: float, *,
                 scan_step: float | None = None,
                 zero_threshold: float = 1e-8,
                 mult_tol: float = 1e-6) -> Spectrum:
    """Roots in (0, k_max] of the direct matching system, plus k=0."""
    system = _MatchingSystem(g)
    h = scan_step or min(g.concrete_lengths()) * math.pi / 20.0
    grid = np.arange(h, k_max + 3.5 * h, h)
    sigma = system.smallest_singular(grid)

    def value(k: float) -> float:
        return float(system.smallest_singular(np.asarray([k]))[0])

    refined: list[float] = []
    for i in range(1, len(grid) - 1):
        if not (sigma[i] <= sigma[i - 1] and sigma[i] <= sigma[i + 1]):
            continue
        if sigma[i] == sigma[i - 1] and sigma[i] == sigma[i + 1]:
            continue
        if sigma[i] > 0.2:
            continue
        k_star, s_star = _shrink_to_min(value, float(grid[i - 1]), float(grid[i + 1]))
        if s_star >= zero_threshold:
            if s_star < 100 * zero_threshold:
                raise RefinementFailure(
                    f"oracle minimum on [{grid[i - 1]:.9g}, {grid[i + 1]:.9g}] ambiguous "
                    f"(sigma={s_star:.3e})")
            continue
        if k_star <= k_max + 1e-9:
            refined.append(float(k_star))

    refined.sort()
    roots: list[tuple[float, int]] = [(0.0, 1)]
    prev = None
    for k_star in refined:
        if prev is not None and k_star - prev < h / 2:
            continue
        svals = system.singular_values(k_star)
        mult = int(np.sum(svals < mult_tol * max(1.0, float(svals[0]))))
        roots.append((k_star, mult))
        prev = k_star

    ks, ms = zip(*roots)
    return Spectrum(tuple(ks), tuple(ms), k_max, "oracle")
