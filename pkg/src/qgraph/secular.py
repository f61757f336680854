"""Bond scattering matrices and the secular function of a metric graph.

For the Laplacian with standard (Kirchhoff/Neumann) vertex conditions the
positive spectrum is {k^2 : det(S_e(k) S_v - I) = 0, k > 0}, where both
matrices are indexed by the 2N directed bonds:

* ``S_e(k)[b^1, b] = exp(i k l_b)`` couples each bond to its reversal with the
  phase accumulated along the edge (l_b = length of the underlying edge);
* ``S_v`` couples bonds departing a common vertex of valency d: back-reflection
  ``2/d - 1`` on the diagonal and transmission ``2/d`` between distinct bonds.

S_v is real symmetric with S_v^2 = I, and S_e(k) S_v is unitary for real k, so
the secular matrix S_e(k) S_v - I is singular exactly at spectral points.  The
robust root indicator used everywhere is sigma_min, the smallest singular
value; the number of singular values near zero equals the eigenvalue
multiplicity, which sign-based reading of det cannot deliver.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import InvalidGraph
from .graph import BondBasis, MetricGraph, bonds

_BATCH = 4096


def vertex_scattering_block(degree: int) -> np.ndarray:
    """d x d block for a valency-d vertex: 2/d - 1 on the diagonal, 2/d off."""
    if degree < 1:
        raise InvalidGraph(f"vertex degree must be >= 1, got {degree}")
    t = 2.0 / degree
    block = np.full((degree, degree), t)
    np.fill_diagonal(block, t - 1.0)
    return block


def vertex_scattering_matrix(g: MetricGraph, basis: BondBasis | None = None) -> np.ndarray:
    """Real symmetric 2N x 2N matrix assembled from per-vertex blocks."""
    basis = basis or bonds(g)
    nb = basis.num_bonds
    sv = np.zeros((nb, nb))
    for vertex in range(g.num_vertices):
        out = basis.outgoing[vertex]
        if not out:
            continue
        block = vertex_scattering_block(len(out))
        idx = np.asarray(out)
        sv[np.ix_(idx, idx)] = block
    return sv


def edge_scattering_matrix(g: MetricGraph, k: complex) -> np.ndarray:
    """2N x 2N matrix with exp(i k l_b) coupling every bond to its reversal."""
    lengths = g.concrete_lengths()
    nb = 2 * g.num_edges
    se = np.zeros((nb, nb), dtype=complex)
    for n, ln in enumerate(lengths):
        phase = np.exp(1j * k * ln)
        se[2 * n + 1, 2 * n] = phase
        se[2 * n, 2 * n + 1] = phase
    return se


class SecularEvaluator:
    """Evaluates det(S_e(k) S_v - I) and sigma_min at any k.

    The configuration (graph, bond basis, S_v) is immutable; every call owns
    its own workspace, so calls at different k may run fully in parallel.
    """

    def __init__(self, graph: MetricGraph, *, mult_tol: float = 1e-6):
        if not graph.is_concrete():
            raise InvalidGraph("secular evaluation needs concrete edge lengths")
        self.graph = graph
        self.basis = bonds(graph)
        self.mult_tol = mult_tol
        lengths = graph.concrete_lengths()
        # Per-bond length of the underlying edge.
        self.bond_lengths = np.asarray([lengths[b // 2] for b in range(2 * graph.num_edges)])
        self.sv = vertex_scattering_matrix(graph, self.basis)
        # S_e(k) S_v = diag(exp(i k l_b)) @ R with R = P_rev S_v; precompute R.
        rev = np.arange(2 * graph.num_edges) ^ 1
        self._r = self.sv[rev, :]

    @property
    def size(self) -> int:
        return self.basis.num_bonds

    def bond_matrix(self, k: complex) -> np.ndarray:
        """The unitary (for real k) product S_e(k) S_v."""
        phases = np.exp(1j * np.asarray(k) * self.bond_lengths)
        return phases[:, None] * self._r

    def secular_matrix(self, k: complex) -> np.ndarray:
        """S_e(k) S_v - I, singular exactly at spectral points."""
        return self.bond_matrix(k) - np.eye(self.size)

    def _bond_matrices(self, ks: np.ndarray) -> np.ndarray:
        phases = np.exp(1j * np.multiply.outer(ks, self.bond_lengths))
        return phases[:, :, None] * self._r[None, :, :]

    def det(self, k: complex) -> complex:
        """Secular determinant via LU with partial pivoting."""
        return complex(np.linalg.det(self.secular_matrix(k)))

    def det_many(self, ks: Sequence[float]) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        out = np.empty(ks.shape, dtype=complex)
        eye = np.eye(self.size)
        for lo in range(0, len(ks), _BATCH):
            chunk = ks[lo:lo + _BATCH]
            out[lo:lo + _BATCH] = np.linalg.det(self._bond_matrices(chunk) - eye)
        return out

    def singular_values(self, k: float) -> np.ndarray:
        return np.linalg.svd(self.secular_matrix(k), compute_uv=False)

    def sigma_min(self, k: float) -> float:
        return float(self.singular_values(k)[-1])

    def sigma_min_many(self, ks: Sequence[float]) -> np.ndarray:
        ks = np.asarray(ks, dtype=float)
        out = np.empty(ks.shape)
        eye = np.eye(self.size)
        for lo in range(0, len(ks), _BATCH):
            chunk = ks[lo:lo + _BATCH]
            svals = np.linalg.svd(self._bond_matrices(chunk) - eye, compute_uv=False)
            out[lo:lo + _BATCH] = svals[:, -1]
        return out

    def multiplicity_at(self, k: float, tol: float | None = None) -> int:
        """Count singular values below tol relative to the largest one."""
        tol = self.mult_tol if tol is None else tol
        s = self.singular_values(k)
        return int(np.sum(s < tol * max(1.0, float(s[0]))))


def plot_samples(ev: SecularEvaluator, k0: float, k1: float, n: int) -> np.ndarray:
    """Uniform-grid samples as a structured array (k, sigma_min, re/im det)."""
    if n < 2 or not (k1 > k0):
        raise ValueError("need k1 > k0 and at least two samples")
    ks = np.linspace(k0, k1, n)
    sig = ev.sigma_min_many(ks)
    det = ev.det_many(ks)
    out = np.empty(n, dtype=[("k", float), ("sigma_min", float), ("re_det", float), ("im_det", float)])
    out["k"], out["sigma_min"], out["re_det"], out["im_det"] = ks, sig, det.real, det.imag
    return out


def write_plot_csv(fh: TextIO, samples: Iterable) -> None:
    """CSV with the shared header 'k,sigma_min,re_det,im_det'.

    Floats are written with repr (shortest round-trip decimal) so the CLI and
    HTTP paths emit bit-identical text for identical inputs.
    """
    fh.write("k,sigma_min,re_det,im_det\n")
    for row in samples:
        cells = (float(row["k"]), float(row["sigma_min"]), float(row["re_det"]), float(row["im_det"]))
        fh.write(",".join(repr(c) for c in cells) + "\n")
