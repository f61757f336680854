"""Eigenvalue enumeration for metric graphs.

Two routes produce the k-spectrum (eigenvalues are lambda = k^2):

* scan mode works for any concrete lengths: sample sigma_min on a dense grid,
  refine every local minimum by golden section, accept minima that converge
  below the zero threshold, and read multiplicities off the count of
  near-zero singular values;
* rational mode is exact per period when every length is an integer multiple
  of a base length l0.  Substituting z = exp(i k l0) turns the secular
  determinant into a polynomial of degree 2*sum(p_n) whose coefficients are
  recovered by sampling on roots of unity and an inverse DFT; unit-circle
  roots map to k in [0, 2*pi/l0) and replicate exactly over periods.

Both modes store the zero eigenvalue first with multiplicity 1 (connected
graphs); intervals are treated as half-open at zero and closed at k_max with
a 1e-9 slack so boundary roots are never dropped by rounding.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (DegenerateLeadingCoefficient, InsufficientRange,
                     InvalidGraph, RefinementFailure)
from .graph import MetricGraph, RationalStructure, rational_structure
from .secular import SecularEvaluator

K_EDGE_SLACK = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Sorted k-roots with multiplicities; mode records how they were found."""

    ks: tuple[float, ...]
    mults: tuple[int, ...]
    k_max: float
    mode: str

    def __post_init__(self) -> None:
        if len(self.ks) != len(self.mults):
            raise ValueError("ks and mults must align")
        if any(m < 1 for m in self.mults):
            raise ValueError("multiplicities must be >= 1")
        if any(b <= a for a, b in zip(self.ks, self.ks[1:])):
            raise ValueError("k values must be strictly increasing")

    def eigenvalues(self, count: int) -> list[float]:
        """First `count` eigenvalues k^2, multiplicity-expanded, lambda_0 = 0 first."""
        out: list[float] = []
        for k, m in zip(self.ks, self.mults):
            out.extend([k * k] * m)
            if len(out) >= count:
                return out[:count]
        raise InsufficientRange(
            f"spectrum covers only {len(out)} eigenvalues up to k_max={self.k_max}; "
            f"need {count} -- retry with a larger k_max")

    def k_values(self, count: int, *, include_zero: bool = False) -> list[float]:
        """First `count` nonzero k values (or including zero), multiplicity-expanded."""
        out: list[float] = []
        for k, m in zip(self.ks, self.mults):
            if k == 0.0 and not include_zero:
                continue
            out.extend([k] * m)
            if len(out) >= count:
                return out[:count]
        return out

    def count_upto(self, K: float) -> int:
        """Multiplicity-counted roots in (0, K]."""
        return sum(m for k, m in zip(self.ks, self.mults) if 0 < k <= K + K_EDGE_SLACK)


class WeylCheck(NamedTuple):
    count: int
    expected: float
    deviation: float


def weyl_check(spec: Spectrum, K: float) -> WeylCheck:
    """Compare the counting function on (0, K] with K/pi (total length one)."""
    count = spec.count_upto(K)
    expected = K / math.pi
    return WeylCheck(count, expected, count - expected)


@dataclass(frozen=True)
class RootSearchOptions:
    """Knobs for the scan/refine root finder.

    scan_step None means the default (shortest edge length) * pi / 20, i.e.
    at least 20 samples per oscillation of the fastest phase factor.
    """

    k_max: float = 12 * math.pi
    scan_step: Optional[float] = None
    zero_threshold: float = 1e-8
    clear_threshold: float = 1e-6
    mult_tol: float = 1e-6
    refine_max_iter: int = 90
    refine_xtol: float = 1e-12

    def __post_init__(self) -> None:
        if self.k_max <= 0 or (self.scan_step is not None and self.scan_step <= 0):
            raise ValueError("k_max and scan_step must be positive")
        if self.zero_threshold <= 0 or self.mult_tol <= 0:
            raise ValueError("thresholds must be positive")


def default_scan_step(g: MetricGraph) -> float:
    return min(g.concrete_lengths()) * math.pi / 20.0


def golden_min(f: Callable[[float], float], a: float, b: float,
               xtol: float = 1e-12, max_iter: int = 90) -> tuple[float, float]:
    """Golden-section minimization of a unimodal f on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < xtol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _local_minima(sigma: np.ndarray) -> list[int]:
    idx = []
    for i in range(1, len(sigma) - 1):
        if sigma[i] <= sigma[i - 1] and sigma[i] <= sigma[i + 1] \
                and (sigma[i] < sigma[i - 1] or sigma[i] < sigma[i + 1]):
            idx.append(i)
    return idx


def find_roots_scan(ev: SecularEvaluator, opts: RootSearchOptions | None = None) -> Spectrum:
    """All k-roots in (0, k_max] by grid scan of sigma_min plus refinement."""
    opts = opts or RootSearchOptions()
    g = ev.graph
    h = opts.scan_step or default_scan_step(g)
    # Overshoot a few steps so a root sitting exactly at k_max is bracketed.
    grid = np.arange(h, opts.k_max + 3.5 * h, h)
    sigma = ev.sigma_min_many(grid)
    lmax = max(g.concrete_lengths())
    # sigma_min is Lipschitz with constant <= max edge length, so any true root
    # forces the adjacent grid value below lmax*h/2; gate with a 3x margin.
    gate = max(3.0 * lmax * h, 10.0 * opts.zero_threshold)

    found: list[tuple[float, float]] = []
    for i in _local_minima(sigma):
        if sigma[i] > gate:
            continue
        a, b = grid[i - 1], grid[i + 1]
        k_star, s_star = golden_min(ev.sigma_min, float(a), float(b),
                                    xtol=opts.refine_xtol, max_iter=opts.refine_max_iter)
        if s_star < opts.zero_threshold:
            found.append((float(k_star), float(s_star)))
        elif s_star < opts.clear_threshold:
            raise RefinementFailure(
                f"candidate minimum on [{a:.9g}, {b:.9g}] refined to sigma={s_star:.3e}, "
                f"between zero threshold {opts.zero_threshold:g} and clear threshold "
                f"{opts.clear_threshold:g}")

    found.sort()
    roots: list[tuple[float, int]] = [(0.0, 1)]
    prev_k = None
    for k_star, _ in found:
        if k_star > opts.k_max + K_EDGE_SLACK:
            continue
        if prev_k is not None and k_star - prev_k < h / 2:
            continue  # same root reached from two adjacent brackets
        roots.append((k_star, ev.multiplicity_at(k_star, opts.mult_tol)))
        prev_k = k_star
    ks, ms = zip(*roots)
    return Spectrum(tuple(ks), tuple(ms), opts.k_max, "scan")


# ---------------------------------------------------------------------------
# Rational (per-period exact) mode
# ---------------------------------------------------------------------------

def _cluster_unit_roots(zs: np.ndarray, radius: float) -> list[tuple[complex, int]]:
    """Greedy chain clustering of near-unit-circle roots by angle."""
    if len(zs) == 0:
        return []
    order = np.argsort(np.angle(zs))
    zs = zs[order]
    clusters: list[list[complex]] = [[zs[0]]]
    for z in zs[1:]:
        if abs(z - clusters[-1][-1]) <= radius:
            clusters[-1].append(z)
        else:
            clusters.append([z])
    # The angle sort splits a cluster straddling the -pi/pi cut; merge ends.
    if len(clusters) > 1 and abs(clusters[0][0] - clusters[-1][-1]) <= radius:
        clusters[0] = clusters.pop() + clusters[0]
    return [(complex(np.mean(c)), len(c)) for c in clusters]


def find_roots_rational(g: MetricGraph, rs: RationalStructure, n_periods: int,
                        opts: RootSearchOptions | None = None) -> Spectrum:
    """Per-period exact enumeration for rationally dependent edge lengths.

    The eigenvalue at k = 0 is stored with multiplicity 1; its period replicas
    keep the full root order of the polynomial at z = 1, which equals the
    eigenvalue multiplicity at k = j * period for j >= 1.
    """
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    opts = opts or RootSearchOptions()
    ev = SecularEvaluator(g, mult_tol=opts.mult_tol)
    deg = rs.polynomial_degree
    l0 = rs.base_length
    period = rs.period

    if all(p == 1 for p in rs.multipliers):
        # Equilateral case: D(z) = det(z R - I) with R = P_rev S_v real
        # orthogonal, so the z-roots are exactly the eigenvalues of a normal
        # matrix -- perfectly conditioned even at high multiplicity.
        zroots = np.linalg.eigvals(ev.bond_matrix(0.0))
        clusters = _cluster_unit_roots(zroots, radius=1e-6)
        order_at_one = 0
    else:
        # General case: sample the determinant at the (deg+1)-th roots of
        # unity in z and recover polynomial coefficients by inverse DFT.
        ks = 2.0 * math.pi * np.arange(deg + 1) / ((deg + 1) * l0)
        dvals = ev.det_many(ks)
        coeffs = np.fft.fft(dvals) / (deg + 1)
        # |c_0| = |det(-I)| = 1 and |c_deg| = |det(P_rev S_v)| = 1 hold
        # exactly in theory; deviations mean the interpolation lost the degree.
        if not (0.5 < abs(coeffs[-1]) < 2.0) or not (0.5 < abs(coeffs[0]) < 2.0):
            raise DegenerateLeadingCoefficient(
                f"interpolated polynomial degree unstable: |c0|={abs(coeffs[0]):.3e}, "
                f"|c_deg|={abs(coeffs[-1]):.3e}")
        # The root at z = 1 (the k = 0 family) has order 1 + cycle count,
        # which the companion eigensolve would smear into a blob of radius
        # eps**(1/order); its order equals the number of unit eigenvalues of
        # the k-independent matrix S(0), so deflate it exactly instead.
        order_at_one = ev.multiplicity_at(0.0, opts.mult_tol)
        high_first = coeffs[::-1]
        scale = float(np.max(np.abs(high_first)))
        for _ in range(order_at_one):
            high_first, rem = np.polydiv(high_first, np.asarray([1.0, -1.0]))
            if float(np.max(np.abs(rem))) > 1e-6 * scale:
                raise DegenerateLeadingCoefficient(
                    f"deflating the z=1 root of order {order_at_one} left residue "
                    f"{float(np.max(np.abs(rem))):.3e}")
        zroots = np.roots(high_first)
        near = zroots[np.abs(np.abs(zroots) - 1.0) < 1e-6]
        clusters = _cluster_unit_roots(near, radius=1e-6)

    per_period: list[tuple[float, int]] = [(0.0, order_at_one)] if order_at_one else []
    for center, mult in clusters:
        if abs(abs(center) - 1.0) > 1e-8:
            continue
        ang = math.atan2(center.imag, center.real)
        if ang < 0:
            ang += 2.0 * math.pi
        if ang < 1e-7 or 2.0 * math.pi - ang < 1e-7:
            if order_at_one:
                continue  # residue of the deflated z = 1 root
            ang = 0.0
        per_period.append((ang / l0, mult))
    per_period.sort()
    # Merge anything that landed on the zero family twice.
    merged: list[tuple[float, int]] = []
    for k0, mult in per_period:
        if merged and k0 - merged[-1][0] < 1e-7 / l0 and merged[-1][0] == 0.0:
            merged[-1] = (0.0, merged[-1][1] + mult)
        else:
            merged.append((k0, mult))
    per_period = merged

    # Polish nonzero roots against sigma_min; companion-matrix positions of
    # multiple roots are only accurate to eps**(1/mult).  The polished point
    # is kept only when it actually lowers sigma_min, so the exactly-placed
    # eigendecomposition roots are never degraded.
    polished: list[tuple[float, int]] = []
    for i, (k0, mult) in enumerate(per_period):
        if k0 == 0.0:
            polished.append((k0, mult))
            continue
        gap_lo = k0 - per_period[i - 1][0] if i > 0 else k0
        gap_hi = per_period[i + 1][0] - k0 if i + 1 < len(per_period) else period - k0
        half = min(0.45 * min(gap_lo, gap_hi), max(2e-5 / l0, 1e-7))
        s0 = ev.sigma_min(k0)
        k_star, s_star = golden_min(ev.sigma_min, k0 - half, k0 + half,
                                    xtol=opts.refine_xtol, max_iter=opts.refine_max_iter)
        if s0 <= s_star:
            k_star, s_star = k0, s0
        if s_star > opts.clear_threshold:
            warnings.warn(f"dropping spurious unit-circle root near k={k0:.6g} "
                          f"(sigma={s_star:.2e})", stacklevel=2)
            continue
        polished.append((float(k_star), mult))

    roots: list[tuple[float, int]] = []
    for j in range(n_periods):
        for k0, mult in polished:
            k = k0 + j * period
            if k == 0.0:
                roots.append((0.0, 1))
            else:
                roots.append((k, mult))
    roots.sort()
    ks_out, ms_out = zip(*roots)
    return Spectrum(tuple(ks_out), tuple(ms_out), n_periods * period, "rational")


# ---------------------------------------------------------------------------
# Mode selection
# ---------------------------------------------------------------------------

# Rational mode is preferred up to this polynomial degree; beyond it the
# companion-matrix eigensolve stops being the cheap option.
MAX_RATIONAL_DEGREE = 600


def compute_spectrum(g: MetricGraph, opts: RootSearchOptions | None = None,
                     mode: str = "auto") -> Spectrum:
    """Spectrum covering at least (0, opts.k_max] in the requested mode.

    auto prefers rational when the length structure is detected, falling back
    to scan (with a warning) if the polynomial interpolation degenerates.
    """
    opts = opts or RootSearchOptions()
    if mode not in ("auto", "scan", "rational"):
        raise ValueError(f"unknown mode {mode!r}")
    rs = rational_structure(g) if mode in ("auto", "rational") else None
    if mode == "rational" and rs is None:
        raise InvalidGraph("edge lengths are not rationally dependent; use scan mode")
    if rs is not None and (mode == "rational" or rs.polynomial_degree <= MAX_RATIONAL_DEGREE):
        # One extra period so a root exactly at k_max is never lost to the
        # half-open period window.
        n_periods = math.floor(opts.k_max / rs.period) + 1
        try:
            return find_roots_rational(g, rs, n_periods, opts)
        except DegenerateLeadingCoefficient as exc:
            if mode == "rational":
                raise
            warnings.warn(f"rational mode failed ({exc}); falling back to scan", stacklevel=2)
    return find_roots_scan(SecularEvaluator(g, mult_tol=opts.mult_tol), opts)


def spectrum_with_count(g: MetricGraph, count: int,
                        opts: RootSearchOptions | None = None,
                        mode: str = "auto", max_doublings: int = 8) -> Spectrum:
    """Smallest-effort spectrum holding at least `count` eigenvalues.

    Starts from a Weyl-style estimate plus a 20% safety margin and doubles the
    range on InsufficientRange.
    """
    opts = opts or RootSearchOptions()
    k_max = max(math.pi * count * 1.2, 2 * math.pi)
    for _ in range(max_doublings):
        sp = compute_spectrum(g, replace(opts, k_max=k_max), mode)
        try:
            sp.eigenvalues(count)
            return sp
        except InsufficientRange:
            k_max *= 2
    raise InsufficientRange(
        f"could not cover {count} eigenvalues up to k_max={k_max} after {max_doublings} doublings")


def spectrum_rows(spec: Spectrum) -> list[tuple[float, int, float]]:
    return [(k, m, k * k) for k, m in zip(spec.ks, spec.mults)]


def write_spectrum_csv(fh, spec: Spectrum) -> None:
    fh.write("k,multiplicity,lambda\n")
    for k, m, lam in spectrum_rows(spec):
        fh.write(f"{k!r},{m},{lam!r}\n")
