"""Compact metric multigraphs with positive edge lengths.

A graph is a set of vertices 0..M-1 and a list of undirected edges carrying
either a concrete positive length or a symbolic length (one of the four
parameter slots c1..c4, with an optional positive scale factor).  Parallel
edges are allowed; self-loops are rejected unless explicitly enabled.
All spectral code consumes graphs through the directed-bond basis built by
:func:`bonds`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .errors import InvalidGraph, ParseError, UnboundParameter

PARAMETER_NAMES = ("c1", "c2", "c3", "c4")

# Total length after normalize() must equal 1 within this.
NORMALIZE_TOL = 1e-12


@dataclass(frozen=True)
class ParamLength:
    """Symbolic edge length ``scale * param`` with param one of c1..c4."""

    param: str
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.param not in PARAMETER_NAMES:
            raise InvalidGraph(f"unknown length parameter {self.param!r}; allowed: {PARAMETER_NAMES}")
        if not (self.scale > 0):
            raise InvalidGraph(f"parameter scale must be positive, got {self.scale}")

    def resolve(self, binding: Mapping[str, float]) -> float:
        if self.param not in binding:
            raise UnboundParameter(f"unbound parameter {self.param}")
        return self.scale * float(binding[self.param])


Length = Union[float, ParamLength]


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    length: Length

    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)

    def is_concrete(self) -> bool:
        return not isinstance(self.length, ParamLength)


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"{self.code}: {self.detail}"


@dataclass(frozen=True)
class MetricGraph:
    """Immutable multigraph; safe to share across threads."""

    num_vertices: int
    edges: tuple[Edge, ...]
    allow_loops: bool = False

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def parameters(self) -> tuple[str, ...]:
        seen = []
        for e in self.edges:
            if isinstance(e.length, ParamLength) and e.length.param not in seen:
                seen.append(e.length.param)
        return tuple(sorted(seen))

    def is_concrete(self) -> bool:
        return all(e.is_concrete() for e in self.edges)

    def degree(self, vertex: int) -> int:
        """Valency; parallel edges count once per endpoint, loops twice."""
        d = 0
        for e in self.edges:
            if e.u == vertex:
                d += 1
            if e.v == vertex:
                d += 1
        return d

    def degrees(self) -> list[int]:
        d = [0] * self.num_vertices
        for e in self.edges:
            d[e.u] += 1
            d[e.v] += 1
        return d

    def concrete_lengths(self) -> list[float]:
        vals = []
        for e in self.edges:
            if isinstance(e.length, ParamLength):
                raise UnboundParameter(f"edge ({e.u},{e.v}) has unbound parameter {e.length.param}")
            vals.append(float(e.length))
        return vals

    def total_length(self) -> float:
        return math.fsum(self.concrete_lengths())

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return False
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for e in self.edges:
            if 0 <= e.u < self.num_vertices and 0 <= e.v < self.num_vertices:
                adj[e.u].append(e.v)
                adj[e.v].append(e.u)
        seen = [False] * self.num_vertices
        stack = [0]
        seen[0] = True
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        return all(seen)


# ---------------------------------------------------------------------------
# Validation / binding / normalization
# ---------------------------------------------------------------------------

def validate(g: MetricGraph) -> list[Violation]:
    """Collect violations; empty iff the graph is run-ready apart from binding."""
    out: list[Violation] = []
    if g.num_vertices < 1:
        out.append(Violation("Empty", "graph has no vertices"))
        return out
    if g.num_edges < 1:
        out.append(Violation("Empty", "graph has no edges"))
    for i, e in enumerate(g.edges):
        for x in (e.u, e.v):
            if not (0 <= x < g.num_vertices):
                out.append(Violation("BadEndpoint", f"edge {i} endpoint {x} outside 0..{g.num_vertices - 1}"))
        if e.u == e.v and not g.allow_loops:
            out.append(Violation("SelfLoop", f"edge {i} is a self-loop at vertex {e.u}"))
        if not isinstance(e.length, ParamLength) and not (float(e.length) > 0):
            out.append(Violation("NonPositiveLength", f"edge {i} has length {e.length}"))
    if not any(v.code == "BadEndpoint" for v in out) and g.num_edges >= 1:
        if not g.is_connected():
            out.append(Violation("Disconnected", "graph is not connected"))
    return out


def require_run_ready(g: MetricGraph) -> None:
    """Raise InvalidGraph unless the graph passes validation and is concrete."""
    bad = validate(g)
    if bad:
        raise InvalidGraph("; ".join(str(v) for v in bad))
    if not g.is_concrete():
        raise UnboundParameter(f"graph has unbound parameters {g.parameters}")


def bind(g: MetricGraph, binding: Optional[Mapping[str, float]] = None, *,
         allow_zero: bool = False) -> MetricGraph:
    """Substitute parameter values; contract zero-length edges when allowed.

    Zero values are permitted only with allow_zero (interactive exploration);
    a contracted edge merges its endpoints and is removed from the graph.
    """
    binding = dict(binding or {})
    for name, val in binding.items():
        if name not in PARAMETER_NAMES:
            raise InvalidGraph(f"unknown parameter {name!r} in binding")
        if val < 0 or (val == 0 and not allow_zero):
            raise InvalidGraph(f"binding {name}={val} must be positive")
    resolved: list[tuple[int, int, float]] = []
    for e in g.edges:
        ln = e.length.resolve(binding) if isinstance(e.length, ParamLength) else float(e.length)
        resolved.append((e.u, e.v, ln))

    if not any(ln == 0 for _, _, ln in resolved):
        return MetricGraph(g.num_vertices, tuple(Edge(u, v, ln) for u, v, ln in resolved), g.allow_loops)

    # Contract zero-length edges: union endpoints, drop the edge, relabel densely.
    parent = list(range(g.num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, ln in resolved:
        if ln == 0:
            parent[find(u)] = find(v)
    roots = sorted({find(x) for x in range(g.num_vertices)})
    relabel = {r: i for i, r in enumerate(roots)}
    new_edges = []
    for u, v, ln in resolved:
        if ln == 0:
            continue
        a, b = relabel[find(u)], relabel[find(v)]
        if a == b and not g.allow_loops:
            raise InvalidGraph("contracting a zero-length edge created a self-loop")
        new_edges.append(Edge(a, b, ln))
    if not new_edges:
        raise InvalidGraph("contraction removed every edge")
    return MetricGraph(len(roots), tuple(new_edges), g.allow_loops)


def normalize(g: MetricGraph, binding: Optional[Mapping[str, float]] = None) -> MetricGraph:
    """Scale all edges by one factor so the total length is 1.

    Idempotent: a graph whose total is already within NORMALIZE_TOL of 1 is
    returned with scale factor exactly 1.
    """
    gc = bind(g, binding) if (binding or not g.is_concrete()) else g
    total = gc.total_length()
    if total <= 0:
        raise InvalidGraph(f"total length {total} must be positive")
    if abs(total - 1.0) <= NORMALIZE_TOL:
        return gc
    scale = 1.0 / total
    return MetricGraph(gc.num_vertices,
                       tuple(Edge(e.u, e.v, float(e.length) * scale) for e in gc.edges),
                       gc.allow_loops)


def total_length(g: MetricGraph) -> float:
    return g.total_length()


def degree(g: MetricGraph, vertex: int) -> int:
    return g.degree(vertex)


# ---------------------------------------------------------------------------
# Directed-bond basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BondBasis:
    """Canonical ordering of the 2N directed bonds.

    Edge n = (u, v) provides bond 2n (u -> v) and bond 2n+1 (v -> u); bond b
    is identified with the edge end it departs from, so ``tails[b]`` is the
    vertex it leaves and ``heads[b]`` the vertex it runs to.  Reversal is b^1.
    """

    num_edges: int
    tails: tuple[int, ...]
    heads: tuple[int, ...]
    outgoing: tuple[tuple[int, ...], ...]  # per vertex: bonds departing it

    @property
    def num_bonds(self) -> int:
        return 2 * self.num_edges

    @staticmethod
    def reverse(b: int) -> int:
        return b ^ 1

    def edge_of(self, b: int) -> int:
        return b // 2

    def incoming(self, vertex: int) -> tuple[int, ...]:
        return tuple(b ^ 1 for b in self.outgoing[vertex])


def bonds(g: MetricGraph) -> BondBasis:
    tails: list[int] = []
    heads: list[int] = []
    outgoing: list[list[int]] = [[] for _ in range(g.num_vertices)]
    for n, e in enumerate(g.edges):
        tails += [e.u, e.v]
        heads += [e.v, e.u]
        outgoing[e.u].append(2 * n)
        outgoing[e.v].append(2 * n + 1)
    return BondBasis(g.num_edges, tuple(tails), tuple(heads),
                     tuple(tuple(o) for o in outgoing))


# ---------------------------------------------------------------------------
# Rational length structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalStructure:
    """All edge lengths are integer multiples of a common base length."""

    base_length: float
    multipliers: tuple[int, ...]

    @property
    def period(self) -> float:
        """k-period of the spectrum, 2*pi / base length."""
        return 2.0 * math.pi / self.base_length

    @property
    def polynomial_degree(self) -> int:
        return 2 * sum(self.multipliers)


def rational_structure(g: MetricGraph, tol: float = 1e-9,
                       max_denominator: int = 64) -> Optional[RationalStructure]:
    """Detect pairwise rationally dependent lengths via continued fractions.

    Returns None when some ratio admits no rational approximation with a
    denominator <= max_denominator matching the lengths within tol (relative).
    """
    lengths = g.concrete_lengths()
    if not lengths:
        return None
    ref = min(lengths)
    fracs = []
    for ln in lengths:
        f = Fraction(ln / ref).limit_denominator(max_denominator)
        if f <= 0:
            return None
        fracs.append(f)
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    ps = [f.numerator * (lcm // f.denominator) for f in fracs]
    g0 = 0
    for p in ps:
        g0 = math.gcd(g0, p)
    ps = [p // g0 for p in ps]
    # Least-squares common divisor, then verify the reconstruction.
    base = math.fsum(l * p for l, p in zip(lengths, ps)) / math.fsum(p * p for p in ps)
    if base <= 0:
        return None
    for ln, p in zip(lengths, ps):
        if abs(ln - p * base) > tol * ln:
            return None
    return RationalStructure(base, tuple(ps))


# ---------------------------------------------------------------------------
# Canonical form and (de)serialization
# ---------------------------------------------------------------------------

def _length_sort_key(length: Length) -> tuple:
    if isinstance(length, ParamLength):
        return (1, length.scale, length.param)
    return (0, float(length), "")


def canonical(g: MetricGraph) -> MetricGraph:
    """Deterministic form: endpoints ordered u <= v, edges sorted."""
    es = [Edge(min(e.u, e.v), max(e.u, e.v), e.length) for e in g.edges]
    es.sort(key=lambda e: (e.u, e.v) + _length_sort_key(e.length))
    return MetricGraph(g.num_vertices, tuple(es), g.allow_loops)


def to_dict(g: MetricGraph) -> dict:
    def enc(length: Length):
        if isinstance(length, ParamLength):
            return {"param": length.param, "scale": length.scale}
        return float(length)

    return {
        "vertices": g.num_vertices,
        "edges": [{"u": e.u, "v": e.v, "len": enc(e.length)} for e in g.edges],
        "allow_loops": g.allow_loops,
    }


def from_dict(data: object) -> MetricGraph:
    if not isinstance(data, dict):
        raise ParseError("graph document must be a JSON object")
    if "vertices" not in data or "edges" not in data:
        raise ParseError("graph object needs 'vertices' and 'edges' fields")
    nv = data["vertices"]
    if not isinstance(nv, int) or nv < 1:
        raise ParseError(f"field 'vertices' must be a positive integer, got {nv!r}")
    raw_edges = data["edges"]
    if not isinstance(raw_edges, list):
        raise ParseError("field 'edges' must be a list")
    edges = []
    for i, item in enumerate(raw_edges):
        if not isinstance(item, dict):
            raise ParseError(f"edge {i}: expected an object")
        try:
            u, v, ln = item["u"], item["v"], item["len"]
        except KeyError as exc:
            raise ParseError(f"edge {i}: missing field {exc.args[0]!r}") from None
        if not isinstance(u, int) or not isinstance(v, int):
            raise ParseError(f"edge {i}: endpoints must be integers")
        if isinstance(ln, dict):
            if "param" not in ln:
                raise ParseError(f"edge {i}: symbolic length needs a 'param' field")
            try:
                length: Length = ParamLength(ln["param"], float(ln.get("scale", 1.0)))
            except InvalidGraph as exc:
                raise ParseError(f"edge {i}: {exc}") from None
        elif isinstance(ln, (int, float)):
            length = float(ln)
        else:
            raise ParseError(f"edge {i}: field 'len' must be a number or a param object")
        edges.append(Edge(u, v, length))
    return MetricGraph(nv, tuple(edges), bool(data.get("allow_loops", False)))


def dumps(g: MetricGraph) -> str:
    return json.dumps(to_dict(g), indent=2) + "\n"


def loads(text: str) -> MetricGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_dict(data)


def save_graph(g: MetricGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))


def load_graph(path) -> MetricGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
