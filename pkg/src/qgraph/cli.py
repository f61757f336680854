"""Command-line entry points.

Exit codes: 0 success, 1 runtime failure, 2 input validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .errors import InvalidGraph, ParseError, QGraphError, UnboundParameter
from .evolution import RunConfig, run
from .experiments import EXPERIMENTS, get_config
from .graph import bind, load_graph, normalize, save_graph, to_dict, validate
from .secular import SecularEvaluator, plot_samples, write_plot_csv
from .spectrum import (RootSearchOptions, compute_spectrum, spectrum_rows,
                       write_spectrum_csv)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_VALIDATION = 2


class _InputError(Exception):
    pass


def _parse_binding(text: str | None) -> dict[str, float]:
    if not text:
        return {}
    binding = {}
    for part in text.split(","):
        if "=" not in part:
            raise _InputError(f"bad binding {part!r}; expected name=value")
        name, _, value = part.partition("=")
        try:
            binding[name.strip()] = float(value)
        except ValueError:
            raise _InputError(f"binding value {value!r} is not a number") from None
    return binding


def _load_bound_graph(path: str, bind_text: str | None):
    g = load_graph(path)
    bad = [v for v in validate(g)]
    hard = [v for v in bad if v.code != "Disconnected"]
    if hard:
        raise _InputError("; ".join(str(v) for v in hard))
    try:
        g = bind(g, _parse_binding(bind_text), allow_zero=True)
        g = normalize(g)
    except (UnboundParameter, InvalidGraph) as exc:
        raise _InputError(str(exc)) from None
    bad = validate(g)
    if bad:
        raise _InputError("; ".join(str(v) for v in bad))
    return g


def _cmd_spectrum(args: argparse.Namespace) -> int:
    g = _load_bound_graph(args.graph, args.bind)
    opts = RootSearchOptions(k_max=args.k_max)
    spec = compute_spectrum(g, opts, mode=args.mode)
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    try:
        if args.format == "json":
            payload = {"mode": spec.mode, "k_max": spec.k_max,
                       "roots": [{"k": k, "multiplicity": m, "lambda": k * k}
                                 for k, m in zip(spec.ks, spec.mults)]}
            out.write(json.dumps(payload, indent=2) + "\n")
        else:
            write_spectrum_csv(out, spec)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _parse_krange(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise _InputError(f"bad k-range {text!r}; expected a:b:n")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _InputError(f"bad k-range {text!r}") from None
    if n < 2 or not b > a:
        raise _InputError("k-range needs b > a and n >= 2")
    return a, b, n


def _cmd_plot_dk(args: argparse.Namespace) -> int:
    g = _load_bound_graph(args.graph, args.bind)
    a, b, n = _parse_krange(args.k_range)
    ev = SecularEvaluator(g)
    # a:b:n means n uniform intervals, so the endpoints (and lattice points
    # like 2*pi on a 0:4pi grid) are sampled exactly.
    samples = plot_samples(ev, a, b, n + 1)
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    try:
        write_plot_csv(out, samples)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _write_run_outputs(log, outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "log.jsonl").write_text(log.to_jsonl(), encoding="utf-8")
    save_graph(log.final_graph, outdir / "final_graph.json")
    with open(outdir / "k_values.csv", "w", encoding="utf-8") as fh:
        fh.write("step," + ",".join(f"k{i}" for i in range(1, 9)) + "\n")
        for s in log.steps:
            ks = list(s.k_prefix) + [math.nan] * (8 - len(s.k_prefix))
            fh.write(str(s.index) + "," + ",".join(repr(float(k)) for k in ks[:8]) + "\n")


def _cmd_evolve(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        config = RunConfig.from_dict(data)
    except (json.JSONDecodeError, ValueError, KeyError, ParseError) as exc:
        raise _InputError(f"bad run config: {exc}") from None
    log = run(config)
    _write_run_outputs(log, Path(args.out))
    if log.aborted:
        print(f"run aborted: {log.error}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_experiments(args: argparse.Namespace) -> int:
    if args.list:
        for name in sorted(EXPERIMENTS):
            print(name)
        return EXIT_OK
    if args.export:
        outdir = Path(args.export)
        outdir.mkdir(parents=True, exist_ok=True)
        for name in sorted(EXPERIMENTS):
            path = outdir / f"{name}.json"
            path.write_text(json.dumps(get_config(name).to_dict(), indent=2) + "\n",
                            encoding="utf-8")
            print(path)
        return EXIT_OK
    if not args.name:
        raise _InputError("experiment name required (or use --list / --export DIR)")
    try:
        config = get_config(args.name)
    except KeyError as exc:
        raise _InputError(str(exc)) from None
    log = run(config)
    _write_run_outputs(log, Path(args.out or f"runs/{args.name}"))
    return EXIT_RUNTIME if log.aborted else EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve
    serve(host=args.host, port=args.port, static_dir=args.static)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qgraph",
                                description="Metric-graph spectra and spectrum-driven evolution")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="compute the k-spectrum of a graph file")
    sp.add_argument("graph")
    sp.add_argument("--k-max", type=float, default=12 * math.pi)
    sp.add_argument("--mode", choices=("auto", "scan", "rational"), default="auto")
    sp.add_argument("--bind", help="parameter binding, e.g. c1=3.14,c2=0")
    sp.add_argument("--out", help="output path (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=_cmd_spectrum)

    pd = sub.add_parser("plot-dk", help="sample sigma_min and the secular determinant on a k grid")
    pd.add_argument("graph")
    pd.add_argument("--bind")
    pd.add_argument("--k-range", required=True, help="a:b:n")
    pd.add_argument("--out")
    pd.set_defaults(func=_cmd_plot_dk)

    ev = sub.add_parser("evolve", help="run an evolution config file")
    ev.add_argument("config")
    ev.add_argument("--out", required=True, help="output directory")
    ev.set_defaults(func=_cmd_evolve)

    ex = sub.add_parser("experiments", help="run or export the built-in experiment configs")
    ex.add_argument("name", nargs="?")
    ex.add_argument("--out")
    ex.add_argument("--list", action="store_true")
    ex.add_argument("--export", metavar="DIR")
    ex.set_defaults(func=_cmd_experiments)

    sv = sub.add_parser("serve", help="start the HTTP service for the web UI")
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8077)
    sv.add_argument("--static", help="directory of built UI assets to serve")
    sv.set_defaults(func=_cmd_serve)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except QGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
