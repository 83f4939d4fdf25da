"""Command-line interface.

Subcommands cover the whole pipeline: graph/distances/ph for the core
chain, landscape/bottleneck for diagram analytics, asc/tasc/music-grid for
the applications, stability for the bound check.  Exit codes: 0 success,
1 domain or data errors (single diagnostic line on stderr), 2 usage errors.
Identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import bottleneck_distance, landscape_csv, landscape_norm, persistence_landscape
from .errors import FeathomError
from .graph import build_skeleton, count_matrices, debug_dump, weighted_graph
from .metric import auto_activation, distance_matrix, distance_matrix_csv, raw_activation
from .persistence import (
    DEFAULT_VERTEX_CAP,
    diagram_csv,
    parse_diagram_csv,
    reps_json,
)
from .pipelines import (
    asc_curve,
    curve_csv,
    featured_diagram,
    grid_csv,
    music_stats_grid,
    parse_curve_csv,
    read_price_csv,
    report_json,
    stability_check,
    stock_preprocess,
    tasc_curve,
)
from .series import (
    InfluenceVector,
    feature_set_from_config,
    influence_vector_from_config,
    load_config,
    load_featured_series,
)

CAP_ENV = "FEATHOM_CAP"


def _emit(out: str | None, text: str) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else format(x, ".12g")


def _load_series(args):
    schema = feature_set_from_config(load_config(args.schema))
    return load_featured_series(args.input, schema), schema


def _load_influence(path: str | None, schema) -> InfluenceVector:
    if path is None:
        return InfluenceVector.zeros(schema)
    return influence_vector_from_config(load_config(path), schema)


def _activation_for(graph, name: str):
    return raw_activation() if name == "raw" else auto_activation(graph)


def _cmd_graph(args) -> int:
    series, schema = _load_series(args)
    skeleton = build_skeleton(series)
    counts = count_matrices(series, skeleton)
    graph = None
    if args.g:
        graph = weighted_graph(skeleton, counts, _load_influence(args.g, schema))
    _emit(args.out, json.dumps(debug_dump(skeleton, counts, graph), indent=2) + "\n")
    return 0


def _cmd_distances(args) -> int:
    series, schema = _load_series(args)
    skeleton = build_skeleton(series)
    counts = count_matrices(series, skeleton)
    graph = weighted_graph(skeleton, counts, _load_influence(args.g, schema))
    dm = distance_matrix(graph, _activation_for(graph, args.activation))
    _emit(args.out, distance_matrix_csv(dm))
    return 0


def _cmd_ph(args) -> int:
    series, schema = _load_series(args)
    g = _load_influence(args.g, schema)
    rho = None
    if args.activation == "raw":
        rho = raw_activation()
    result = featured_diagram(
        series,
        g,
        max_dim=args.max_dim,
        vertex_cap=args.cap,
        activation=rho,
        with_reps=args.reps is not None,
    )
    _emit(args.out, diagram_csv(result.diagram))
    if args.reps is not None:
        Path(args.reps).write_text(
            json.dumps(reps_json(result.diagram), indent=2) + "\n", encoding="utf-8"
        )
    return 0


def _cmd_landscape(args) -> int:
    diagram = parse_diagram_csv(Path(args.diagram).read_text(encoding="utf-8"))
    landscape = persistence_landscape(diagram.finite_in_dim(args.dim))
    if args.norm:
        _emit(args.out, _fmt(landscape_norm(landscape, args.norm)) + "\n")
    else:
        _emit(args.out, landscape_csv(landscape))
    return 0


def _cmd_bottleneck(args) -> int:
    da = parse_diagram_csv(Path(args.a).read_text(encoding="utf-8"))
    db = parse_diagram_csv(Path(args.b).read_text(encoding="utf-8"))
    value = bottleneck_distance(da.in_dim(args.dim), db.in_dim(args.dim))
    _emit(args.out, _fmt(value) + "\n")
    return 0


def _cmd_asc(args) -> int:
    prices = read_price_csv(Path(args.prices).read_text(encoding="utf-8"))
    series = stock_preprocess(prices, n_bins=args.bins, n_delta_bins=args.delta_bins)
    g = _load_influence(args.g, series.schema)
    curve = asc_curve(
        series, g, w=args.window, step=args.step, vertex_cap=args.cap, jobs=args.jobs
    )
    _emit(args.out, curve_csv(curve))
    return 0


def _cmd_tasc(args) -> int:
    curves = [
        parse_curve_csv(Path(p).read_text(encoding="utf-8")) for p in args.curve
    ]
    _emit(args.out, curve_csv(tasc_curve(curves)))
    return 0


def _cmd_music_grid(args) -> int:
    series, _ = _load_series(args)
    cells = music_stats_grid(
        series,
        args.feature0,
        args.x,
        args.feature1,
        args.y,
        vertex_cap=args.cap,
        jobs=args.jobs,
    )
    _emit(args.out, grid_csv(cells))
    return 0


def _cmd_stability(args) -> int:
    series, schema = _load_series(args)
    g = _load_influence(args.g, schema)
    g2 = _load_influence(args.g2, schema)
    report = stability_check(series, g, g2, dims=args.dims, vertex_cap=args.cap)
    _emit(args.out, json.dumps(report_json(report), indent=2) + "\n")
    return 0


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="feathom",
        description="Persistent homology of featured time series.",
    )
    parser.add_argument("--version", action="version", version=f"feathom {__version__}")
    parser.add_argument(
        "--seed", type=int, default=None, help="seed numpy's global RNG before running"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_: str, inputs: list[str]):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func, input_attrs=inputs)
        p.add_argument("--out", help="output file (default: stdout)")
        return p

    p = add("graph", _cmd_graph, "dump the skeleton and count matrices as JSON", ["input", "schema", "g"])
    p.add_argument("--input", required=True, help="featured series CSV (t,value,f0,f1)")
    p.add_argument("--schema", required=True, help="feature schema config (JSON/TOML)")
    p.add_argument("--g", help="influence config; adds weighted frequencies to the dump")

    p = add("distances", _cmd_distances, "export the graph metric as CSV", ["input", "schema", "g"])
    p.add_argument("--input", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--g", help="influence config (default: all zeros)")
    p.add_argument("--activation", choices=["auto", "raw"], default="auto")

    p = add("ph", _cmd_ph, "compute persistence diagrams", ["input", "schema", "g"])
    p.add_argument("--input", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--g", help="influence config (default: all zeros)")
    p.add_argument("--max-dim", dest="max_dim", type=int, default=2)
    p.add_argument("--activation", choices=["auto", "raw"], default="auto")
    p.add_argument("--reps", help="also write dim-1 representative cycles to this JSON file")

    p = add("landscape", _cmd_landscape, "landscape breakpoints or norm of a diagram CSV", ["diagram"])
    p.add_argument("--diagram", required=True, help="diagram CSV from the ph subcommand")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--norm", choices=["sup-sum", "l1-sum"], help="print this norm instead of breakpoints")

    p = add("bottleneck", _cmd_bottleneck, "bottleneck distance between two diagram CSVs", ["a", "b"])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--dim", type=int, default=1)

    p = add("asc", _cmd_asc, "anomaly score curve from a price CSV", ["prices", "g"])
    p.add_argument("--prices", required=True, help="price CSV (date,close)")
    p.add_argument("--g", help="influence config over the stock schema (default: zeros)")
    p.add_argument("-w", "--window", type=int, required=True)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--bins", type=int, default=30)
    p.add_argument("--delta-bins", dest="delta_bins", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)

    p = add("tasc", _cmd_tasc, "combine aligned anomaly curves into one", ["curve"])
    p.add_argument("--curve", action="append", required=True, help="curve CSV; repeat per curve")

    p = add("music-grid", _cmd_music_grid, "diagram stats over an influence grid", ["input", "schema"])
    p.add_argument("--input", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--feature0", required=True, help="zeroth feature swept along x")
    p.add_argument("--feature1", required=True, help="first feature swept along y")
    p.add_argument("--x", type=_float_list, required=True, help="comma-separated x influences")
    p.add_argument("--y", type=_float_list, required=True, help="comma-separated y influences")
    p.add_argument("--jobs", type=int, default=1)

    p = add("stability", _cmd_stability, "empirical diagram-stability report", ["input", "schema", "g", "g2"])
    p.add_argument("--input", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--g", help="first influence config (default: zeros)")
    p.add_argument("--g2", help="second influence config (default: zeros)")
    p.add_argument("--dims", type=_int_list, default=[0, 1])

    return parser


def _missing_inputs(args) -> list[str]:
    missing = []
    for attr in getattr(args, "input_attrs", []):
        value = getattr(args, attr, None)
        paths = value if isinstance(value, list) else [value]
        for path in paths:
            if path and not Path(path).exists():
                missing.append(path)
    return missing


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.seed is not None:
        np.random.seed(args.seed)
    try:
        args.cap = int(os.environ.get(CAP_ENV, DEFAULT_VERTEX_CAP))
    except ValueError:
        print(f"usage error: {CAP_ENV} must be an integer", file=sys.stderr)
        return 2
    missing = _missing_inputs(args)
    if missing:
        print(f"usage error: no such file: {missing[0]}", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except FeathomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
