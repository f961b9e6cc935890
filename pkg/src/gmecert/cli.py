"""Command-line entry point.

Usage:
    gmecert graph gen ring n=6
    gmecert simulate state.json --shots 10000 --seed 7 --output rec.json
    gmecert sdp-bound rec.json --output rec_sdp.json
    gmecert certify rec.json --sdp --output report.json
    gmecert threshold chain:n=5 --k-max 5

Graphs are given either as a JSON file or inline as ``family:key=value,...``.

Exit codes: 0 success or certified, 1 inconclusive, 2 malformed input,
3 enumeration or dense-simulation cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .criteria import certify, white_noise_argmax
from .graph_core import EnumerationCapExceeded, Graph, GraphError, graph_from_json, make_family
from .graph_core.reduction import ENUM_CAP_ENV, as_fraction
from .pauli import PauliError, gates_from_json
from .records import RecordError, record_from_json
from .sdp import SdpError, bound_unmeasured_edges
from .statesim import (
    LocalRotationSchedule,
    StateError,
    add_white_noise,
    apply_local_channel,
    apply_local_rotations,
    dicke_state,
    graph_state,
    measure_record,
)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_PARSE = 2
EXIT_CAP = 3


class InputError(ValueError):
    pass


def _read_json(path: str) -> Any:
    """Load JSON from ``path``; ``-`` reads standard input."""
    if path == "-":
        text = sys.stdin.read()
    else:
        p = Path(path)
        if not p.is_file():
            raise InputError(f"no such file: {path}")
        text = p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def parse_family(text: str) -> Graph:
    """``ring:n=6`` or ``lattice2d:n_x=3,n_y=2``."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"bad family parameter {item!r}; expected key=value")
        try:
            params[key.strip()] = int(value)
        except ValueError as exc:
            raise InputError(f"parameter {key} must be an integer") from exc
    return make_family(name.strip(), **params)


def load_graph(arg: str) -> Graph:
    if Path(arg).is_file():
        return graph_from_json(_read_json(arg))
    if ":" in arg:
        return parse_family(arg)
    raise InputError(f"{arg!r} is neither a graph file nor a family:key=value spec")


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


# -- commands ---------------------------------------------------------------


def cmd_graph_gen(args: argparse.Namespace) -> int:
    spec = args.family + ":" + ",".join(args.params)
    _emit(_dumps(parse_family(spec).to_json()), args.output)
    return EXIT_OK


def simulate_from_spec(spec: dict[str, Any], graph: Graph | None = None,
                       shots: int | None = None, seed: int | None = None):
    """Build the state described by ``spec`` and return its measurement record."""
    if graph is None:
        if "graph" not in spec:
            raise InputError("state spec needs a graph (or pass --graph)")
        g = spec["graph"]
        graph = parse_family(g) if isinstance(g, str) else graph_from_json(g)
    init = spec.get("state", {"kind": "graph"})
    kind = init.get("kind", "graph")
    if kind == "graph":
        rho = graph_state(graph)
    elif kind == "dicke":
        rho = dicke_state(graph.n, int(init["i"]))
    else:
        raise InputError(f"unknown initial state kind {kind!r}")
    if spec.get("rotations"):
        rho = apply_local_rotations(rho, LocalRotationSchedule(spec["rotations"]))
    noise = spec.get("noise", {})
    if noise.get("channels"):
        rho = apply_local_channel(rho, noise["channels"])
    if noise.get("white"):
        rho = add_white_noise(rho, float(noise["white"]))
    shots = shots if shots is not None else spec.get("shots")
    seed = seed if seed is not None else spec.get("seed")
    gates = gates_from_json(spec.get("gates", []))
    return measure_record(rho, graph, gates, shots, seed, bool(spec.get("measure_edges", True)))


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = _read_json(args.state)
    graph = load_graph(args.graph) if args.graph else None
    record = simulate_from_spec(spec, graph, args.shots, args.seed)
    _emit(record.dumps(), args.output)
    return EXIT_OK


def _load_record(args: argparse.Namespace):
    graph = load_graph(args.graph) if args.graph else None
    return record_from_json(_read_json(args.record), graph)


def cmd_sdp_bound(args: argparse.Namespace) -> int:
    record = _load_record(args)
    out = bound_unmeasured_edges(record.graph, record, args.eps)
    _emit(out.dumps(), args.output)
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    record = _load_record(args)
    if args.sdp:
        record = bound_unmeasured_edges(record.graph, record, args.eps)
    k_max = args.k_max or record.graph.n
    report = certify(
        record.graph, record, "loose" if args.loose else "tight",
        k_values=range(2, min(k_max, record.graph.n) + 1),
        all_k=not args.early_exit,
        fixed_gamma=None if args.gamma is None else as_fraction(args.gamma),
    )
    data = report.to_json()
    if record.notes:
        data["notes"] = data["notes"] + list(record.notes)
    _emit(_dumps(data), args.output)
    return EXIT_OK if report.smallest_violated_k is not None else EXIT_INCONCLUSIVE


def threshold_table(graph: Graph, k_max: int | None = None, loose_only: bool = False) -> tuple[list[dict], list[str]]:
    warnings = []
    rows = []
    for k in range(2, min(k_max or graph.n, graph.n) + 1):
        row: dict[str, Any] = {"k": k}
        loose, lg = white_noise_argmax(graph, k, "loose")
        row.update(loose=str(loose), loose_float=float(loose), loose_gamma=[str(g) for g in lg])
        if not loose_only:
            try:
                tight, tg = white_noise_argmax(graph, k, "tight")
                row.update(tight=str(tight), tight_float=float(tight), tight_gamma=[str(g) for g in tg])
            except EnumerationCapExceeded as exc:
                warnings.append(f"k={k}: {exc}; reporting the loose threshold only")
        rows.append(row)
    return rows, warnings


def cmd_threshold(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    rows, warnings = threshold_table(graph, args.k_max, args.loose)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.format == "csv":
        buf = io.StringIO()
        fields = ["k", "tight", "tight_float", "loose", "loose_float"]
        writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _emit(buf.getvalue().rstrip("\n"), args.output)
    else:
        _emit(_dumps({"schema": "gmecert.thresholds/1", "graph": graph.to_json(), "rows": rows}), args.output)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmecert",
        description="Certify genuine multipartite entanglement and k-inseparability from graph-state stabilizer data.",
        epilog=f"Set {ENUM_CAP_ENV} to change the k-partition enumeration cap.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="graph utilities")
    gsub = g.add_subparsers(dest="graph_command", required=True)
    gen = gsub.add_parser("gen", help="emit a graph family as JSON")
    gen.add_argument("family")
    gen.add_argument("params", nargs="*", help="key=value parameters, e.g. n=6")
    gen.add_argument("--output", "-o")
    gen.set_defaults(func=cmd_graph_gen)

    sim = sub.add_parser("simulate", help="simulate a state and write its measurement record")
    sim.add_argument("state", help="state spec JSON")
    sim.add_argument("--graph", help="override the spec's graph")
    sim.add_argument("--shots", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--output", "-o")
    sim.set_defaults(func=cmd_simulate)

    for name, func, helptext in (
        ("sdp-bound", cmd_sdp_bound, "attach SDP lower bounds to absent edge terms"),
        ("certify", cmd_certify, "certify k-inseparability from a record"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("record", help="measurement record JSON (- for stdin)")
        p.add_argument("--graph", help="override the record's graph")
        p.add_argument("--eps", type=float, help="constraint tolerance for SDP bounds (default: term sigma)")
        p.add_argument("--output", "-o")
        p.set_defaults(func=func)
        if name == "certify":
            p.add_argument("--sdp", action="store_true", help="SDP-bound absent edge terms first")
            p.add_argument("--gamma", help="also evaluate at this fixed gamma (e.g. 0, 1/2)")
            p.add_argument("--loose", action="store_true", help="use the loose bound")
            p.add_argument("--k-max", type=int)
            p.add_argument("--early-exit", action="store_true", help="stop at the first violated k")

    th = sub.add_parser("threshold", help="white-noise thresholds per k")
    th.add_argument("graph")
    th.add_argument("--k-max", type=int)
    th.add_argument("--loose", action="store_true", help="loose thresholds only")
    th.add_argument("--format", choices=("json", "csv"), default="json")
    th.add_argument("--output", "-o")
    th.set_defaults(func=cmd_threshold)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EnumerationCapExceeded as exc:
        print(f"error: {exc}. Re-run with --loose.", file=sys.stderr)
        return EXIT_CAP
    except StateError as exc:
        code = EXIT_CAP if "capped" in str(exc) else EXIT_PARSE
        print(f"error: {exc}", file=sys.stderr)
        return code
    except (InputError, GraphError, RecordError, PauliError, SdpError, KeyError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
