"""Command line front end: ``tropfw solve|descend|distance|oracle-check|plot``.

Exit codes: 0 success, 2 input error, 3 internal error (including a
failed oracle check). ``TROPFW_LOG`` sets the log level (e.g. DEBUG).
"""

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from . import __version__
from .descent import SCHEDULES, DescentConfig, descend
from .errors import DimensionError, InvalidInput, TropFWError
from .flow import FlowSolution
from .oracle import GridSpec, default_grid, verify_polytrope
from .plot import polygon_vertices, render_svg
from .solver import FWPolytrope, solve, tropical_vertex_check
from .tropical import as_sample, normalize, trop_distance

SCHEMA = "tropfw/1"
EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3

log = logging.getLogger("tropfw")


def _num(v):
    v = float(v)
    return v + 0.0   # drops negative zero


def _vec(x):
    return [_num(v) for v in x]


def parse_point(text):
    try:
        x = np.array([float(t) for t in text.replace(";", ",").split(",")])
    except ValueError:
        raise InvalidInput(f"cannot parse point {text!r}") from None
    return x


def read_sample(text):
    """Parse CSV/TSV text into a normalized ``n x d`` array.

    The delimiter is a tab if the first line has one, else a comma. A
    first row that is not numeric is taken as a header.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InvalidInput("input has no rows")
    delim = "\t" if "\t" in lines[0] else ","
    rows = [[c.strip() for c in r] for r in csv.reader(io.StringIO("\n".join(lines)), delimiter=delim)]

    def numeric(row):
        try:
            [float(c) for c in row]
        except ValueError:
            return False
        return True

    if not numeric(rows[0]):
        rows = rows[1:]
    if not rows:
        raise InvalidInput("input has a header but no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise InvalidInput(f"ragged input: rows have {sorted(widths)} columns")
    for lineno, r in enumerate(rows, 1):
        if not numeric(r):
            raise InvalidInput(f"non-numeric entry in data row {lineno}")
    return as_sample(np.array(rows, dtype=float))


def _read_input(path):
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


def _write_output(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def solution_document(V, P):
    cell = P.cell
    return {
        "schema": SCHEMA,
        "dimensions": {"n": int(V.shape[0]), "d": int(V.shape[1])},
        "samples": [_vec(v) for v in V],
        "opt_value": _num(P.opt_value),
        "kleene": [_vec(r) for r in P.kleene],
        "min_vertices": [_vec(v) for v in P.min_vertices],
        "max_vertices": [_vec(v) for v in P.max_vertices],
        # [j, k, b] means x_j - x_k <= b (0-based)
        "inequalities": [[j, k, _num(b)] for j, k, b in cell.inequalities],
        "dual": {
            "covector_max": P.dual.covector_max,
            "covector_min": P.dual.covector_min,
        },
    }


def polytrope_from_document(doc):
    """Rebuild ``(V, P)`` from a ``solve`` document."""
    if doc.get("schema") != SCHEMA:
        raise InvalidInput(f"unsupported schema {doc.get('schema')!r}")
    try:
        V = as_sample(np.array(doc["samples"], dtype=float))
        kleene = np.array(doc["kleene"], dtype=float)
        n, d = V.shape
        pi = np.zeros((n, d), dtype=np.int64)
        phi = np.zeros((d, n), dtype=np.int64)
        for j, rows in enumerate(doc["dual"]["covector_max"]):
            pi[rows, j] = 1
        for j, rows in enumerate(doc["dual"]["covector_min"]):
            phi[j, rows] = 1
        opt = float(doc["opt_value"])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidInput(f"malformed solve document: {exc}") from None
    if kleene.shape != (d, d):
        raise InvalidInput(f"kleene has shape {kleene.shape}, expected {(d, d)}")
    return V, FWPolytrope(kleene=kleene, opt_value=opt, dual=FlowSolution(pi, phi, -opt))


def cmd_solve(args):
    V = read_sample(_read_input(args.input))
    P = solve(V)
    _write_output(args.output, _dump(solution_document(V, P)))
    return EXIT_OK


def cmd_descend(args):
    V = read_sample(_read_input(args.input))
    if args.x0 is not None:
        x0 = parse_point(args.x0)
        if x0.shape[0] != V.shape[1]:
            raise DimensionError(f"x0 has dimension {x0.shape[0]}, sample has {V.shape[1]}")
    else:
        rng = np.random.default_rng(args.seed)
        x0 = rng.uniform(V.min(axis=0), V.max(axis=0))
    cfg = DescentConfig(step0=args.step0, schedule=args.schedule, max_iters=args.max_iters,
                        eps_tie=args.tol_tie, eps_obj=args.tol_obj)
    trace = descend(V, x0, cfg)
    doc = {
        "schema": SCHEMA,
        "dimensions": {"n": int(V.shape[0]), "d": int(V.shape[1])},
        "x0": _vec(normalize(x0)),
        "schedule": cfg.schedule,
        "iterates": [
            {"x": _vec(it.x), "f": _num(it.f), "direction": _vec(it.direction), "oracle": bool(it.used_oracle)}
            for it in trace.iterates
        ],
        "f_values": [_num(it.f) for it in trace.iterates],
        "oracle_calls": int(trace.oracle_calls),
        "terminal": _vec(trace.terminal),
        "terminal_value": _num(trace.terminal_value),
        "status": trace.status,
    }
    _write_output(args.output, _dump(doc))
    return EXIT_OK


def cmd_distance(args):
    u, v = parse_point(args.u), parse_point(args.v)
    print(f"{float(trop_distance(u, v)):.12g}")
    return EXIT_OK


def cmd_oracle_check(args):
    text = _read_input(args.input)
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"invalid JSON: {exc}") from None
        V, P = polytrope_from_document(doc)
    else:
        V = read_sample(text)
        P = solve(V)
    if V.shape[1] > 4:
        raise InvalidInput("the grid oracle supports d <= 4")
    if args.grid_h is None:
        spec = default_grid(V)
    else:
        base = default_grid(V, args.grid_h)
        spec = GridSpec(base.box, args.grid_h)
    problems = tropical_vertex_check(P, V) + verify_polytrope(V, P, spec)
    for p in problems:
        print(f"violation: {p}")
    print(f"grid h={spec.h:.6g} points={spec.num_points} violations={len(problems)}")
    return EXIT_OK if not problems else EXIT_INTERNAL


def cmd_plot(args):
    V = read_sample(_read_input(args.input))
    if V.shape[1] != 3:
        raise DimensionError(f"plot needs d = 3, got d = {V.shape[1]}")
    P = solve(V)
    log.debug("polygon vertices: %s", polygon_vertices(P.cell).tolist())
    _write_output(args.output, render_svg(V, P.cell, title=f"FW polygon, f* = {P.opt_value:g}"))
    return EXIT_OK


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="tropfw", description="Tropical Fermat-Weber points.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--input", "-i", help="CSV/TSV sample, one point per row (default stdin)")
        if output:
            p.add_argument("--output", "-o", help="output file (default stdout)")
        p.add_argument("--tol-tie", type=float, default=1e-9, help="tie slack for types")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="exact FW polytrope as JSON")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("descend", help="gradient descent trace as JSON")
    common(p)
    p.add_argument("--x0", help="start point, comma separated (default: seeded random)")
    p.add_argument("--step0", type=_positive, default=None)
    p.add_argument("--schedule", choices=SCHEDULES, default="diminishing")
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--tol-obj", type=_positive, default=1e-6)
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("distance", help="tropical distance of two points")
    p.add_argument("u")
    p.add_argument("v")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("oracle-check", help="verify a solve document or CSV against the grid oracle")
    common(p, output=False)
    p.add_argument("--grid-h", type=_positive, default=None)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("plot", help="SVG of a d=3 sample and its FW polygon")
    common(p)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    level = os.environ.get("TROPFW_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "tol_tie", 1.0) < 0:
        print("tropfw: error: --tol-tie must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InvalidInput, DimensionError) as exc:
        print(f"tropfw: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TropFWError, ArithmeticError, np.linalg.LinAlgError) as exc:
        log.debug("internal failure", exc_info=True)
        print(f"tropfw: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
