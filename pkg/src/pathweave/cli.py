"""Command-line front door: ingest, check, simplify, evaluate, analyze.

Exit codes: 0 success, 1 domain error (evaluation or analysis), 2 I/O,
format, or expression syntax error. Output is deterministic: fixed
orderings, floats printed with 12 significant digits. PATHWEAVE_THREADS
caps internal parallelism (evaluation in this version is single-threaded,
which trivially respects any cap >= 1).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import analysis, tensor as tensor_io
from .errors import AnalysisError, EvalError, ExprSyntaxError, GraphFormatError
from .evaluate import evaluate
from .expr import check_signatures, format_expr, parse, parse_program
from .kernels import export_tsv
from .rewrite import derivation_table, simplify


def _fmt_float(x) -> str:
    return format(float(x), ".12g")


def _json_num(x):
    return float(_fmt_float(x))


def thread_cap() -> int:
    raw = os.environ.get("PATHWEAVE_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise GraphFormatError(f"PATHWEAVE_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise GraphFormatError("PATHWEAVE_THREADS must be at least 1")
    return cap


def _load_tensor(args):
    try:
        t = tensor_io.read_triples(args.graph)
    except OSError as err:
        raise GraphFormatError(f"cannot read graph file {args.graph}: {err}")
    if getattr(args, "signatures", None):
        try:
            t = t.with_signatures(tensor_io.read_signatures(args.signatures))
        except OSError as err:
            raise GraphFormatError(f"cannot read signature file {args.signatures}: {err}")
    return t


def _load_expression(args, t):
    if getattr(args, "expr", None) and getattr(args, "expr_file", None):
        raise GraphFormatError("give either --expr or --expr-file, not both")
    if getattr(args, "expr", None):
        return parse(args.expr)
    if getattr(args, "expr_file", None):
        try:
            with open(args.expr_file, "r", encoding="utf-8") as fh:
                return parse_program(fh.read())
        except OSError as err:
            raise GraphFormatError(f"cannot read expression file {args.expr_file}: {err}")
    if t is not None and t.m == 1:
        return parse(f"A[{t.labels[0]}]")
    raise GraphFormatError(
        "the graph has several labels; pick the path matrix with --expr or --expr-file"
    )


def _emit_matrix(z, t, fmt, out):
    if fmt == "tsv":
        out.write(export_tsv(z, t.vertices.names))
        return
    mat = z.explicit().tocoo()
    order = np.lexsort((mat.col, mat.row))
    names = t.vertices.names
    entries = [
        [names[int(mat.row[k])], names[int(mat.col[k])], _json_num(mat.data[k])]
        for k in order
    ]
    json.dump({"n": t.n, "entries": entries}, out, ensure_ascii=False)
    out.write("\n")


def _emit_vector(metric, values_by_name, scalars, fmt, out):
    if fmt == "tsv":
        for name in values_by_name:
            out.write(f"{name}\t{_fmt_float(values_by_name[name])}\n")
        for key in scalars:
            out.write(f"#{key}\t{_fmt_float(scalars[key])}\n")
        return
    payload = {
        "metric": metric,
        "scalars": {k: _json_num(v) for k, v in scalars.items()},
        "values": {k: _json_num(v) for k, v in values_by_name.items()},
    }
    json.dump(payload, out, ensure_ascii=False)
    out.write("\n")


def cmd_load_check(args, out):
    t = _load_tensor(args)
    out.write(f"vertices\t{t.n}\n")
    out.write(f"labels\t{t.m}\n")
    for label in sorted(t.labels):
        s = t.slice(label)
        sig = f"\t{s.signature[0]}\t{s.signature[1]}" if s.signature else ""
        out.write(f"slice\t{label}\t{s.nnz}{sig}\n")
    if args.expr or args.expr_file:
        e = _load_expression(args, t)
        report = check_signatures(e, t)
        out.write(f"expression\t{format_expr(e)}\n")
        dom = report.derived[0] or "?"
        rng = report.derived[1] or "?"
        out.write(f"signature\t{dom}\t{rng}\t{'ok' if report.ok else 'violations'}\n")
        for v in report.violations:
            out.write(f"violation\t{v.subexpr}\texpected {v.expected}\tfound {v.found}\n")
    return 0


def _print_derivation(start, trace, stream):
    rows = derivation_table(start, trace)
    width = max(len(r) for r, _ in rows)
    for idx, (rendered, justification) in enumerate(rows):
        lead = "  " if idx == 0 else "= "
        stream.write(f"{lead}{rendered.ljust(width)}  | {justification}\n")


def cmd_simplify(args, out):
    e = _load_expression(args, None) if (args.expr or args.expr_file) else None
    if e is None:
        raise GraphFormatError("simplify needs --expr or --expr-file")
    simplified, trace = simplify(e)
    _print_derivation(e, trace, out)
    out.write(f"{format_expr(simplified)}\n")
    return 0


def cmd_eval(args, out):
    t = _load_tensor(args)
    e = _load_expression(args, t)
    if args.simplify:
        simplified, trace = simplify(e)
        _print_derivation(e, trace, sys.stderr)
        e = simplified
    z = evaluate(e, t, use_plan=not args.no_plan)
    _emit_matrix(z, t, args.format, out)
    return 0


def cmd_pagerank(args, out):
    t = _load_tensor(args)
    z = evaluate(_load_expression(args, t), t)
    cfg = analysis.PageRankConfig(
        delta=args.delta, epsilon=args.epsilon, max_iters=args.max_iters
    )
    pi = analysis.pagerank(z, cfg)
    values = {name: pi[i] for i, name in enumerate(t.vertices.names)}
    _emit_vector("pagerank", values, {}, args.format, out)
    return 0


def cmd_geodesic(args, out):
    t = _load_tensor(args)
    res = analysis.shortest_paths(evaluate(_load_expression(args, t), t))
    names = t.vertices.names
    if args.format == "tsv":
        for i, name in enumerate(names):
            ecc = "" if np.isnan(res.eccentricity[i]) else _fmt_float(res.eccentricity[i])
            clo = "" if np.isnan(res.closeness[i]) else _fmt_float(res.closeness[i])
            out.write(f"{name}\t{ecc}\t{clo}\t{int(res.reach_counts[i])}\n")
        radius = "" if res.radius is None else _fmt_float(res.radius)
        diameter = "" if res.diameter is None else _fmt_float(res.diameter)
        out.write(f"#radius\t{radius}\n#diameter\t{diameter}\n")
        for i in range(t.n):
            for j in range(t.n):
                if i != j and np.isfinite(res.distances[i, j]):
                    out.write(f"d\t{names[i]}\t{names[j]}\t{int(res.distances[i, j])}\n")
        return 0
    payload = {
        "metric": "geodesic",
        "scalars": {
            "radius": None if res.radius is None else _json_num(res.radius),
            "diameter": None if res.diameter is None else _json_num(res.diameter),
        },
        "values": {
            name: {
                "eccentricity": None
                if np.isnan(res.eccentricity[i])
                else _json_num(res.eccentricity[i]),
                "closeness": None
                if np.isnan(res.closeness[i])
                else _json_num(res.closeness[i]),
                "reached": int(res.reach_counts[i]),
            }
            for i, name in enumerate(names)
        },
        "distances": [
            [names[i], names[j], int(res.distances[i, j])]
            for i in range(t.n)
            for j in range(t.n)
            if i != j and np.isfinite(res.distances[i, j])
        ],
    }
    json.dump(payload, out, ensure_ascii=False)
    out.write("\n")
    return 0


def _parse_seed(pairs, t):
    seed = np.zeros(t.n)
    if not pairs:
        raise GraphFormatError("spread needs at least one --seed name=value")
    for item in pairs:
        name, _, raw = item.partition("=")
        if not _ or not name:
            raise GraphFormatError(f"--seed expects name=value, got {item!r}")
        idx = t.vertices.index.get(name)
        if idx is None:
            raise EvalError(f"unknown vertex name {name!r} in --seed")
        try:
            seed[idx] = float(raw)
        except ValueError:
            raise GraphFormatError(f"--seed value must be a number, got {raw!r}")
    return seed


def cmd_spread(args, out):
    t = _load_tensor(args)
    z = evaluate(_load_expression(args, t), t)
    seed = _parse_seed(args.seed, t)
    flow = analysis.spreading_activation(
        z, seed, steps=args.steps, decay=args.decay, threshold=args.threshold
    )
    values = {name: flow[i] for i, name in enumerate(t.vertices.names)}
    _emit_vector("spreading-activation", values, {}, args.format, out)
    return 0


def cmd_assort(args, out):
    t = _load_tensor(args)
    z = evaluate(_load_expression(args, t), t)
    try:
        raw = tensor_io.read_properties(args.property)
    except OSError as err:
        raise GraphFormatError(f"cannot read property file {args.property}: {err}")
    if args.kind == "scalar":
        values = np.full(t.n, np.nan)
        for name, text in raw.items():
            idx = t.vertices.index.get(name)
            if idx is not None:
                try:
                    values[idx] = float(text)
                except ValueError:
                    raise GraphFormatError(f"scalar property for {name!r} is not a number")
        r = analysis.assortativity_scalar(z, values)
    else:
        labels = [raw.get(name) for name in t.vertices.names]
        r = analysis.assortativity_categorical(z, labels)
    _emit_vector("assortativity", {}, {"r": r}, args.format, out)
    return 0


def _add_common(p, with_graph=True, with_expr=True):
    if with_graph:
        p.add_argument("--graph", required=True, help="triple file: tail<TAB>label<TAB>head")
        p.add_argument("--signatures", help="optional label<TAB>domain<TAB>range file")
    if with_expr:
        p.add_argument("--expr", help="inline path expression")
        p.add_argument("--expr-file", help="expression file with optional let bindings")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathweave",
        description="path algebra over multi-relational networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("load-check", help="validate a graph and optional expression")
    _add_common(p)
    p.set_defaults(func=cmd_load_check)

    p = sub.add_parser("eval", help="evaluate a path expression to a matrix")
    _add_common(p)
    p.add_argument("--simplify", action="store_true", help="print derivation, evaluate simplified tree")
    p.add_argument("--no-plan", action="store_true", help="skip evaluation planning")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("simplify", help="algebraically simplify an expression")
    _add_common(p, with_graph=False)
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser("pagerank", help="stationary vector of the merged walk matrix")
    _add_common(p)
    p.add_argument("--delta", type=float, default=0.85)
    p.add_argument("--epsilon", type=float, default=1e-10)
    p.add_argument("--max-iters", type=int, default=1000)
    p.set_defaults(func=cmd_pagerank)

    p = sub.add_parser("geodesic", help="shortest-path metrics")
    _add_common(p)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("spread", help="finite-step spreading activation")
    _add_common(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--decay", type=float, default=1.0)
    p.add_argument("--threshold", type=float, default=0.0)
    p.add_argument("--seed", action="append", default=[], help="name=value, repeatable")
    p.set_defaults(func=cmd_spread)

    p = sub.add_parser("assort", help="assortative mixing coefficient")
    _add_common(p)
    p.add_argument("--property", required=True, help="vertex<TAB>value file")
    p.add_argument("--kind", choices=("scalar", "categorical"), required=True)
    p.set_defaults(func=cmd_assort)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        thread_cap()
        return args.func(args, sys.stdout)
    except (ExprSyntaxError, GraphFormatError) as err:
        print(f"pathweave: {err}", file=sys.stderr)
        return 2
    except (EvalError, AnalysisError) as err:
        print(f"pathweave: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
