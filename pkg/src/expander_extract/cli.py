"""Command-line entry point.

Exit status: 0 success, 1 parse error, 2 precondition failure, 3 a requested
verification failed.  Every path except a parse error writes a JSON report
(to ``--out`` or stdout).  All rationals in reports are ``"p/q"`` strings.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .coloring import EdgeColoredGraph, VertexColoredGraph, read_colored, red_vertex
from .exceptions import ParseError, PreconditionError
from .extraction import extract_induced_core, prune_long_blue_paths, trim_to_expander
from .multigraph import cheeger_constant, format_edge_list, read_edge_list
from .oracle import InstanceSpec, brute_force_cheeger, generate_verified_expander, verify_report
from .pipeline import (
    PipelineReport,
    plan_subgraph_to_induced,
    plan_topminor_to_induced,
    read_witness,
    subgraph_to_induced,
    topminor_to_induced,
)
from .validation import as_rational, format_rational, sorted_vertices, vertex_key

log = logging.getLogger("expander_extract")

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3


def _rational(text):
    try:
        return as_rational(text)
    except (PreconditionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise PreconditionError(f"{args.command} needs {flags}")


def _check_cheeger(graph, bound, what, cap):
    if len(graph) < 2:
        return {"clause": what, "cheeger": None, "bound": format_rational(bound), "ok": True}
    value, _ = brute_force_cheeger(graph, cap)
    return {"clause": what, "cheeger": format_rational(value), "bound": format_rational(bound), "ok": value >= bound}


def _precheck_expander(graph, kappa, stage):
    value = cheeger_constant(graph)[0]
    if value < kappa:
        raise PreconditionError(f"Cheeger constant {value} < kappa {kappa}", stage=stage)


# -- commands ---------------------------------------------------------------------


def cmd_cheeger(args, report):
    _require(args, "graph")
    g = read_edge_list(args.graph)
    value, cert = cheeger_constant(g)
    report.update(cheeger=format_rational(value), certificate=cert.to_dict(), vertices=len(g), edges=g.n_edges)
    if args.verify:
        oracle, _ = brute_force_cheeger(g, args.cap)
        report["verification"] = [{"clause": "oracle-agreement", "oracle": format_rational(oracle), "ok": oracle == value}]


def cmd_trim(args, report):
    _require(args, "graph", "subgraph", "kappa")
    g, h = read_edge_list(args.graph), read_edge_list(args.subgraph)
    if args.verify:
        _precheck_expander(g, args.kappa, "trim")
    kept, trace = trim_to_expander(g, h, args.kappa, epsilon=args.epsilon)
    report.update(
        kept=sorted_vertices(kept.vertices),
        output_edges=kept.n_edges,
        expansion_bound=format_rational(args.kappa / 3),
        trace=trace.to_dict(),
        trace_lines=trace.to_lines(),
    )
    if args.verify:
        checks = [_check_cheeger(kept, args.kappa / 3, "expansion", args.cap)]
        if trace.epsilon < args.kappa / 6:
            bound = trace.guaranteed_edges
            checks.append({"clause": "size", "bound": format_rational(bound), "ok": kept.n_edges >= bound})
        report["verification"] = checks


def cmd_prune(args, report):
    _require(args, "graph", "kappa", "epsilon", "alpha")
    g, blue, _ = read_colored(args.graph)
    vc = VertexColoredGraph(g, blue)
    c_m, big_m, n_long = prune_long_blue_paths(vc, args.kappa, args.epsilon, args.alpha, args.big_m, verify=args.verify)
    red_all, red_c = red_vertex(vc), red_vertex(c_m)
    report.update(
        M=big_m,
        long_paths=n_long,
        kept=sorted_vertices(c_m.graph.vertices),
        kept_blue=sorted_vertices(c_m.blue_vertices),
        red_edges_total=red_all.n_edges,
        red_edges_kept=red_c.n_edges,
    )
    if args.verify:
        bound = (1 - args.epsilon) * red_all.n_edges
        report["verification"] = [
            {"clause": "size", "bound": format_rational(bound), "ok": red_c.n_edges >= bound},
            {"clause": "subgraph", "ok": red_c.is_subgraph_of(red_all)},
            {"clause": "short-paths", "ok": all(p.length <= big_m for p in c_m.blue_paths)},
        ]


def cmd_induce(args, report):
    _require(args, "graph", "kappa", "epsilon", "alpha")
    g, _, blue = read_colored(args.graph)
    ec = EdgeColoredGraph(g, blue)
    core, big_m, trace = extract_induced_core(ec, args.kappa, args.epsilon, args.alpha, args.big_m, verify=args.verify)
    report.update(
        M=big_m,
        kept=sorted_vertices(core.graph.vertices),
        output_edges=core.graph.n_edges,
        trace=trace.to_dict(),
        trace_lines=trace.to_lines(),
    )
    if args.verify:
        degs, red_degs = core.graph.degrees, core.red.degrees
        bound = trace.guaranteed_edges
        report["verification"] = [
            _check_cheeger(core.red, args.kappa / 3, "expansion", args.cap),
            {"clause": "degree", "ok": all(degs[v] <= 3 * big_m * red_degs[v] for v in core.graph.vertices)},
            {"clause": "size", "bound": format_rational(bound), "ok": core.graph.n_edges >= bound},
        ]


def cmd_pipeline(args, report):
    _require(args, "graph", "subgraph", "kappa", "alpha", "alpha_prime")
    g, h = read_edge_list(args.graph), read_edge_list(args.subgraph)
    witness = read_witness(args.witness, g, h) if args.witness else None
    params = (args.kappa, args.alpha, args.alpha_prime)
    if args.dry_run:
        plan = plan_topminor_to_induced(*params) if witness else plan_subgraph_to_induced(*params)
        report["plan"] = json.loads(json.dumps(plan, default=format_rational))
        return
    if witness is not None:
        out, rep = topminor_to_induced(g, h, witness, *params, verify=args.verify)
    else:
        out, rep = subgraph_to_induced(g, h, *params, verify=args.verify)
    report["report"] = rep.to_dict()
    if args.verify:
        ok, clause = verify_report(g, h, rep, args.cap)
        report["verification"] = [{"clause": clause or "all", "ok": ok}]


def cmd_verify(args, report):
    _require(args, "graph", "subgraph", "report")
    g, h = read_edge_list(args.graph), read_edge_list(args.subgraph)
    try:
        data = json.loads(Path(args.report).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, args.report) from None
    if "report" in data and "schema_version" not in data:
        data = data["report"]
    rep = PipelineReport.from_dict(data)
    ok, clause = verify_report(g, h, rep, args.cap)
    report["verification"] = [{"clause": clause or "all", "ok": ok}]


def cmd_generate(args, report):
    if args.spec:
        spec = InstanceSpec.from_json(Path(args.spec).read_text())
    else:
        params = {}
        for key, value in (("n", args.size), ("degree", args.degree), ("M", args.big_m)):
            if value is not None:
                params[key] = value
        spec = InstanceSpec(args.kind, params, args.seed)
    g, kappa = generate_verified_expander(spec, args.cap)
    report.update(
        spec=spec.to_dict(),
        cheeger=format_rational(kappa),
        vertices=sorted_vertices(g.vertices),
        edges=[[u, v, m] for (u, v), m in sorted(g.edge_counts.items(), key=lambda t: (vertex_key(t[0][0]), vertex_key(t[0][1])))],
    )
    if args.edge_list_out:
        Path(args.edge_list_out).write_text(format_edge_list(g))


COMMANDS = {
    "cheeger": cmd_cheeger,
    "trim": cmd_trim,
    "prune": cmd_prune,
    "induce": cmd_induce,
    "pipeline": cmd_pipeline,
    "verify": cmd_verify,
    "generate": cmd_generate,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="expander-extract", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--graph", help="edge-list (or coloured edge-list) file for G")
    parser.add_argument("--subgraph", help="edge-list file for H")
    parser.add_argument("--witness", help="topological-minor witness JSON")
    parser.add_argument("--report", help="pipeline report JSON to verify")
    parser.add_argument("--kappa", type=_rational)
    parser.add_argument("--alpha", type=_rational)
    parser.add_argument("--alpha-prime", dest="alpha_prime", type=_rational)
    parser.add_argument("--epsilon", type=_rational)
    parser.add_argument("--big-m", dest="big_m", type=int)
    parser.add_argument("--out", help="write the JSON report here instead of stdout")
    parser.add_argument("--verify", action="store_true", help="check pre- and postconditions with the oracle")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--cap", type=int, help="brute-force vertex cap (default $EXPANDER_EXTRACT_CAP or 16)")
    parser.add_argument("--dry-run", dest="dry_run", action="store_true", help="pipeline: print derived parameters only")
    parser.add_argument("--spec", help="generate: InstanceSpec JSON file")
    parser.add_argument("--kind", default="random-regular", help="generate: generator kind")
    parser.add_argument("--size", type=int, help="generate: vertex count")
    parser.add_argument("--degree", type=int, help="generate: regular degree")
    parser.add_argument("--edge-list-out", dest="edge_list_out", help="generate: also write the graph as an edge list")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _emit(report, out):
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted_vertices(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def run(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    report = {"command": args.command}
    try:
        COMMANDS[args.command](args, report)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"parse error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        log.error("%s", exc)
        report.update(status="precondition-failed", error=str(exc), stage=exc.stage)
        _emit(report, args.out)
        return EXIT_PRECONDITION
    failed = [c for c in report.get("verification", []) if not c["ok"]]
    report["status"] = "verification-failed" if failed else "ok"
    _emit(report, args.out)
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
