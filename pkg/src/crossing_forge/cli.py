"""Command line entry point: ``crossing-forge <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
3 unsatisfiable input demonstrated (end-to-end only).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis
from .cnf import DimacsError, brute_force_sat, format_assignment, parse_assignment, parse_dimacs
from .drawing import (
    DrawingError,
    PlanError,
    RoutingPlan,
    audit_good_drawing,
    audit_necessary_conditions,
    build_canonical_drawing,
    count_crossings,
    export_svg,
    extract_assignment,
    instance_from_graph,
    read_drawing,
    write_drawing,
)
from .graph import (
    MultiGraph,
    free,
    lift_path_decomposition,
    lift_tree_decomposition,
    read_decomposition,
    read_graph,
    subdivide_parallel,
    validate_decomposition,
    vertex_separation_order,
    write_decomposition,
    write_graph,
)
from .pipeline import EXIT_FAIL, EXIT_OK, EXIT_UNSAT, EXIT_USAGE, end_to_end, selfcheck
from .reduction import reduce
from .widths import StrategyError, certify_path, certify_tree

ENV_OUT = "CROSSING_FORGE_OUT"


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str):
    try:
        return read_graph(_read_text(path))
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(text: str | bytes, out: str | None) -> None:
    if out is None:
        if isinstance(text, bytes):
            sys.stdout.buffer.write(text)
        else:
            sys.stdout.write(text)
        return
    path = _out_path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(text, bytes):
        path.write_bytes(text)
    else:
        path.write_text(text, encoding="utf-8")


def _out_path(name: str) -> Path:
    p = Path(name)
    base = os.environ.get(ENV_OUT)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# subcommands


def cmd_reduce(args) -> int:
    try:
        inst = parse_dimacs(Path(args.cnf).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {args.cnf}: {exc.strerror}") from None
    except DimacsError as exc:
        raise UsageError(f"{args.cnf}: {exc}") from None
    g, trace = reduce(inst)
    _emit(write_graph(g), args.out)
    if args.trace:
        _emit(trace.to_text(), args.trace)
    if args.out:
        print(f"|V|={len(g.vertices)} |E|={len(g.edges)} h={g.h} omega={g.omega} k={g.k} - 1 "
              f"k_value={g.k_value}", file=sys.stderr)
    return EXIT_OK


def _parse_plan(text: str, ell: int) -> RoutingPlan:
    try:
        jumps = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad plan {text!r}; expected 'auto' or comma-separated gadget indices") from None
    if len(jumps) != ell:
        raise UsageError(f"plan lists {len(jumps)} gadgets for {ell} clauses")
    return RoutingPlan(jumps)


def cmd_draw(args) -> int:
    g = _load_graph(args.graph)
    if args.assignment == "auto":
        tau = brute_force_sat(instance_from_graph(g))
        if tau is None:
            print("no satisfying assignment exists; nothing to draw", file=sys.stderr)
            return EXIT_FAIL
    else:
        try:
            tau = parse_assignment(args.assignment, g.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        if args.plan == "auto":
            plan = RoutingPlan.forced(g, tau) if args.forced else RoutingPlan.auto(g, tau)
        else:
            plan = _parse_plan(args.plan, g.ell)
        d = build_canonical_drawing(g, tau, plan, forced=args.forced)
    except PlanError as exc:
        print(f"refused: {exc} (clause {exc.clause})", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(write_drawing(d), args.out)
    if args.svg:
        _emit(export_svg(g, d, mark_crossings=args.mark_crossings), args.svg)
    cs = count_crossings(g, d)
    print(f"assignment={format_assignment(tau)} plan={','.join(map(str, plan.jumps))} "
          f"crossings={cs.total} value={cs.total.eval(g.omega)} k_value={g.k_value}", file=sys.stderr)
    return EXIT_OK


def _load_drawing(path: str):
    try:
        return read_drawing(_read_text(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_audit(args) -> int:
    g = _load_graph(args.graph)
    d = _load_drawing(args.drawing)
    try:
        cs = count_crossings(g, d)
    except DrawingError as exc:
        print(f"degenerate drawing: {exc}", file=sys.stderr)
        return EXIT_FAIL
    good = audit_good_drawing(g, d)
    nec = audit_necessary_conditions(g, d, cs)
    if args.json:
        _print_json({
            "good": good.to_json(), "necessary": nec.to_json(),
            "total": str(cs.total), "value": str(cs.total.eval(g.omega)), "k_value": str(g.k_value),
        })
    else:
        sys.stdout.write(good.to_text() + nec.to_text())
        print(f"total {cs.total} = {cs.total.eval(g.omega)} (k = {g.k_value})")
    return EXIT_OK if good.passed and nec.passed else EXIT_FAIL


def cmd_extract(args) -> int:
    g = _load_graph(args.graph)
    d = _load_drawing(args.drawing)
    try:
        tau = extract_assignment(g, d)
    except (DrawingError, KeyError) as exc:
        print(f"cannot extract: {exc}", file=sys.stderr)
        return EXIT_FAIL
    print(format_assignment(tau))
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = _load_graph(args.graph)
    try:
        if args.tree:
            d = certify_tree(g).decomposition
        else:
            d = certify_path(g).decomposition
    except StrategyError as exc:
        print(f"strategy failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    target = g
    if args.subdivided:
        sub = subdivide_parallel(g)
        target = sub.graph
        d = lift_tree_decomposition(d, sub, g) if args.tree else lift_path_decomposition(d, sub, g)
    chk = validate_decomposition(target, d)
    _emit(write_decomposition(d), args.out)
    print(f"{'tree' if args.tree else 'path'} decomposition: {len(d.bags)} bags, width {chk.width}, "
          f"{'valid' if chk.valid else 'INVALID: ' + chk.violation}", file=sys.stderr)
    return EXIT_OK if chk.valid else EXIT_FAIL


def cmd_validate(args) -> int:
    g = _load_graph(args.graph)
    if args.subdivided:
        g = subdivide_parallel(g).graph
    try:
        d = read_decomposition(_read_text(args.decomposition))
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{args.decomposition}: {exc}") from None
    chk = validate_decomposition(g, d)
    if chk.valid:
        print(f"valid, width {chk.width}")
        return EXIT_OK
    print(f"invalid: {chk.violation}")
    return EXIT_FAIL


def cmd_analyze(args) -> int:
    try:
        if args.what == "a-of-h":
            result = {"h": args.h, "A": str(analysis.a_of_h(args.h))}
            ok = True
        elif args.what == "identities":
            rep = analysis.check_induction_identities(args.max_h)
            result = {"h_max": args.max_h, "cases": len(rep.rows), "ok": rep.ok, "failures": rep.failures}
            ok = rep.ok
        else:
            m = analysis.brute_force_min_placement(args.h)
            result = m.to_json()
            result["note"] = "single-crossing stairs only; the multi-crossing relaxation is not explored"
            ok = True
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.json:
        _print_json(result)
    else:
        for key in sorted(result):
            print(f"{key}: {result[key]}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_simplify(args) -> int:
    g = _load_graph(args.graph)
    sub = subdivide_parallel(g)
    _emit(write_graph(sub.graph), args.out)
    print(f"subdivided {len(sub.subdivided)} parallel edges", file=sys.stderr)
    return EXIT_OK


def _load_any_graph(path: str) -> MultiGraph:
    text = _read_text(path)
    if text.startswith("crossing-forge-graph"):
        return _load_graph(path)
    pairs = []
    for ln in text.splitlines():
        parts = ln.split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) != 2:
            raise UsageError(f"{path}: edge-list lines need two vertex names, got {ln!r}")
        pairs.append((free(parts[0]), free(parts[1])))
    return MultiGraph.from_pairs(pairs)


def cmd_pw_exact(args) -> int:
    g = _load_any_graph(args.graph)
    try:
        pw, order = vertex_separation_order(g)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"pathwidth {pw}")
    if args.order:
        print("order " + " ".join(str(v) for v in order))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    rep = selfcheck(max_h=args.max_h, brute_h=min(args.max_h, 6), golden=args.golden, seed=args.seed)
    sys.stdout.write(rep.to_text())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_end_to_end(args) -> int:
    try:
        inst = parse_dimacs(Path(args.cnf).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {args.cnf}: {exc.strerror}") from None
    except DimacsError as exc:
        raise UsageError(f"{args.cnf}: {exc}") from None
    if args.out_dir:
        out_dir = Path(args.out_dir)
    else:
        out_dir = Path(os.environ.get(ENV_OUT, "crossing-forge-out")) / Path(args.cnf).stem
    try:
        rep = end_to_end(inst, out_dir, source=Path(args.cnf).name)
    except OSError as exc:
        raise UsageError(f"cannot write artifacts to {out_dir}: {exc.strerror}") from None
    if args.json:
        _print_json(rep.to_json())
    else:
        sys.stdout.write(rep.to_text())
    return rep.exit_code


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crossing-forge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", help="build the weighted instance from a DIMACS file")
    s.add_argument("cnf")
    s.add_argument("--out", help="graph file to write (default: stdout)")
    s.add_argument("--trace", metavar="PATH", help="also write the construction trace")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("draw", help="canonical drawing for an assignment")
    s.add_argument("graph")
    s.add_argument("--assignment", required=True, help="bits such as 11000, or 'auto'")
    s.add_argument("--plan", default="auto", help="'auto' or comma-separated jump gadgets per clause")
    s.add_argument("--forced", action="store_true", help="draw even if a jump does not satisfy its clause")
    s.add_argument("--out", help="drawing file to write (default: stdout)")
    s.add_argument("--svg", help="also write an SVG rendering")
    s.add_argument("--mark-crossings", action="store_true")
    s.set_defaults(func=cmd_draw)

    s = sub.add_parser("audit", help="good-drawing and necessary-condition audits")
    s.add_argument("graph")
    s.add_argument("drawing")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("extract", help="read the truth assignment off a drawing")
    s.add_argument("graph")
    s.add_argument("drawing")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("decompose", help="certified path or tree decomposition")
    s.add_argument("graph")
    kind = s.add_mutually_exclusive_group()
    kind.add_argument("--path", action="store_true", default=True)
    kind.add_argument("--tree", action="store_true")
    s.add_argument("--subdivided", action="store_true", help="decompose the parallel-free subdivision")
    s.add_argument("--out")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("validate-decomposition", help="check a decomposition file against a graph")
    s.add_argument("graph")
    s.add_argument("decomposition")
    s.add_argument("--subdivided", action="store_true")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("analyze", help="staircase algebra")
    s.add_argument("what", choices=["a-of-h", "identities", "brute-min"])
    s.add_argument("--h", type=int, default=1)
    s.add_argument("--max-h", type=int, default=50)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simplify", help="subdivide parallel edges")
    s.add_argument("graph")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simplify)

    s = sub.add_parser("pw-exact", help="exact path-width of a tiny graph (graph file or edge list)")
    s.add_argument("graph")
    s.add_argument("--order", action="store_true", help="print an optimal vertex order")
    s.set_defaults(func=cmd_pw_exact)

    s = sub.add_parser("selfcheck", help="run the built-in verification suite")
    s.add_argument("--max-h", type=int, default=50)
    s.add_argument("--golden", type=Path)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selfcheck)

    s = sub.add_parser("end-to-end", help="full pipeline with artifacts and report")
    s.add_argument("cnf")
    s.add_argument("--out-dir")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_end_to_end)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
