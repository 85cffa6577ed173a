"""End-to-end pipeline and self-check used by the command line."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import analysis
from .cnf import CnfInstance, SAT_GUARD, brute_force_sat, format_assignment
from .drawing import (
    PlanError,
    RoutingPlan,
    audit_good_drawing,
    audit_necessary_conditions,
    build_canonical_drawing,
    count_crossings,
    export_svg,
    extract_assignment,
    write_drawing,
)
from .geometry import OverlapError, Point, parametric_intersection, segment_intersection
from .graph import (
    lift_path_decomposition,
    subdivide_parallel,
    validate_decomposition,
    write_decomposition,
    write_graph,
)
from .reduction import compute_k, reduce
from .weights import WeightPoly, compare_symbolic, Ordering
from .widths import certify_path, certify_tree

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSAT = 0, 1, 2, 3


@dataclass
class Stage:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class PipelineReport:
    source: str
    stages: list[Stage] = field(default_factory=list)
    headline: dict = field(default_factory=dict)
    artifacts: dict[str, str] = field(default_factory=dict)
    unsat: bool = False

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.stages.append(Stage(name, ok, detail))
        return ok

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.stages)

    @property
    def exit_code(self) -> int:
        if not self.ok:
            return EXIT_FAIL
        return EXIT_UNSAT if self.unsat else EXIT_OK

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "ok": self.ok,
            "unsat": self.unsat,
            "exit_code": self.exit_code,
            "headline": self.headline,
            "stages": [{"name": s.name, "ok": s.ok, "detail": s.detail} for s in self.stages],
            "artifacts": self.artifacts,
        }

    def to_text(self) -> str:
        lines = [f"source: {self.source}"]
        for s in self.stages:
            lines.append(f"  [{'ok' if s.ok else 'FAIL'}] {s.name}" + (f": {s.detail}" if s.detail else ""))
        for key in sorted(self.headline):
            lines.append(f"  {key} = {self.headline[key]}")
        verdict = "unsat demonstrated" if self.exit_code == EXIT_UNSAT else ("pass" if self.ok else "FAIL")
        lines.append(f"result: {verdict}")
        return "\n".join(lines) + "\n"


def _write(out_dir: Path, name: str, data: str | bytes, report: PipelineReport) -> None:
    path = out_dir / name
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        path.write_text(data, encoding="utf-8")
    report.artifacts[name] = name


def end_to_end(inst: CnfInstance, out_dir: Path, source: str = "") -> PipelineReport:
    """reduce, draw, audit, extract, decompose and validate; writes every artifact."""
    out_dir.mkdir(parents=True, exist_ok=True)
    rep = PipelineReport(source)
    g, trace = reduce(inst)
    rep.add("reduce", True, f"n={g.n} ell={g.ell} h={g.h}")
    _write(out_dir, "graph.cfg", write_graph(g), rep)
    _write(out_dir, "trace.txt", trace.to_text(), rep)
    rep.headline.update({
        "n": g.n, "ell": g.ell, "h": g.h, "vertices": len(g.vertices), "edges": len(g.edges),
        "omega": g.omega, "k": str(g.k), "k_value": str(g.k_value), "g_edges": g.ell,
    })

    tau = brute_force_sat(inst) if inst.n <= SAT_GUARD else None
    if tau is not None:
        plan = RoutingPlan.auto(g, tau)
        d = build_canonical_drawing(g, tau, plan)
        rep.add("draw", True, f"assignment {format_assignment(tau)} plan {list(plan.jumps)}")
        cs = count_crossings(g, d)
        good = audit_good_drawing(g, d)
        nec = audit_necessary_conditions(g, d, cs)
        rep.add("audit-good", good.passed, good.first_failure or "")
        rep.add("audit-necessary", nec.passed, nec.first_failure or "")
        back = extract_assignment(g, d)
        rep.add("extract-roundtrip", back == tuple(tau), format_assignment(back))
        rep.headline["crossing_total"] = str(cs.total)
        rep.headline["crossing_value"] = str(cs.total.eval(g.omega))
        rep.headline["assignment"] = format_assignment(tau)
    else:
        rep.unsat = True
        tau = tuple(True for _ in range(inst.n))
        try:
            RoutingPlan.auto(g, tau)
            rep.add("draw", False, "brute force found no assignment but a plan exists")
        except PlanError as exc:
            rep.add("draw", True, f"no satisfying assignment; refused at clause {exc.clause}")
        plan = RoutingPlan.forced(g, tau)
        d = build_canonical_drawing(g, tau, plan, forced=True)
        cs = count_crossings(g, d)
        nec = audit_necessary_conditions(g, d, cs)
        over = not nec.layer("BUDGET").ok
        rep.add("forced-routing", over, "BUDGET fails as expected" if over else "forced drawing fits the budget")
        rep.headline["forced_crossing_total"] = str(cs.total)
    _write(out_dir, "drawing.drw", write_drawing(d), rep)
    _write(out_dir, "drawing.svg", export_svg(g, d), rep)

    cp = certify_path(g)
    chk = validate_decomposition(g, cp.decomposition)
    rep.add("decompose-path", chk.valid and chk.width <= 12, f"width {chk.width}")
    ct = certify_tree(g)
    chk_t = validate_decomposition(g, ct.decomposition)
    mono = all(r.ok for r in ct.monotone.values()) and cp.monotone.ok
    rep.add("decompose-tree", chk_t.valid and chk_t.width <= 9, f"width {chk_t.width}")
    rep.add("monotone", mono)
    sub = subdivide_parallel(g)
    spd = lift_path_decomposition(cp.decomposition, sub, g)
    chk_s = validate_decomposition(sub.graph, spd)
    rep.add("decompose-subdivided", chk_s.valid and chk_s.width <= 13,
            f"width {chk_s.width}, {len(sub.subdivided)} edges subdivided")
    _write(out_dir, "path.dec", write_decomposition(cp.decomposition), rep)
    _write(out_dir, "tree.dec", write_decomposition(ct.decomposition), rep)
    rep.headline.update({"path_width": chk.width, "tree_width": chk_t.width})
    _write(out_dir, "report.json", json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n", rep)
    return rep


# ---------------------------------------------------------------------------
# golden values and self-check


def golden_values(max_h: int = 8) -> dict:
    """Recompute every frozen quantity that the golden file records."""
    ks = {}
    for n in range(1, 6):
        for ell in range(1, 5):
            poly, off = compute_k(n, ell)
            ks[f"{n},{ell}"] = {"poly": poly.to_array(), "offset": off}
    small = CnfInstance.from_lists(1, [[1]])
    g, _ = reduce(small)
    d = build_canonical_drawing(g, (True,), RoutingPlan.auto(g, (True,)))
    total = count_crossings(g, d).total
    return {
        "k": ks,
        "smallest_instance": {
            "vertices": len(g.vertices),
            "edges": len(g.edges),
            "omega": g.omega,
            "k_value": str(g.k_value),
            "crossing_total": str(total),
        },
        "a_of_h": {str(h): str(analysis.a_of_h(h)) for h in range(1, max_h + 1)},
        "placement_counts": {str(h): len(analysis.enumerate_placements(h)) for h in range(0, 7)},
    }


def load_golden(path: Path | None = None) -> dict:
    if path is None:
        text = resources.files("crossing_forge").joinpath("data/golden.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return json.loads(text)


def _diff(expected, actual, prefix="") -> list[str]:
    if isinstance(expected, dict) and isinstance(actual, dict):
        out = []
        for key in sorted(set(expected) | set(actual)):
            name = f"{prefix}.{key}" if prefix else str(key)
            if key not in actual:
                out.append(f"{name}: missing from recomputation")
            elif key not in expected:
                out.append(f"{name}: not in golden file")
            else:
                out.extend(_diff(expected[key], actual[key], name))
        return out
    return [] if expected == actual else [f"{prefix}: golden {expected!r} != computed {actual!r}"]


@dataclass
class SelfCheck:
    checks: list[Stage] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_text(self) -> str:
        lines = [f"[{'ok' if c.ok else 'FAIL'}] {c.name}" + (f": {c.detail}" if c.detail else "") for c in self.checks]
        return "\n".join(lines) + "\n"


def selfcheck(max_h: int = 50, brute_h: int = 6, golden: Path | None = None, seed: int = 0) -> SelfCheck:
    rep = SelfCheck()
    ident = analysis.check_induction_identities(max_h)
    rep.checks.append(Stage(f"induction identities h<={max_h}", ident.ok, "; ".join(ident.failures[:3])))
    for h in range(0, min(brute_h, analysis.PLACEMENT_GUARD) + 1):
        m = analysis.brute_force_min_placement(h)
        if h == 0:
            ok = m.min_cost.coeff(7) == 1
        else:
            ok = m.min_cost == analysis.a_of_h(h) and len(m.argmin) == 1 and m.argmin[0].alternating
        rep.checks.append(Stage(f"brute-min h={h}", ok, str(m.min_cost)))

    rng = random.Random(seed)
    ring_ok = True
    omega = 1000
    for _ in range(200):
        a, b, c = (WeightPoly.from_array(rng.randrange(0, 30) for _ in range(rng.randrange(1, 6))) for _ in range(3))
        ring_ok &= (a + b) * c == a * c + b * c and a * b == b * a and (a * b) * c == a * (b * c)
        want = (a.eval(omega) > b.eval(omega)) - (a.eval(omega) < b.eval(omega))
        ring_ok &= compare_symbolic(a, b, omega) is Ordering(want)
    rep.checks.append(Stage("weight ring and comparison properties", ring_ok))

    geo_ok = True
    for _ in range(500):
        p = [Point(Fraction(rng.randrange(-6, 7), rng.choice((1, 2, 3))),
                   Fraction(rng.randrange(-6, 7), rng.choice((1, 2, 3)))) for _ in range(4)]
        try:
            fast = segment_intersection(*p)
        except OverlapError:
            fast = "overlap"
        try:
            slow = parametric_intersection(*p)
        except OverlapError:
            slow = "overlap"
        geo_ok &= fast == slow
    rep.checks.append(Stage("segment predicate cross-check", geo_ok))

    try:
        expected = load_golden(golden)
    except (OSError, json.JSONDecodeError) as exc:
        rep.checks.append(Stage("golden file", False, f"unreadable: {exc}"))
        return rep
    diffs = _diff(expected, golden_values())
    rep.checks.append(Stage("golden file", not diffs, "; ".join(diffs[:5])))
    return rep
