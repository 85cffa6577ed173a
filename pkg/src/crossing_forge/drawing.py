"""Drawings with exact crossing accounting, the canonical layout, audits and I/O.

A drawing maps every vertex to a rational point and every edge to a
polyline whose first and last points are its endpoints.  Crossings are
computed, never assumed.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .cnf import Assignment, CnfInstance, literal_order
from .geometry import OverlapError, Point, fmt_q, on_segment, parse_q, pt, segment_intersection
from .graph import Edge, MultiGraph, ReductionGraph, clause_end, corner, frame, lbv, parse_label
from .reduction import NEG, NEUT, POS, edge_gadget, vertical_index
from .weights import ZERO, Color, WeightPoly

DRAWING_MAGIC = "crossing-forge-drawing v1"

# layout constants: gadget i is centred at x = BAND * i
BAND = 6
Q = Fraction


class DrawingError(ValueError):
    pass


class PlanError(ValueError):
    """A routing plan does not satisfy some clause under the assignment."""

    def __init__(self, clause: int, message: str):
        super().__init__(message)
        self.clause = clause


@dataclass(frozen=True)
class Drawing:
    points: dict
    routes: dict[int, tuple[Point, ...]]

    def segments(self) -> Iterable[tuple[int, Point, Point]]:
        for eid in sorted(self.routes):
            poly = self.routes[eid]
            for a, b in zip(poly, poly[1:]):
                yield eid, a, b


@dataclass(frozen=True)
class Crossing:
    e: int
    f: int
    point: Point
    cost: WeightPoly


@dataclass(frozen=True)
class CrossingSet:
    crossings: tuple[Crossing, ...]
    total: WeightPoly

    def __len__(self) -> int:
        return len(self.crossings)

    def by_edge(self) -> dict[int, list[Crossing]]:
        out: dict[int, list[Crossing]] = defaultdict(list)
        for c in self.crossings:
            out[c.e].append(c)
            out[c.f].append(c)
        return out


def straight_drawing(g: MultiGraph, points: dict) -> Drawing:
    return Drawing(dict(points), {e.id: (points[e.u], points[e.v]) for e in g.edges})


def validate_routes(g: MultiGraph, d: Drawing) -> None:
    if len(set(d.points.values())) != len(d.points):
        raise DrawingError("two vertices share a point")
    for e in g.edges:
        poly = d.routes.get(e.id)
        if poly is None or len(poly) < 2:
            raise DrawingError(f"edge {e.id} has no polyline")
        ends = {poly[0], poly[-1]}
        if ends != {d.points[e.u], d.points[e.v]}:
            raise DrawingError(f"polyline of edge {e.id} does not join its endpoints")


# ---------------------------------------------------------------------------
# intersection engine


def _cells(a: Point, b: Point):
    for gx in range(math.floor(min(a.x, b.x)), math.floor(max(a.x, b.x)) + 1):
        for gy in range(math.floor(min(a.y, b.y)), math.floor(max(a.y, b.y)) + 1):
            yield gx, gy


def _segment_grid(d: Drawing):
    segs = list(d.segments())
    grid: dict[tuple[int, int], list[int]] = defaultdict(list)
    for k, (_, a, b) in enumerate(segs):
        for cell in _cells(a, b):
            grid[cell].append(k)
    return segs, grid


def common_points(g: MultiGraph, d: Drawing) -> list[tuple[int, int, Point]]:
    """All points shared by two distinct edge curves, endpoints excluded.

    Returned once per (edge pair, point), pairs ordered by id.  Points that
    coincide with an endpoint vertex of either edge are skipped here; a
    vertex sitting inside another edge is reported by the good-drawing
    audit instead.
    """
    segs, grid = _segment_grid(d)
    ends = {e.id: {d.points[e.u], d.points[e.v]} for e in g.edges}
    seen_pairs: set[tuple[int, int]] = set()
    found: set[tuple[int, int, Point]] = set()
    for bucket in grid.values():
        for x in range(len(bucket)):
            for y in range(x + 1, len(bucket)):
                s, t = bucket[x], bucket[y]
                if s > t:
                    s, t = t, s
                if (s, t) in seen_pairs:
                    continue
                seen_pairs.add((s, t))
                e, a, b = segs[s]
                f, c, dd = segs[t]
                if e == f:
                    continue
                try:
                    p = segment_intersection(a, b, c, dd)
                except OverlapError:
                    raise DrawingError(f"edges {min(e, f)} and {max(e, f)} overlap along a segment") from None
                if p is None or p in ends[e] or p in ends[f]:
                    continue
                found.add((min(e, f), max(e, f), p))
    return sorted(found, key=lambda r: (r[0], r[1], r[2]))


def count_crossings(g: MultiGraph, d: Drawing) -> CrossingSet:
    """Crossings between non-adjacent edges; each costs the product of weights."""
    edges = g.edge_by_id
    out = []
    total = ZERO
    for e, f, p in common_points(g, d):
        a, b = edges[e], edges[f]
        if a.ends & b.ends:
            continue
        cost = a.weight * b.weight
        out.append(Crossing(e, f, p, cost))
        total = total + cost
    return CrossingSet(tuple(out), total)


# ---------------------------------------------------------------------------
# good-drawing audit


@dataclass
class LayerResult:
    name: str
    ok: bool = True
    messages: list[str] = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        if len(self.messages) < 20:
            self.messages.append(msg)


@dataclass
class AuditReport:
    layers: list[LayerResult]

    @property
    def passed(self) -> bool:
        return all(layer.ok for layer in self.layers)

    def layer(self, name: str) -> LayerResult:
        return next(layer for layer in self.layers if layer.name == name)

    @property
    def first_failure(self) -> str | None:
        return next((layer.name for layer in self.layers if not layer.ok), None)

    def to_text(self) -> str:
        lines = []
        for layer in self.layers:
            lines.append(f"{layer.name}: {'pass' if layer.ok else 'FAIL'}")
            lines.extend(f"  {m}" for m in layer.messages)
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "layers": [{"name": l.name, "ok": l.ok, "messages": l.messages} for l in self.layers],
        }


def audit_good_drawing(g: MultiGraph, d: Drawing) -> AuditReport:
    once = LayerResult("at-most-once")
    adjacent = LayerResult("adjacent-disjoint")
    triple = LayerResult("no-triple-point")
    vertex = LayerResult("vertex-free-interiors")
    edges = g.edge_by_id
    pts = common_points(g, d)
    per_pair = Counter((e, f) for e, f, _ in pts)
    at_point: dict[Point, set[int]] = defaultdict(set)
    for e, f, p in pts:
        at_point[p].update((e, f))
        if edges[e].ends & edges[f].ends:
            adjacent.fail(f"adjacent edges {e} and {f} meet at ({p.x}, {p.y})")
    for (e, f), cnt in sorted(per_pair.items()):
        if cnt > 1 and not edges[e].ends & edges[f].ends:
            once.fail(f"edges {e} and {f} cross {cnt} times")
    for p, es in sorted(at_point.items()):
        if len(es) >= 3:
            triple.fail(f"edges {sorted(es)} share the point ({p.x}, {p.y})")
    segs, grid = _segment_grid(d)
    for v, p in sorted(d.points.items(), key=lambda kv: str(kv[0])):
        cell = (math.floor(p.x), math.floor(p.y))
        for k in grid.get(cell, ()):
            eid, a, b = segs[k]
            e = edges[eid]
            if v in (e.u, e.v):
                continue
            if on_segment(p, a, b):
                vertex.fail(f"vertex {v} lies on edge {eid}")
    return AuditReport([once, adjacent, triple, vertex])


# ---------------------------------------------------------------------------
# routing plans and the canonical layout


def cell_types_from_graph(g: ReductionGraph) -> dict[tuple[int, int], str]:
    pairs = g.edge_pairs()
    colors = {e.ends: e.color for e in g.edges}
    out = {}
    for i in range(1, g.n + 1):
        for j in range(1, g.ell + 1):
            a = 4 * j + i - 3
            P = lambda r: lbv(i, r, "P")  # noqa: E731
            N = lambda r: lbv(i, r, "N")  # noqa: E731
            mid = frozenset((P(a + 1), N(a + 1)))
            if mid in pairs and colors[mid] is Color.LB:
                out[(i, j)] = NEUT
            elif frozenset((P(a), N(a + 1))) in pairs:
                out[(i, j)] = POS
            elif frozenset((N(a), P(a + 1))) in pairs:
                out[(i, j)] = NEG
            else:
                raise DrawingError(f"cell ({i},{j}) has no recognisable type")
    return out


def instance_from_graph(g: ReductionGraph) -> CnfInstance:
    types = cell_types_from_graph(g)
    clauses = []
    for j in range(1, g.ell + 1):
        lits = [i if types[(i, j)] == POS else -i for i in range(1, g.n + 1) if types[(i, j)] != NEUT]
        clauses.append(lits)
    return CnfInstance.from_lists(g.n, clauses)


def literal_true(kind: str, value: bool) -> bool:
    return (kind == POS and value) or (kind == NEG and not value)


@dataclass(frozen=True)
class RoutingPlan:
    """Jump gadget m(j) for every clause j (index 0 holds clause 1)."""

    jumps: tuple[int, ...]

    @classmethod
    def auto(cls, g: ReductionGraph, tau: Assignment) -> "RoutingPlan":
        """Smallest variable index satisfying each clause; refuses otherwise."""
        types = cell_types_from_graph(g)
        jumps = []
        for j in range(1, g.ell + 1):
            m = next((i for i in range(1, g.n + 1) if literal_true(types[(i, j)], tau[i - 1])), None)
            if m is None:
                raise PlanError(j, f"clause {j} is not satisfied by the assignment")
            jumps.append(m)
        return cls(tuple(jumps))

    @classmethod
    def forced(cls, g: ReductionGraph, tau: Assignment) -> "RoutingPlan":
        """Like ``auto`` but unsatisfied clauses jump at their first literal's gadget."""
        types = cell_types_from_graph(g)
        inst = instance_from_graph(g)
        jumps = []
        for j in range(1, g.ell + 1):
            m = next((i for i in range(1, g.n + 1) if literal_true(types[(i, j)], tau[i - 1])), None)
            if m is None:
                m = abs(min(inst.clauses[j - 1], key=literal_order))
            jumps.append(m)
        return cls(tuple(jumps))

    def check(self, g: ReductionGraph, tau: Assignment) -> list[int]:
        """Clauses whose jump gadget does not satisfy them under tau."""
        if len(self.jumps) != g.ell:
            raise ValueError(f"plan has {len(self.jumps)} entries for {g.ell} clauses")
        types = cell_types_from_graph(g)
        bad = []
        for j, m in enumerate(self.jumps, 1):
            if not 1 <= m <= g.n:
                raise ValueError(f"clause {j}: jump gadget {m} out of range")
            if not literal_true(types[(m, j)], tau[m - 1]):
                bad.append(j)
        return bad


def right_side(n: int) -> int:
    return BAND * (n + 1) - 1


def _vertex_point(v, g: ReductionGraph, tau: Assignment) -> Point:
    n, h = g.n, g.h
    R = right_side(n)
    k = v.kind
    if k == "frame":
        return {"BL": pt(1, 0), "TL": pt(1, h + 4), "BR": pt(R, 0), "TR": pt(R, h + 4)}[v.side]
    if k == "c":
        return pt(1, Q(8 * v.j - 3, 2)) if v.side == "L" else pt(R, Q(8 * v.j + 2 * n - 1, 2))
    if k == "r" and v.i == 0:
        return pt(1, v.j)
    if k == "r" and v.i == n + 1:
        return pt(R, v.j)
    c = BAND * v.i
    if k == "corner":
        return {"u0": pt(c, 0), "u1": pt(c, 2), "w1": pt(c, h + 2), "w0": pt(c, h + 4)}[v.side]
    if k == "r":
        sx = -1 if v.side == "L" else 1
        if v.j == 1:
            return pt(c + sx * Q(1, 2), 1)
        if v.j == h + 3:
            return pt(c + sx * Q(1, 2), h + 3)
        return pt(c + sx * Q(3, 2), v.j)
    sp = -1 if tau[v.i - 1] else 1
    sx = sp if v.side == "P" else -sp
    if k == "b":
        y = 1 if v.j == 1 else h + 3 if v.j == h + 2 else Q(2 * v.j + 1, 2)
        return pt(c + 2 * sx, y)
    if k == "v":
        y = 2 if v.j == 1 else h + 2 if v.j == h + 2 else Q(2 * v.j + 1, 2)
        return pt(c + sx, y)
    raise DrawingError(f"no canonical position for vertex {v}")


def _clause_route(g: ReductionGraph, j: int, m: int) -> tuple[Point, ...]:
    n = g.n
    out = [pt(1, Q(8 * j - 3, 2))]
    for i in range(1, n + 1):
        c = BAND * i
        a = 4 * j + i - 3
        if i < m:
            yl, yr = a + Q(3, 4), a + Q(5, 4)
        elif i == m:
            yl, yr = a + Q(3, 4), a + Q(9, 4)
        else:
            yl, yr = a + Q(7, 4), a + Q(9, 4)
        out += [pt(c - Q(9, 4), yl), pt(c - Q(3, 4), yl), pt(c + Q(3, 4), yr), pt(c + Q(9, 4), yr)]
    out.append(pt(right_side(n), Q(8 * j + 2 * n - 1, 2)))
    return tuple(out)


def build_canonical_drawing(g: ReductionGraph, tau: Assignment, plan: RoutingPlan,
                            forced: bool = False) -> Drawing:
    """Grid layout realising the budget for a satisfying assignment.

    Gadget i is centred at x = 6i; its positive LB path sits left of the
    negative one iff tau(x_i) is True.  With ``forced`` the plan is drawn
    even when a jump sits in a cell that does not satisfy its clause.
    """
    if len(tau) != g.n:
        raise ValueError(f"assignment has {len(tau)} values, graph has {g.n} variables")
    bad = plan.check(g, tau)
    if bad and not forced:
        raise PlanError(bad[0], f"clause {bad[0]}: jump gadget {plan.jumps[bad[0] - 1]} does not satisfy it")
    points = {v: _vertex_point(v, g, tau) for v in g.vertices}
    routes: dict[int, tuple[Point, ...]] = {}
    h, R = g.h, right_side(g.n)
    bl, tl, tr, br = frame("BL"), frame("TL"), frame("TR"), frame("BR")
    for e in g.edges:
        if e.color is Color.G:
            j = e.u.j
            poly = _clause_route(g, j, plan.jumps[j - 1])
            routes[e.id] = poly if e.u == clause_end(j, "L") else poly[::-1]
            continue
        if e.ends == {bl, tl}:
            poly = (pt(1, 0), pt(0, 1), pt(0, h + 3), pt(1, h + 4))
            routes[e.id] = poly if e.u == bl else poly[::-1]
            continue
        if e.ends == {br, tr}:
            poly = (pt(R, 0), pt(R + 1, 1), pt(R + 1, h + 3), pt(R, h + 4))
            routes[e.id] = poly if e.u == br else poly[::-1]
            continue
        routes[e.id] = (points[e.u], points[e.v])
    d = Drawing(points, routes)
    validate_routes(g, d)
    return d


# ---------------------------------------------------------------------------
# assignment extraction


def extract_assignment(g: ReductionGraph, d: Drawing) -> Assignment:
    """tau(x_i) is True iff the positive LB path of gadget i lies left of the negative one."""
    out = []
    for i in range(1, g.n + 1):
        sides = set()
        for j in range(1, g.h + 3):
            p, q = d.points[lbv(i, j, "P")], d.points[lbv(i, j, "N")]
            if p.x == q.x:
                raise DrawingError(f"gadget {i}: LB paths touch at row {j}")
            sides.add(p.x < q.x)
        if len(sides) != 1:
            raise DrawingError(f"gadget {i}: LB paths swap sides, so they cross")
        out.append(sides.pop())
    return tuple(out)


# ---------------------------------------------------------------------------
# necessary-condition audit


_STAIRS = (Color.R_STAIR, Color.B_STAIR)
_VERT = (Color.R, Color.B)
_G_PARTNERS = frozenset({Color.LB, Color.C, Color.R, Color.B, Color.G})


def audit_necessary_conditions(g: ReductionGraph, d: Drawing,
                               crossings: CrossingSet | None = None) -> AuditReport:
    cs = crossings if crossings is not None else count_crossings(g, d)
    edges = g.edge_by_id
    hb = LayerResult("HB")
    pairs = LayerResult("PAIRS")
    alt = LayerResult("ALT")
    sig = LayerResult("SIG")
    budget = LayerResult("BUDGET")

    for c in cs.crossings:
        a, b = edges[c.e], edges[c.f]
        colors = {a.color, b.color}
        if Color.HB in colors:
            hb.fail(f"HB edge involved in crossing of edges {c.e} and {c.f}")
            continue
        if Color.G in colors:
            other = b.color if a.color is Color.G else a.color
            if other not in _G_PARTNERS:
                pairs.fail(f"G edge crosses {other.value} edge ({c.e}, {c.f})")
            continue
        stair_vertical = (a.color in _VERT and b.color in _STAIRS) or (b.color in _VERT and a.color in _STAIRS)
        both_stairs = a.color in _STAIRS and b.color in _STAIRS
        if not (stair_vertical or both_stairs):
            pairs.fail(f"forbidden crossing {a.color.value} x {b.color.value} ({c.e}, {c.f})")

    by_edge = cs.by_edge()
    for e in g.edges:
        if e.color not in _STAIRS:
            continue
        partners = [edges[c.f if c.e == e.id else c.e] for c in by_edge.get(e.id, ())]
        if e.color is Color.B_STAIR:
            rs = [p for p in partners if p.color is Color.R]
            if len(rs) != 1:
                alt.fail(f"B' edge {e.id} crosses {len(rs)} R edges")
            for r in rs:
                if vertical_index(r) in (1, g.h + 2):
                    alt.fail(f"B' edge {e.id} crosses the end edge {r.id} of an R path")
        else:
            bs = Counter(edge_gadget(p) for p in partners if p.color is Color.B)
            left, right = e.u.i, e.v.i
            expect = {i for i in (left, right) if 1 <= i <= g.n}
            if set(bs) != expect or any(v != 1 for v in bs.values()):
                alt.fail(f"R' edge {e.id} crosses B edges of gadgets {dict(sorted(bs.items()))}, "
                         f"expected one in each of {sorted(expect)}")

    want = {Color.LB: 2, Color.B: 2, Color.R: 2, Color.C: 1}
    for e in g.edges:
        if e.color is not Color.G:
            continue
        per_gadget: dict[int, Counter] = defaultdict(Counter)
        for c in by_edge.get(e.id, ()):
            other = edges[c.f if c.e == e.id else c.e]
            gi = edge_gadget(other)
            if gi is not None:
                per_gadget[gi][other.color] += 1
        for i in range(1, g.n + 1):
            got = {col: per_gadget[i][col] for col in per_gadget[i]}
            if got != want:
                sig.fail(f"clause {e.u.j} in gadget {i}: "
                         + ", ".join(f"{col.value}={cnt}" for col, cnt in sorted(got.items())))

    value = cs.total.eval(g.omega)
    if value > g.k_value:
        budget.fail(f"total {value} exceeds k = {g.k_value} by {value - g.k_value}")
    return AuditReport([hb, pairs, alt, sig, budget])


# ---------------------------------------------------------------------------
# file format and SVG


def write_drawing(d: Drawing) -> str:
    lines = [DRAWING_MAGIC, f"vertices {len(d.points)}"]
    for v in sorted(d.points, key=str):
        p = d.points[v]
        lines.append(f"vertex {v} {fmt_q(p.x)} {fmt_q(p.y)}")
    lines.append(f"routes {len(d.routes)}")
    for eid in sorted(d.routes):
        pts = " ".join(f"{fmt_q(p.x)},{fmt_q(p.y)}" for p in d.routes[eid])
        lines.append(f"route {eid} {pts}")
    return "\n".join(lines) + "\n"


def read_drawing(text: str) -> Drawing:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != DRAWING_MAGIC:
        raise ValueError(f"not a drawing file (expected header {DRAWING_MAGIC!r})")
    points = {}
    routes = {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "vertex":
            points[parse_label(parts[1])] = Point(parse_q(parts[2]), parse_q(parts[3]))
        elif parts[0] == "route":
            poly = []
            for tok in parts[2:]:
                x, y = tok.split(",")
                poly.append(Point(parse_q(x), parse_q(y)))
            routes[int(parts[1])] = tuple(poly)
    return Drawing(points, routes)


SVG_COLORS = {
    Color.HB: "#222222",
    Color.LB: "#6baed6",
    Color.R: "#d62728",
    Color.R_STAIR: "#f4a3a3",
    Color.B: "#1f3fbf",
    Color.B_STAIR: "#9fb3f0",
    Color.C: "#17becf",
    Color.G: "#2ca02c",
}
SVG_WIDTH = {Color.HB: 3, Color.LB: 2}


def export_svg(g: MultiGraph, d: Drawing, scale: int = 24, mark_crossings: bool = False) -> bytes:
    pts = list(d.points.values()) + [p for poly in d.routes.values() for p in poly]
    if pts:
        x0, x1 = min(p.x for p in pts), max(p.x for p in pts)
        y0, y1 = min(p.y for p in pts), max(p.y for p in pts)
    else:
        x0 = x1 = y0 = y1 = Fraction(0)
    pad = 1
    width = float((x1 - x0 + 2 * pad) * scale)
    height_px = float((y1 - y0 + 2 * pad) * scale)

    def tx(p: Point) -> str:
        x = float((p.x - x0 + pad) * scale)
        y = float((y1 - p.y + pad) * scale)
        return f"{x:.2f},{y:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height_px:.0f}" '
        f'viewBox="0 0 {width:.2f} {height_px:.2f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for e in sorted(g.edges, key=lambda e: e.id):
        color = SVG_COLORS.get(e.color, "#000000")
        sw = SVG_WIDTH.get(e.color, 1)
        path = " ".join(tx(p) for p in d.routes[e.id])
        out.append(f'<polyline class="{e.color.name}" points="{path}" fill="none" '
                   f'stroke="{color}" stroke-width="{sw}"/>')
    for v in sorted(d.points, key=str):
        x, y = tx(d.points[v]).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="2" fill="black"><title>{v}</title></circle>')
    if mark_crossings:
        for c in count_crossings(g, d).crossings:
            x, y = tx(c.point).split(",")
            out.append(f'<circle class="crossing" cx="{x}" cy="{y}" r="3" fill="none" stroke="orange"/>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
