"""Builds the weighted instance (G, k) from a CNF formula.

Phase order is fixed: variable gadgets, frame, stairs, cells, clause edges.
Edge ids follow creation order, so the same formula always yields the same
graph file byte for byte.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .cnf import CnfInstance
from .graph import (
    Edge,
    MultiGraph,
    ReductionGraph,
    VertexId,
    bv,
    clause_end,
    corner,
    frame,
    lbv,
    rv,
)
from .weights import BASE_WEIGHT, Color, WeightPoly, g_weight, s_weight, w

POS, NEG, NEUT = "pos", "neg", "neut"


def height(n: int, ell: int) -> int:
    return 4 * ell + n - 2


class _Builder:
    """Mutable edge store with phase tags; supports subdividing an edge."""

    def __init__(self):
        self.vertices: dict[VertexId, str] = {}
        self.edges: dict[int, tuple] = {}
        self.phase = ""
        self._next = 0

    def vertex(self, v: VertexId) -> VertexId:
        self.vertices.setdefault(v, self.phase)
        return v

    def edge(self, u: VertexId, v: VertexId, color: Color, weight: WeightPoly | None = None) -> int:
        for x in (u, v):
            if x not in self.vertices:
                raise KeyError(f"edge endpoint {x} was never created")
        key = self._next
        self._next += 1
        self.edges[key] = (u, v, color, BASE_WEIGHT[color] if weight is None else weight, self.phase)
        return key

    def path(self, nodes, color: Color, weights=None) -> list[int]:
        keys = []
        for k in range(len(nodes) - 1):
            wt = None if weights is None else weights[k]
            keys.append(self.edge(nodes[k], nodes[k + 1], color, wt))
        return keys

    def find(self, u: VertexId, v: VertexId) -> int:
        for key, (a, b, *_rest) in self.edges.items():
            if {a, b} == {u, v}:
                return key
        raise KeyError(f"no edge between {u} and {v}")

    def subdivide(self, key: int, s: VertexId) -> tuple[int, int]:
        u, v, color, weight, _ = self.edges.pop(key)
        self.vertex(s)
        return self.edge(u, s, color, weight), self.edge(s, v, color, weight)

    def finalize(self):
        """Renumber edges 0.. in creation order; return vertices, edges, phase manifests."""
        vertices = list(self.vertices)
        edges = []
        manifest: dict[str, dict[str, list]] = defaultdict(lambda: {"vertices": [], "edges": []})
        for v, ph in self.vertices.items():
            manifest[ph]["vertices"].append(v)
        for new_id, key in enumerate(sorted(self.edges)):
            u, v, color, weight, ph = self.edges[key]
            edges.append(Edge(new_id, u, v, color, weight))
            manifest[ph]["edges"].append(new_id)
        return vertices, edges, dict(manifest)


# ---------------------------------------------------------------------------
# phases


def _gadget(bld: _Builder, i: int, h: int) -> None:
    bld.phase = f"gadget[{i}]"
    u0, u1, w0, w1 = (bld.vertex(corner(i, c)) for c in ("u0", "u1", "w0", "w1"))
    for side in ("P", "N"):
        bs = [bld.vertex(bv(i, j, side)) for j in range(1, h + 3)]
        bld.path(bs, Color.B, [s_weight(j) for j in range(1, h + 2)])
        vs = [bld.vertex(lbv(i, j, side)) for j in range(1, h + 3)]
        bld.path(vs, Color.LB)
    for side in ("L", "R"):
        rs = [bld.vertex(rv(i, j, side)) for j in range(1, h + 4)]
        bld.path(rs, Color.R, [g_weight(j) for j in range(1, h + 3)])
    for side in ("P", "N"):
        bld.edge(bv(i, 1, side), u0, Color.HB)
        bld.edge(bv(i, h + 2, side), w0, Color.HB)
        bld.edge(lbv(i, 1, side), u1, Color.HB)
        bld.edge(lbv(i, h + 2, side), w1, Color.HB)
    for side in ("L", "R"):
        bld.edge(rv(i, 1, side), u0, Color.HB)
        bld.edge(rv(i, 1, side), u1, Color.HB)
        bld.edge(rv(i, h + 3, side), w0, Color.HB)
        bld.edge(rv(i, h + 3, side), w1, Color.HB)
    for j in range(2, h + 2):
        for side in ("P", "N"):
            bld.edge(bv(i, j, side), lbv(i, j, side), Color.B_STAIR)


def _frame(bld: _Builder, n: int, h: int) -> None:
    bld.phase = "frame"
    bl, tl, tr, br = (bld.vertex(frame(c)) for c in ("BL", "TL", "TR", "BR"))
    bld.edge(bl, tl, Color.HB)
    bld.path([tl] + [bld.vertex(corner(i, "w0")) for i in range(1, n + 1)] + [tr], Color.HB)
    bld.edge(tr, br, Color.HB)
    bld.path([br] + [bld.vertex(corner(i, "u0")) for i in range(n, 0, -1)] + [bl], Color.HB)
    left = [bld.vertex(rv(0, j, "R")) for j in range(2, h + 3)]
    bld.path([bl] + left + [tl], Color.HB)
    right = [bld.vertex(rv(n + 1, j, "L")) for j in range(2, h + 3)]
    bld.path([br] + right + [tr], Color.HB)


def _stairs(bld: _Builder, n: int, h: int) -> None:
    bld.phase = "stairs"
    for i in range(1, n + 2):
        for j in range(2, h + 3):
            bld.edge(rv(i - 1, j, "R"), rv(i, j, "L"), Color.R_STAIR)


def cell_type(inst: CnfInstance, i: int, j: int) -> str:
    occ = inst.occurrence(i, j)
    return POS if occ > 0 else NEG if occ < 0 else NEUT


def _cells(bld: _Builder, inst: CnfInstance, h: int, types: dict) -> None:
    n, ell = inst.n, inst.ell
    if h != height(n, ell):
        raise ValueError(f"height {h} does not match 4*ell+n-2 = {height(n, ell)}")
    P = lambda i, r: lbv(i, r, "P")  # noqa: E731
    N = lambda i, r: lbv(i, r, "N")  # noqa: E731
    for i in range(1, n + 1):
        bld.phase = f"cell-separators[{i}]"
        below = [N(i, 1)]
        for r in range(2, i + 1):
            below += [P(i, r), N(i, r)]
        below.append(P(i, i + 1))
        bld.path(below, Color.LB)
        above = [N(i, 4 * ell + i - 1)]
        for r in range(4 * ell + i, h + 2):
            above += [P(i, r), N(i, r)]
        above.append(P(i, h + 2))
        bld.path(above, Color.LB)
        for j in range(1, ell):
            bld.path([N(i, 4 * j + i - 1), P(i, 4 * j + i), N(i, 4 * j + i), P(i, 4 * j + i + 1)], Color.LB)
        for j in range(1, ell + 1):
            bld.phase = f"cell[{i},{j}]"
            a = 4 * j + i - 3
            for r in (a, a + 2):
                if not 1 <= r <= h + 2:
                    raise IndexError(f"cell ({i},{j}) row {r} outside gadget of height {h}")
            kind = cell_type(inst, i, j)
            types[(i, j)] = kind
            bld.edge(P(i, a), N(i, a), Color.LB)
            bld.edge(P(i, a + 2), N(i, a + 2), Color.LB)
            if kind == POS:
                bld.path([P(i, a), N(i, a + 1), P(i, a + 1), N(i, a + 2)], Color.C)
            elif kind == NEG:
                bld.path([N(i, a), P(i, a + 1), N(i, a + 1), P(i, a + 2)], Color.C)
            else:
                bld.edge(P(i, a + 1), N(i, a + 1), Color.LB)
                bld.edge(P(i, a), N(i, a + 1), Color.C)
                bld.edge(N(i, a + 1), P(i, a + 2), Color.C)


def _clause_edges(bld: _Builder, n: int, ell: int) -> None:
    for j in range(1, ell + 1):
        bld.phase = f"clause[{j}]"
        left = bld.find(rv(0, 4 * j - 2, "R"), rv(0, 4 * j - 1, "R"))
        bld.subdivide(left, clause_end(j, "L"))
        right = bld.find(rv(n + 1, 4 * j + n - 1, "L"), rv(n + 1, 4 * j + n, "L"))
        bld.subdivide(right, clause_end(j, "R"))
        bld.edge(clause_end(j, "L"), clause_end(j, "R"), Color.G)


# ---------------------------------------------------------------------------
# public fragment builders


def _fragment(bld: _Builder) -> MultiGraph:
    vertices, edges, _ = bld.finalize()
    return MultiGraph(vertices, edges)


def build_var_gadget(i: int, h: int) -> MultiGraph:
    if h < 1:
        raise ValueError(f"gadget height must be >= 1, got {h}")
    bld = _Builder()
    _gadget(bld, i, h)
    return _fragment(bld)


def build_frame(n: int, h: int) -> MultiGraph:
    if n < 1 or h < 1:
        raise ValueError("frame needs n >= 1 and h >= 1")
    bld = _Builder()
    _frame(bld, n, h)
    return _fragment(bld)


def _assemble(bld: _Builder, n: int, h: int) -> None:
    for i in range(1, n + 1):
        _gadget(bld, i, h)
    _frame(bld, n, h)
    _stairs(bld, n, h)


def assemble_frame_with_gadgets(n: int, h: int) -> MultiGraph:
    if n < 1 or h < 1:
        raise ValueError("need n >= 1 and h >= 1")
    bld = _Builder()
    _assemble(bld, n, h)
    return _fragment(bld)


def cut_tuple(i: int, h: int) -> tuple[VertexId, ...]:
    """The eight vertices that separate gadget i's block from the rest of G'."""
    return (
        corner(i, "u0"), corner(i, "u1"), rv(i, 1, "L"), rv(i, 1, "R"),
        corner(i, "w0"), corner(i, "w1"), rv(i, h + 3, "L"), rv(i, h + 3, "R"),
    )


# ---------------------------------------------------------------------------
# budget


def stair_sums(h: int) -> tuple[int, int]:
    """(sum_{j=2}^{h+1} j(j+1), sum_{j=1}^{h+1} j(j+2))."""
    return (
        sum(j * (j + 1) for j in range(2, h + 2)),
        sum(j * (j + 2) for j in range(1, h + 2)),
    )


def compute_k(n: int, ell: int) -> tuple[WeightPoly, int]:
    """Budget as (symbolic part, integer offset); k = part(omega) + offset."""
    if n < 1 or ell < 1:
        raise ValueError("need n >= 1 and ell >= 1")
    h = height(n, ell)
    sg, ss = stair_sums(h)
    poly = (
        w(7, 2 * n * (2 * h + 1))
        + w(6, 2 * n * ell)
        + w(4, 4 * n * ell + 2 * n * sg + 2 * n * ss)
        + w(2, n * ell + 1)
    )
    return poly, -1


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class ConstructionTrace:
    phases: dict[str, dict[str, list]] = field(default_factory=dict)
    cell_types: dict[tuple[int, int], str] = field(default_factory=dict)
    parallel_families: list[tuple[str, str, int]] = field(default_factory=list)

    def edge_partition_ok(self, g: MultiGraph) -> bool:
        seen = [eid for ph in self.phases.values() for eid in ph["edges"]]
        return sorted(seen) == sorted(e.id for e in g.edges)

    def to_text(self) -> str:
        lines = ["crossing-forge-trace v1"]
        for name, data in self.phases.items():
            lines.append(f"phase {name} vertices={len(data['vertices'])} edges={len(data['edges'])}")
            lines.append("  edge-ids " + " ".join(map(str, data["edges"])))
        for (i, j), kind in sorted(self.cell_types.items()):
            lines.append(f"cell {i} {j} {kind}")
        if self.parallel_families:
            for u, v, count in self.parallel_families:
                lines.append(f"parallel {u} {v} {count}")
        else:
            lines.append("parallel none")
        return "\n".join(lines) + "\n"


def color_counts(g: MultiGraph) -> Counter:
    return Counter(e.color for e in g.edges)


def expected_color_counts(inst: CnfInstance) -> dict[Color, int]:
    """Closed-form per-color edge counts from the index ranges."""
    n, ell = inst.n, inst.ell
    h = height(n, ell)
    neut = sum(1 for i in range(1, n + 1) for j in range(1, ell + 1) if cell_type(inst, i, j) == NEUT)
    return {
        Color.HB: (2 * n + 4) + 2 * (h + 2) + 2 * ell + 16 * n,
        Color.B: 2 * n * (h + 1),
        Color.R: 2 * n * (h + 2),
        Color.LB: 2 * n * (h + 1) + n * (2 * n + 3 * (ell - 1) + 2 * ell) + neut,
        Color.C: 3 * (n * ell - neut) + 2 * neut,
        Color.B_STAIR: 2 * n * h,
        Color.R_STAIR: (n + 1) * (h + 1),
        Color.G: ell,
    }


def reduce(inst: CnfInstance) -> tuple[ReductionGraph, ConstructionTrace]:
    n, ell = inst.n, inst.ell
    h = height(n, ell)
    bld = _Builder()
    trace = ConstructionTrace()
    _assemble(bld, n, h)
    _cells(bld, inst, h, trace.cell_types)
    _clause_edges(bld, n, ell)
    vertices, edges, phases = bld.finalize()
    trace.phases = phases
    omega = len(edges) ** 2
    k, offset = compute_k(n, ell)
    g = ReductionGraph(vertices, edges, n=n, ell=ell, h=h, omega=omega, k=k, k_offset=offset)
    pairs = Counter(e.ends for e in edges)
    trace.parallel_families = sorted(
        (str(min(p, key=str)), str(max(p, key=str)), c) for p, c in pairs.items() if c > 1
    )
    check_invariants(g, trace)
    return g, trace


def check_invariants(g: ReductionGraph, trace: ConstructionTrace | None = None) -> None:
    """Raise AssertionError if any structural invariant of the instance fails."""
    if g.h != height(g.n, g.ell):
        raise AssertionError("h != 4*ell+n-2")
    if g.omega != len(g.edges) ** 2:
        raise AssertionError("omega != |E|^2")
    k, offset = compute_k(g.n, g.ell)
    if k != g.k or offset != g.k_offset:
        raise AssertionError("stored k differs from recomputed budget")
    if k.max_coeff() >= g.omega:
        raise AssertionError("a coefficient of k is not below omega")
    for e in g.edges:
        if e.weight != expected_weight(e):
            raise AssertionError(f"edge {e.id} weight {e.weight} does not match color {e.color.value}")
        if e.weight.max_coeff() >= g.omega:
            raise AssertionError(f"edge {e.id} weight coefficient not below omega")
    if trace is not None and not trace.edge_partition_ok(g):
        raise AssertionError("trace manifests do not partition E")


def vertical_index(e: Edge) -> int | None:
    """Row index j of an R or B path edge (the edge joins rows j and j+1)."""
    if e.color not in (Color.R, Color.B):
        return None
    return min(e.u.j, e.v.j)


def expected_weight(e: Edge) -> WeightPoly:
    if e.color is Color.R:
        return g_weight(vertical_index(e))
    if e.color is Color.B:
        return s_weight(vertical_index(e))
    return BASE_WEIGHT[e.color]


def edge_gadget(e: Edge) -> int | None:
    """Gadget index owning an R/B/LB/C/B' edge; None for frame, R' and G edges."""
    if e.color in (Color.R, Color.B, Color.LB, Color.C, Color.B_STAIR):
        return e.u.i if e.u.kind in ("r", "b", "v") else e.v.i
    return None
