"""Weighted multigraph container, vertex labels, decompositions and their checks."""

from __future__ import annotations

import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple, Sequence

from .weights import ONE, Color, WeightPoly

GRAPH_MAGIC = "crossing-forge-graph v1"
DECOMP_MAGIC = "crossing-forge-decomposition v1"

PATHWIDTH_GUARD = 20
EXPAND_GUARD = 10**6


class VertexId(NamedTuple):
    """Structural vertex label.

    ``kind`` is one of ``frame``, ``r``, ``b``, ``v``, ``corner``, ``c``,
    ``sub`` or ``x`` (free-form, for hand-built graphs).
    """

    kind: str
    i: int = 0
    j: int = 0
    side: str = ""

    def __str__(self) -> str:
        k = self.kind
        if k == "frame":
            return f"frame[{self.side}]"
        if k in ("r", "b", "v"):
            return f"{k}[{self.i},{self.j},{self.side}]"
        if k == "corner":
            return f"corner[{self.i},{self.side}]"
        if k == "c":
            return f"c[{self.j},{self.side}]"
        if k == "sub":
            return f"sub[{self.i},{self.j}]"
        return f"x[{self.side}]"


def frame(which: str) -> VertexId:
    return VertexId("frame", side=which)


def rv(i: int, j: int, side: str) -> VertexId:
    return VertexId("r", i, j, side)


def bv(i: int, j: int, side: str) -> VertexId:
    return VertexId("b", i, j, side)


def lbv(i: int, j: int, side: str) -> VertexId:
    return VertexId("v", i, j, side)


def corner(i: int, which: str) -> VertexId:
    return VertexId("corner", i, 0, which)


def clause_end(j: int, side: str) -> VertexId:
    return VertexId("c", 0, j, side)


def free(name: str) -> VertexId:
    return VertexId("x", side=str(name))


_LABEL = re.compile(r"^(\w+)\[([^\]]*)\]$")


def parse_label(text: str) -> VertexId:
    m = _LABEL.match(text)
    if not m:
        raise ValueError(f"bad vertex label {text!r}")
    kind, body = m.group(1), m.group(2)
    parts = body.split(",")
    try:
        if kind == "frame" and len(parts) == 1:
            return frame(parts[0])
        if kind in ("r", "b", "v") and len(parts) == 3:
            return VertexId(kind, int(parts[0]), int(parts[1]), parts[2])
        if kind == "corner" and len(parts) == 2:
            return corner(int(parts[0]), parts[1])
        if kind == "c" and len(parts) == 2:
            return clause_end(int(parts[0]), parts[1])
        if kind == "sub" and len(parts) == 2:
            return VertexId("sub", int(parts[0]), int(parts[1]))
        if kind == "x":
            return free(body)
    except ValueError:
        pass
    raise ValueError(f"bad vertex label {text!r}")


@dataclass(frozen=True)
class Edge:
    id: int
    u: Hashable
    v: Hashable
    color: Color = Color.G
    weight: WeightPoly = ONE

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"edge {self.id} is a self-loop at {self.u}")

    @property
    def ends(self) -> frozenset:
        return frozenset((self.u, self.v))

    def other(self, x):
        return self.v if x == self.u else self.u


class MultiGraph:
    """Undirected multigraph; parallel edges allowed, self-loops are not."""

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[Edge]):
        self.vertices: tuple = tuple(vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        ids = set()
        for e in self.edges:
            if e.u not in vset or e.v not in vset:
                raise ValueError(f"edge {e.id} has an endpoint outside the vertex set")
            if e.id in ids:
                raise ValueError(f"duplicate edge id {e.id}")
            ids.add(e.id)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple], vertices: Iterable | None = None) -> "MultiGraph":
        pairs = list(pairs)
        if vertices is None:
            seen: dict = {}
            for a, b in pairs:
                seen.setdefault(a, None)
                seen.setdefault(b, None)
            vertices = list(seen)
        return cls(vertices, [Edge(k, a, b) for k, (a, b) in enumerate(pairs)])

    @cached_property
    def edge_by_id(self) -> dict[int, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def adjacency(self) -> dict:
        adj: dict = {v: set() for v in self.vertices}
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        return adj

    @cached_property
    def incident(self) -> dict:
        inc: dict = defaultdict(list)
        for e in self.edges:
            inc[e.u].append(e)
            inc[e.v].append(e)
        return inc

    def neighbors(self, v) -> set:
        return self.adjacency[v]

    def edge_pairs(self) -> set[frozenset]:
        return {e.ends for e in self.edges}

    def components(self, removed: Iterable = ()) -> list[set]:
        gone = set(removed)
        seen: set = set()
        comps = []
        for s in self.vertices:
            if s in gone or s in seen:
                continue
            comp = {s}
            queue = deque([s])
            seen.add(s)
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if y not in gone and y not in seen:
                        seen.add(y)
                        comp.add(y)
                        queue.append(y)
            comps.append(comp)
        return comps

    def subgraph(self, keep: Iterable) -> "MultiGraph":
        keep = set(keep)
        return MultiGraph(
            [v for v in self.vertices if v in keep],
            [e for e in self.edges if e.u in keep and e.v in keep],
        )


@dataclass(frozen=True)
class Budget:
    """Crossing budget ``k = poly(w) + offset`` evaluated at a concrete omega."""

    poly: WeightPoly
    offset: int
    omega: int

    @property
    def value(self) -> int:
        return self.poly.eval(self.omega) + self.offset


class ReductionGraph(MultiGraph):
    def __init__(self, vertices, edges, *, n: int, ell: int, h: int, omega: int,
                 k: WeightPoly, k_offset: int = -1):
        super().__init__(vertices, edges)
        self.n = n
        self.ell = ell
        self.h = h
        self.omega = omega
        self.k = k
        self.k_offset = k_offset

    @property
    def k_value(self) -> int:
        return self.k.eval(self.omega) + self.k_offset

    @property
    def budget(self) -> Budget:
        return Budget(self.k, self.k_offset, self.omega)

    def with_structure(self, vertices, edges) -> "ReductionGraph":
        return ReductionGraph(vertices, edges, n=self.n, ell=self.ell, h=self.h,
                              omega=self.omega, k=self.k, k_offset=self.k_offset)


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset, ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @property
    def tree_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((k, k + 1) for k in range(len(self.bags) - 1))


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    tree_edges: tuple[tuple[int, int], ...] = ()

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    @classmethod
    def from_path(cls, pd: PathDecomposition) -> "TreeDecomposition":
        return cls(pd.bags, pd.tree_edges)


@dataclass(frozen=True)
class DecompositionCheck:
    valid: bool
    width: int
    violation: str = ""

    def __bool__(self) -> bool:
        return self.valid


def validate_decomposition(g: MultiGraph, d: PathDecomposition | TreeDecomposition) -> DecompositionCheck:
    """Check vertex coverage, edge coverage and connectivity of occurrences."""
    bags = d.bags
    width = d.width
    nb = len(bags)
    if nb == 0:
        if g.vertices:
            return DecompositionCheck(False, width, f"vertex {g.vertices[0]} is in no bag")
        return DecompositionCheck(True, width)
    tree_adj: dict[int, list[int]] = {k: [] for k in range(nb)}
    for a, b in d.tree_edges:
        if not (0 <= a < nb and 0 <= b < nb) or a == b:
            return DecompositionCheck(False, width, f"bad tree edge ({a},{b})")
        tree_adj[a].append(b)
        tree_adj[b].append(a)
    if len(d.tree_edges) != nb - 1 or _reach(tree_adj, {0}, set(range(nb))) != set(range(nb)):
        return DecompositionCheck(False, width, "bag structure is not a tree")

    vset = set(g.vertices)
    occ: dict = defaultdict(set)
    for k, bag in enumerate(bags):
        for x in bag:
            if x not in vset:
                return DecompositionCheck(False, width, f"bag {k} holds unknown vertex {x}")
            occ[x].add(k)
    for x in g.vertices:
        if not occ.get(x):
            return DecompositionCheck(False, width, f"vertex {x} is in no bag")
    for e in g.edges:
        if not (occ[e.u] & occ[e.v]):
            return DecompositionCheck(False, width, f"edge ({e.u},{e.v}) uncovered")
    for x in g.vertices:
        where = occ[x]
        start = min(where)
        if _reach(tree_adj, {start}, where) != where:
            return DecompositionCheck(False, width, f"occurrences of vertex {x} are not connected")
    return DecompositionCheck(True, width)


def _reach(adj: dict[int, list[int]], start: set[int], allowed: set[int]) -> set[int]:
    seen = set(start)
    queue = deque(start)
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y in allowed and y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


# ---------------------------------------------------------------------------
# exact path-width for tiny graphs


def _masks(g: MultiGraph):
    index = {v: k for k, v in enumerate(g.vertices)}
    nbr = [0] * len(g.vertices)
    for e in g.edges:
        a, b = index[e.u], index[e.v]
        nbr[a] |= 1 << b
        nbr[b] |= 1 << a
    return index, nbr


def vertex_separation_order(g: MultiGraph) -> tuple[int, list]:
    """Optimal vertex separation number and a layout attaining it.

    Subset dynamic program: ``f(S) = max(|boundary(S)|, min_v f(S - v))``
    where the boundary of a prefix S is the set of its vertices with a
    neighbour outside S.  Vertex separation equals path-width.
    """
    nv = len(g.vertices)
    if nv > PATHWIDTH_GUARD:
        raise ValueError(f"exact path-width limited to {PATHWIDTH_GUARD} vertices, got {nv}")
    if nv == 0:
        return 0, []
    _, nbr = _masks(g)
    full = (1 << nv) - 1
    best = [0] * (1 << nv)
    choice = [0] * (1 << nv)
    for s in range(1, full + 1):
        outside = full & ~s
        boundary = 0
        rest = s
        while rest:
            low = rest & -rest
            k = low.bit_length() - 1
            if nbr[k] & outside:
                boundary += 1
            rest ^= low
        sub_best = None
        rest = s
        while rest:
            low = rest & -rest
            cand = best[s ^ low]
            if sub_best is None or cand < sub_best:
                sub_best = cand
                choice[s] = low.bit_length() - 1
            rest ^= low
        best[s] = max(boundary, sub_best)
    order = []
    s = full
    while s:
        k = choice[s]
        order.append(g.vertices[k])
        s ^= 1 << k
    order.reverse()
    return best[full], order


def exact_pathwidth(g: MultiGraph) -> int:
    return vertex_separation_order(g)[0]


def decomposition_from_order(g: MultiGraph, order: Sequence) -> PathDecomposition:
    """Path decomposition whose k-th bag is the k-th vertex plus the live boundary."""
    pos = {v: k for k, v in enumerate(order)}
    last_needed = {v: pos[v] for v in order}
    for e in g.edges:
        a, b = pos[e.u], pos[e.v]
        if a < b:
            last_needed[e.u] = max(last_needed[e.u], b)
        else:
            last_needed[e.v] = max(last_needed[e.v], a)
    bags = []
    for k, v in enumerate(order):
        bags.append(frozenset({v} | {u for u in order[:k] if last_needed[u] >= k}))
    return PathDecomposition(tuple(bags))


# ---------------------------------------------------------------------------
# structural transforms


@dataclass
class SubdivisionResult:
    graph: MultiGraph
    # original edge id -> (subdivision vertex, first half id, second half id)
    subdivided: dict[int, tuple] = field(default_factory=dict)


def subdivide_parallel(g: MultiGraph) -> SubdivisionResult:
    """Subdivide all but one edge of every parallel family once."""
    families: dict[frozenset, list[Edge]] = defaultdict(list)
    for e in g.edges:
        families[e.ends].append(e)
    next_id = max((e.id for e in g.edges), default=-1) + 1
    vertices = list(g.vertices)
    edges: list[Edge] = []
    done: dict[int, tuple] = {}
    for e in g.edges:
        fam = families[e.ends]
        if fam[0].id == e.id:
            edges.append(e)
            continue
        s = VertexId("sub", e.id, 1)
        vertices.append(s)
        first = Edge(next_id, e.u, s, e.color, e.weight)
        second = Edge(next_id + 1, s, e.v, e.color, e.weight)
        next_id += 2
        edges.extend((first, second))
        done[e.id] = (s, first.id, second.id)
    if isinstance(g, ReductionGraph):
        out = g.with_structure(vertices, edges)
    else:
        out = MultiGraph(vertices, edges)
    return SubdivisionResult(out, done)


def lift_path_decomposition(pd: PathDecomposition, result: SubdivisionResult,
                            original: MultiGraph) -> PathDecomposition:
    """Extend a decomposition of G to its subdivision: one extra bag per new vertex."""
    extra: dict[int, list] = defaultdict(list)
    for eid, (s, _, _) in sorted(result.subdivided.items()):
        e = original.edge_by_id[eid]
        home = next(k for k, bag in enumerate(pd.bags) if e.u in bag and e.v in bag)
        extra[home].append(bag_with(pd.bags[home], s))
    bags = []
    for k, bag in enumerate(pd.bags):
        bags.append(bag)
        bags.extend(extra.get(k, ()))
    return PathDecomposition(tuple(bags))


def lift_tree_decomposition(td: TreeDecomposition, result: SubdivisionResult,
                            original: MultiGraph) -> TreeDecomposition:
    bags = list(td.bags)
    tree_edges = list(td.tree_edges)
    for eid, (s, _, _) in sorted(result.subdivided.items()):
        e = original.edge_by_id[eid]
        home = next(k for k, bag in enumerate(td.bags) if e.u in bag and e.v in bag)
        bags.append(frozenset({e.u, e.v, s}))
        tree_edges.append((home, len(bags) - 1))
    return TreeDecomposition(tuple(bags), tuple(tree_edges))


def bag_with(bag: frozenset, x) -> frozenset:
    return bag | {x}


def expand_weights(g: MultiGraph, omega_override: int) -> MultiGraph:
    """Replace every weight-t edge by t parallel unit-weight edges."""
    counts = [e.weight.eval(omega_override) for e in g.edges]
    total = sum(counts)
    if total > EXPAND_GUARD:
        raise ValueError(
            f"expansion would create {total} edges (limit {EXPAND_GUARD}); "
            "use a small omega override"
        )
    edges = []
    for e, t in zip(g.edges, counts):
        for _ in range(t):
            edges.append(Edge(len(edges), e.u, e.v, e.color, ONE))
    return MultiGraph(g.vertices, edges)


# ---------------------------------------------------------------------------
# file formats


def write_graph(g: ReductionGraph) -> str:
    lines = [
        GRAPH_MAGIC,
        f"n {g.n}",
        f"ell {g.ell}",
        f"h {g.h}",
        f"omega {g.omega}",
        "k " + ",".join(map(str, g.k.to_array())),
        f"k_offset {g.k_offset}",
        f"k_value {g.k_value}",
        f"vertices {len(g.vertices)}",
    ]
    lines.extend(f"vertex {v}" for v in g.vertices)
    lines.append(f"edges {len(g.edges)}")
    for e in g.edges:
        coeffs = ",".join(map(str, e.weight.to_array()))
        lines.append(f"edge {e.id} {e.u} {e.v} {e.color.value} {coeffs}")
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> ReductionGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != GRAPH_MAGIC:
        raise ValueError(f"not a graph file (expected header {GRAPH_MAGIC!r})")
    meta: dict[str, str] = {}
    vertices = []
    edges = []
    for ln in lines[1:]:
        key, _, rest = ln.partition(" ")
        if key == "vertex":
            vertices.append(parse_label(rest.strip()))
        elif key == "edge":
            parts = rest.split()
            if len(parts) != 5:
                raise ValueError(f"malformed edge line {ln!r}")
            eid, u, v, color, coeffs = parts
            edges.append(Edge(int(eid), parse_label(u), parse_label(v), Color(color),
                              WeightPoly.from_array(int(c) for c in coeffs.split(","))))
        else:
            meta[key] = rest.strip()
    try:
        g = ReductionGraph(
            vertices, edges,
            n=int(meta["n"]), ell=int(meta["ell"]), h=int(meta["h"]),
            omega=int(meta["omega"]),
            k=WeightPoly.from_array(int(c) for c in meta["k"].split(",")),
            k_offset=int(meta["k_offset"]),
        )
    except KeyError as exc:
        raise ValueError(f"graph file lacks metadata field {exc.args[0]!r}") from None
    if len(vertices) != int(meta.get("vertices", len(vertices))):
        raise ValueError("vertex count does not match header")
    if len(edges) != int(meta.get("edges", len(edges))):
        raise ValueError("edge count does not match header")
    if "k_value" in meta and int(meta["k_value"]) != g.k_value:
        raise ValueError("k_value does not match k and omega")
    return g


def write_decomposition(d: PathDecomposition | TreeDecomposition) -> str:
    kind = "path" if isinstance(d, PathDecomposition) else "tree"
    lines = [DECOMP_MAGIC, f"kind {kind}", f"width {d.width}", f"bags {len(d.bags)}"]
    for k, bag in enumerate(d.bags):
        labels = sorted(str(x) for x in bag)
        lines.append(" ".join(["bag", str(k), *labels]))
    if kind == "tree":
        for a, b in d.tree_edges:
            lines.append(f"tree-edge {a} {b}")
    return "\n".join(lines) + "\n"


def read_decomposition(text: str) -> PathDecomposition | TreeDecomposition:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != DECOMP_MAGIC:
        raise ValueError(f"not a decomposition file (expected header {DECOMP_MAGIC!r})")
    kind = None
    bags: dict[int, frozenset] = {}
    tree_edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "kind":
            kind = parts[1]
        elif parts[0] == "bag":
            bags[int(parts[1])] = frozenset(parse_label(p) for p in parts[2:])
        elif parts[0] == "tree-edge":
            tree_edges.append((int(parts[1]), int(parts[2])))
    ordered = tuple(bags[k] for k in range(len(bags)))
    if kind == "path":
        return PathDecomposition(ordered)
    if kind == "tree":
        return TreeDecomposition(ordered, tuple(tree_edges))
    raise ValueError(f"unknown decomposition kind {kind!r}")
