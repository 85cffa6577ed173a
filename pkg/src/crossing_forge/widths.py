"""Cop-and-robber strategies compiled into path and tree decompositions.

Moves are ``("place", v)`` and ``("lift", v)``.  A lift is only issued when
every neighbour of v is occupied or already cleared, so cleared territory
never re-contaminates; ``check_monotone`` re-verifies this independently by
tracking the contaminated region.  Bags are the cop sets after each place.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .graph import (
    MultiGraph,
    PathDecomposition,
    ReductionGraph,
    TreeDecomposition,
    bv,
    clause_end,
    corner,
    frame,
    lbv,
    rv,
    validate_decomposition,
)

PLACE, LIFT = "place", "lift"
PATH_COP_LIMIT = 13
TREE_BAG_LIMIT = 10


class StrategyError(RuntimeError):
    pass


@dataclass(frozen=True)
class CopStrategy:
    moves: tuple[tuple[str, Hashable], ...]

    def timeline(self) -> list[frozenset]:
        cops: set = set()
        out = []
        for kind, v in self.moves:
            if kind == PLACE:
                cops.add(v)
            else:
                cops.discard(v)
            out.append(frozenset(cops))
        return out

    @property
    def max_cops(self) -> int:
        return max((len(s) for s in self.timeline()), default=0)


@dataclass
class MonotoneReport:
    ok: bool
    max_cops: int
    violation: str = ""
    contaminated_left: int = 0


def check_monotone(g: MultiGraph, s: CopStrategy, require_clear: bool = True) -> MonotoneReport:
    """Replay ``s`` tracking the contaminated set; any recontamination fails."""
    adj = g.adjacency
    contaminated = set(g.vertices)
    cops: set = set()
    peak = 0
    for step, (kind, v) in enumerate(s.moves):
        if v not in adj:
            return MonotoneReport(False, peak, f"move {step}: unknown vertex {v}")
        if kind == PLACE:
            if v in cops:
                return MonotoneReport(False, peak, f"move {step}: {v} already occupied")
            cops.add(v)
            contaminated.discard(v)
            peak = max(peak, len(cops))
            continue
        if v not in cops:
            return MonotoneReport(False, peak, f"move {step}: lift from unoccupied {v}")
        cops.remove(v)
        if any(u in contaminated for u in adj[v]):
            return MonotoneReport(False, peak, f"move {step}: lifting {v} recontaminates it")
    left = len(contaminated) + len(cops)
    if require_clear and left:
        return MonotoneReport(False, peak, f"{left} vertices never cleared", left)
    return MonotoneReport(True, peak, "", left)


class SearchState:
    """Single-owner builder for a monotone strategy on one graph."""

    def __init__(self, g: MultiGraph):
        self.g = g
        self.adj = g.adjacency
        self.cops: set = set()
        self.cleared: set = set()
        self.moves: list[tuple[str, Hashable]] = []
        self.peak = 0

    def place(self, v) -> None:
        if v in self.cops or v in self.cleared:
            raise StrategyError(f"cannot place on {v}: already occupied or cleared")
        self.cops.add(v)
        self.moves.append((PLACE, v))
        self.peak = max(self.peak, len(self.cops))

    def safe(self, v, extra: frozenset = frozenset()) -> bool:
        return all(u in self.cops or u in self.cleared or u in extra for u in self.adj[v])

    def lift(self, v) -> None:
        if v not in self.cops:
            raise StrategyError(f"cannot lift {v}: unoccupied")
        if not self.safe(v):
            raise StrategyError(f"lifting {v} would recontaminate it")
        self.cops.remove(v)
        self.cleared.add(v)
        self.moves.append((LIFT, v))

    def lift_all_safe(self, among=None) -> None:
        pool = self.cops if among is None else self.cops & set(among)
        changed = True
        while changed:
            changed = False
            for v in sorted(pool, key=str):
                if v in self.cops and self.safe(v):
                    self.lift(v)
                    changed = True
            pool = self.cops if among is None else self.cops & set(among)

    def strategy(self) -> CopStrategy:
        return CopStrategy(tuple(self.moves))


# ---------------------------------------------------------------------------
# the level sweep


Column = Sequence[tuple[int, Hashable]]


@dataclass(frozen=True)
class SweepInput:
    """Columns of (level, vertex) pairs, levels strictly increasing per column."""

    g: MultiGraph
    columns: tuple[tuple[tuple[int, Hashable], ...], ...]

    @classmethod
    def make(cls, g: MultiGraph, columns) -> "SweepInput":
        return cls(g, tuple(tuple(c) for c in columns))


def validate_sweep_input(inp: SweepInput, strict_paths: bool = True) -> None:
    """Check the column/level conditions; raise ValueError on violation."""
    g = inp.g
    where: dict = {}
    for ci, col in enumerate(inp.columns):
        if not col:
            raise ValueError(f"column {ci} is empty")
        levels = [lv for lv, _ in col]
        if levels != sorted(set(levels)):
            raise ValueError(f"column {ci}: levels must strictly increase")
        for k, (lv, v) in enumerate(col):
            if v in where:
                raise ValueError(f"vertex {v} appears in two columns")
            where[v] = (ci, lv, k)
            if k and v not in g.adjacency[col[k - 1][1]]:
                raise ValueError(f"column {ci}: {col[k - 1][1]} and {v} are not adjacent")
    cross: list[tuple[tuple, tuple]] = []
    for e in g.edges:
        if e.u not in where or e.v not in where:
            continue
        (cu, lu, ku), (cv, lv, kv) = where[e.u], where[e.v]
        if cu == cv:
            if strict_paths and abs(ku - kv) != 1:
                raise ValueError(f"column {cu} does not induce a path (edge {e.u}-{e.v})")
            continue
        if abs(cu - cv) != 1:
            raise ValueError(f"cross edge {e.u}-{e.v} joins non-adjacent columns {cu},{cv}")
        if abs(lu - lv) > 1:
            raise ValueError(f"cross edge {e.u}-{e.v} spans levels {lu},{lv}")
        a, b = ((cu, ku), (cv, kv)) if cu < cv else ((cv, kv), (cu, ku))
        cross.append((a, b))
    for (a1, b1) in cross:
        for (a2, b2) in cross:
            if a1[0] == a2[0] and a1[1] < a2[1] and b1[1] > b2[1]:
                raise ValueError(f"crossing pair of cross edges between columns {a1[0]} and {b1[0]}")


def run_sweep(state: SearchState, columns, held_limit: int | None = None) -> int:
    """Advance one cop per column bottom-up, with one spare cop.

    Returns the peak number of cops owned by the sweep; raises StrategyError
    if no column can advance (which would break the sweep invariant).
    """
    m = len(columns)
    limit = m + 1 if held_limit is None else held_limit
    pos = [0] * m
    own: set = set()
    peak = 0

    def bump():
        nonlocal peak
        peak = max(peak, len(own))
        if peak > limit:
            raise StrategyError(f"sweep uses {peak} cops, more than {limit}")

    for col in columns:
        v = col[0][1]
        if v not in state.cops:
            state.place(v)
        own.add(v)
        bump()
    while True:
        cands = []
        for i, col in enumerate(columns):
            if pos[i] + 1 >= len(col):
                continue
            cur, nxt = col[pos[i]][1], col[pos[i] + 1][1]
            if state.safe(cur, frozenset({nxt})):
                cands.append((col[pos[i]][0], i))
        if not cands:
            if all(pos[i] + 1 >= len(col) for i, col in enumerate(columns)):
                break
            stuck = [str(col[pos[i]][1]) for i, col in enumerate(columns) if pos[i] + 1 < len(col)]
            raise StrategyError(f"sweep stuck with frontier {stuck}")
        _, i = min(cands)
        col = columns[i]
        cur, nxt = col[pos[i]][1], col[pos[i] + 1][1]
        state.place(nxt)
        own.add(nxt)
        bump()
        if cur in own:
            state.lift(cur)
            own.discard(cur)
        pos[i] += 1
    for col in columns:
        v = col[-1][1]
        if v in own and state.safe(v):
            state.lift(v)
            own.discard(v)
    return peak


def sweep_strategy(inp: SweepInput) -> CopStrategy:
    validate_sweep_input(inp)
    state = SearchState(inp.g)
    run_sweep(state, inp.columns)
    state.lift_all_safe()
    return state.strategy()


def strategy_to_path_decomposition(g: MultiGraph, s: CopStrategy) -> PathDecomposition:
    rep = check_monotone(g, s)
    if not rep.ok:
        raise StrategyError(f"strategy is not monotone: {rep.violation}")
    bags = []
    cops: set = set()
    for kind, v in s.moves:
        if kind == PLACE:
            cops.add(v)
            bags.append(frozenset(cops))
        else:
            cops.discard(v)
    return PathDecomposition(tuple(bags))


# ---------------------------------------------------------------------------
# instance-specific columns


def _u0_columns(g: ReductionGraph, with_bottoms: bool):
    """Columns for the outer region: R-left of gadget 1, left frame, right frame, R-right of gadget n."""
    n, ell, h = g.n, g.ell, g.h
    shift = -2 * (n + 1)
    left_r = [(2 * j, rv(1, j, "L")) for j in range(2, h + 3)]
    left_f = [(2 * j, rv(0, j, "R")) for j in range(2, h + 3)]
    left_f += [(8 * j - 3, clause_end(j, "L")) for j in range(1, ell + 1)]
    right_f = [(2 * j + shift, rv(n + 1, j, "L")) for j in range(2, h + 3)]
    right_f += [(8 * j - 3, clause_end(j, "R")) for j in range(1, ell + 1)]
    right_r = [(2 * j + shift, rv(n, j, "R")) for j in range(2, h + 3)]
    if with_bottoms:
        left_r.insert(0, (2, rv(1, 1, "L")))
        left_f.insert(0, (2, frame("BL")))
        right_f.insert(0, (2 + shift, frame("BR")))
        right_r.insert(0, (2 + shift, rv(n, 1, "R")))
    cols = [sorted(left_r, key=_lvl), sorted(left_f, key=_lvl), sorted(right_f, key=_lvl), sorted(right_r, key=_lvl)]
    return cols


def _lvl(entry):
    return entry[0]


def _block_columns(g: ReductionGraph, i: int):
    h = g.h
    return [
        [(j, bv(i, j, "P")) for j in range(1, h + 3)],
        [(j, lbv(i, j, "P")) for j in range(1, h + 3)],
        [(j, lbv(i, j, "N")) for j in range(1, h + 3)],
        [(j, bv(i, j, "N")) for j in range(1, h + 3)],
    ]


def _corridor_columns(g: ReductionGraph, i: int):
    h = g.h
    return [
        [(j, rv(i, j, "R")) for j in range(1, h + 4)],
        [(j, rv(i + 1, j, "L")) for j in range(2, h + 3)],
    ]


def _corners(i: int):
    return [corner(i, "u0"), corner(i, "u1"), corner(i, "w1"), corner(i, "w0")]


def _right_hold(g: ReductionGraph):
    n, h = g.n, g.h
    return [rv(n, 1, "R"), rv(n, h + 3, "R"), frame("BR"), frame("TR")]


def _left_hold(g: ReductionGraph):
    return [rv(1, 1, "L"), rv(1, g.h + 3, "L"), frame("BL"), frame("TL")]


@dataclass
class CertifiedPath:
    strategy: CopStrategy
    decomposition: PathDecomposition
    monotone: MonotoneReport


def instance_path_strategy(g: ReductionGraph) -> CopStrategy:
    n, h = g.n, g.h
    st = SearchState(g)
    for v in _left_hold(g) + _right_hold(g):
        st.place(v)
    run_sweep(st, _u0_columns(g, with_bottoms=False))
    prev_left = [frame("BL"), frame("TL")]
    for i in range(1, n + 1):
        for v in _corners(i):
            st.place(v)
        for v in [rv(i, 1, "L"), rv(i, h + 3, "L")] + prev_left:
            st.lift(v)
        run_sweep(st, _block_columns(g, i))
        if i < n:
            st.place(rv(i + 1, 1, "L"))
            st.place(rv(i + 1, h + 3, "L"))
            run_sweep(st, _corridor_columns(g, i))
            st.lift(corner(i, "u1"))
            st.lift(corner(i, "w1"))
        prev_left = [corner(i, "u0"), corner(i, "w0")]
    st.lift_all_safe()
    if st.cops:
        raise StrategyError(f"cops left on {sorted(map(str, st.cops))}")
    return st.strategy()


def instance_path_decomposition(g: ReductionGraph) -> PathDecomposition:
    return certify_path(g).decomposition


def certify_path(g: ReductionGraph) -> CertifiedPath:
    s = instance_path_strategy(g)
    rep = check_monotone(g, s)
    if not rep.ok:
        raise StrategyError(f"path strategy not monotone: {rep.violation}")
    if rep.max_cops > PATH_COP_LIMIT:
        raise StrategyError(f"path strategy uses {rep.max_cops} cops")
    pd = strategy_to_path_decomposition(g, s)
    chk = validate_decomposition(g, pd)
    if not chk.valid:
        raise StrategyError(f"path decomposition invalid: {chk.violation}")
    return CertifiedPath(s, pd, rep)


# ---------------------------------------------------------------------------
# tree decomposition: backbone plus branches


@dataclass
class Branch:
    name: str
    attach: int  # backbone bag index
    held: tuple
    strategy: CopStrategy
    region: frozenset
    bags: list[frozenset] = field(default_factory=list)


@dataclass
class CertifiedTree:
    decomposition: TreeDecomposition
    branches: list[Branch]
    monotone: dict[str, MonotoneReport]


def _branch(g: ReductionGraph, name: str, attach: int, held, columns) -> Branch:
    region = frozenset(v for col in columns for _, v in col)
    sub = g.subgraph(region | set(held))
    st = SearchState(sub)
    starts = [col[0][1] for col in columns]
    for v in list(held) + starts:
        st.place(v)
    run_sweep(st, columns)
    for col in columns:
        if col[-1][1] in st.cops:
            st.lift(col[-1][1])
    bags = []
    cops: set = set()
    for kind, v in st.moves:
        if kind == PLACE:
            cops.add(v)
            bags.append(frozenset(cops))
        else:
            cops.discard(v)
    # the first kept bag holds the held set plus every column start
    bags = bags[len(held) + len(starts) - 1:]
    return Branch(name, attach, tuple(held), st.strategy(), region, bags)


def certify_tree(g: ReductionGraph) -> CertifiedTree:
    n, h = g.n, g.h
    right = set(_right_hold(g))
    backbone: list[frozenset] = []
    branches: list[Branch] = []

    def push(bag) -> int:
        backbone.append(frozenset(bag))
        return len(backbone) - 1

    s0 = push(set(_left_hold(g)) | right)
    tops = [rv(1, h + 3, "L"), frame("TL"), rv(n, h + 3, "R"), frame("TR")]
    branches.append(_branch(g, "outer", s0, tops, _u0_columns(g, with_bottoms=True)))

    low, high = rv(1, 1, "L"), rv(1, h + 3, "L")
    bot, top = frame("BL"), frame("TL")
    for i in range(1, n + 1):
        u0, u1, w1, w0 = _corners(i)
        push({low, high, bot, top, u0, u1} | right)
        push({high, top, u0, u1, w1, w0} | right)
        b3 = push({u0, u1, w1, w0} | right)
        branches.append(_branch(g, f"block[{i}]", b3, (u0, u1, w1, w0), _block_columns(g, i)))
        if i < n:
            low, high = rv(i + 1, 1, "L"), rv(i + 1, h + 3, "L")
            b4 = push({u0, u1, w1, w0, low, high} | right)
            branches.append(_branch(g, f"corridor[{i}]", b4, (u0, u1, w1, w0, low, high),
                                    _corridor_columns(g, i)))
            push({u0, w0, low, high} | right)
            bot, top = u0, w0

    bags = list(backbone)
    tree_edges = [(k, k + 1) for k in range(len(backbone) - 1)]
    monotone: dict[str, MonotoneReport] = {}
    for br in branches:
        sub = g.subgraph(br.region | set(br.held))
        rep = check_monotone(sub, br.strategy, require_clear=False)
        if rep.ok and rep.contaminated_left != len(br.held):
            rep = MonotoneReport(False, rep.max_cops, "branch region not fully cleared")
        monotone[br.name] = rep
        prev = br.attach
        for bag in br.bags:
            bags.append(bag)
            tree_edges.append((prev, len(bags) - 1))
            prev = len(bags) - 1
    td = TreeDecomposition(tuple(bags), tuple(tree_edges))
    return CertifiedTree(td, branches, monotone)


def instance_tree_decomposition(g: ReductionGraph) -> TreeDecomposition:
    cert = certify_tree(g)
    bad = [name for name, rep in cert.monotone.items() if not rep.ok]
    if bad:
        raise StrategyError(f"non-monotone branch strategies: {bad}")
    chk = validate_decomposition(g, cert.decomposition)
    if not chk.valid:
        raise StrategyError(f"tree decomposition invalid: {chk.violation}")
    return cert.decomposition
