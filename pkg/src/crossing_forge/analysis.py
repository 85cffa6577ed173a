"""Staircase crossing algebra: A(h), the induction step identities and an
exhaustive minimiser over stair placements for one R/B path pair.

Placement model: the B path and the R path are two parallel lines.  A B'
stair leaves B vertex b_j (j in [2, h+1]) and crosses the R line in some
edge r(j) in [1, h+2]; an R' stair leaves R vertex r_j (j in [2, h+2]) and
crosses the B line in some edge b(j) in [1, h+1].  Along each line vertex
k sits at position 2k and edge k at 2k+1.  Stairs must not cross each other,
so sorting them by B-position must leave their R-positions non-decreasing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .weights import ZERO, WeightPoly, compare_symbolic, Ordering, g_weight, s_weight, w

PLACEMENT_GUARD = 8


def a_of_h(h: int) -> WeightPoly:
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    sg = sum(j * (j + 1) for j in range(2, h + 2))
    ss = sum(j * (j + 2) for j in range(1, h + 2))
    return w(7, 2 * h + 1) + w(4, sg + ss)


# ---------------------------------------------------------------------------
# induction identities


@dataclass
class IdentityRow:
    h: int
    j: int
    case: str
    lhs: WeightPoly
    rhs: WeightPoly
    margin: int  # omega^4 coefficient of lhs - rhs
    equality: bool


@dataclass
class IdentityReport:
    h_max: int
    rows: list[IdentityRow] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        head = f"identities h<= {self.h_max}: {len(self.rows)} cases, {'pass' if self.ok else 'FAIL'}"
        return "\n".join([head, *self.failures]) + "\n"


def _w3(p: WeightPoly) -> WeightPoly:
    return w(3) * p


def check_induction_identities(h_max: int) -> IdentityReport:
    """Verify both induction cases symbolically for every h <= h_max.

    Case (i), j in [h+2]:
        w^3 s_{h+2} + w^3 g_j + (h+2-j) w^3 (s_{h+2} - s_{h+1}) >= A(h+1) - A(h),
        equality iff j = h+2.
    Case (ii), j in [h+1]:
        w^3 g_{h+3} + w^3 s_j + (h+1-j) w^3 (g_{h+3} - g_{h+2}) >= A(h+1) - A(h) + w^4.
    Both left sides also match 2w^7 + (2h^2+11h+18 + (h+4-j)(h-j)) w^4.
    """
    if h_max < 1:
        raise ValueError("h_max must be >= 1")
    rep = IdentityReport(h_max)
    # comparisons only need omega above every coefficient in play
    omega_cap = 10 * (h_max + 5) ** 2
    for h in range(1, h_max + 1):
        delta = a_of_h(h + 1) - a_of_h(h)
        cases = [
            ("i", j, _w3(s_weight(h + 2)) + _w3(g_weight(j)) + _w3(s_weight(h + 2) - s_weight(h + 1)) * (h + 2 - j),
             delta)
            for j in range(1, h + 3)
        ] + [
            ("ii", j, _w3(g_weight(h + 3)) + _w3(s_weight(j)) + _w3(g_weight(h + 3) - g_weight(h + 2)) * (h + 1 - j),
             delta + w(4))
            for j in range(1, h + 2)
        ]
        for case, j, lhs, rhs in cases:
            order = compare_symbolic(lhs, rhs, omega_cap)
            margin = lhs.coeff(4) - rhs.coeff(4)
            eq = order is Ordering.EQUAL
            rep.rows.append(IdentityRow(h, j, case, lhs, rhs, margin, eq))
            factored = w(7, 2) + w(4, 2 * h * h + 11 * h + 18 + (h + 4 - j) * (h - j))
            if lhs != factored:
                rep.failures.append(f"h={h} j={j} case {case}: {lhs} != factored form {factored}")
            if order is Ordering.LESS:
                rep.failures.append(f"h={h} j={j} case {case}: {lhs} < {rhs}")
            if case == "i" and eq != (j == h + 2):
                rep.failures.append(f"h={h} j={j} case i: equality {eq} but j==h+2 is {j == h + 2}")
    return rep


# ---------------------------------------------------------------------------
# exhaustive placement oracle


@dataclass(frozen=True)
class StairPlacement:
    h: int
    b_stairs: tuple[int, ...]  # r(j) for j = 2..h+1
    r_stairs: tuple[int, ...]  # b(j) for j = 2..h+2

    def chords(self) -> list[tuple[int, int]]:
        """(B-position, R-position) of every stair."""
        out = [(2 * j, 2 * r + 1) for j, r in zip(range(2, self.h + 2), self.b_stairs)]
        out += [(2 * b + 1, 2 * j) for j, b in zip(range(2, self.h + 3), self.r_stairs)]
        return out

    def consistent(self) -> bool:
        ch = self.chords()
        return not any(b1 < b2 and r1 > r2 for b1, r1 in ch for b2, r2 in ch)

    def cost(self) -> WeightPoly:
        total = ZERO
        for r in self.b_stairs:
            total = total + w(3) * g_weight(r)
        for b in self.r_stairs:
            total = total + w(3) * s_weight(b)
        return total

    @property
    def alternating(self) -> bool:
        return (self.b_stairs == tuple(range(2, self.h + 2))
                and self.r_stairs == tuple(range(1, self.h + 2)))

    def __str__(self) -> str:
        return f"B'->R{list(self.b_stairs)} R'->B{list(self.r_stairs)}"


def alternating_placement(h: int) -> StairPlacement:
    return StairPlacement(h, tuple(range(2, h + 2)), tuple(range(1, h + 2)))


def enumerate_placements(h: int) -> list[StairPlacement]:
    """All consistent placements, one per shuffle of the two stair families.

    In a shuffle, a B' stair preceded by q R' stairs is squeezed between R
    vertices q+1 and q+2, so it crosses R edge q+1; symmetrically an R'
    stair preceded by p B' stairs crosses B edge p+1.
    """
    if h < 0:
        raise ValueError("h must be >= 0")
    nb, nr = h, h + 1
    out = []
    for pos in itertools.combinations(range(nb + nr), nb):
        bset = set(pos)
        seen_b = seen_r = 0
        rb: list[int] = []
        br: list[int] = []
        for k in range(nb + nr):
            if k in bset:
                rb.append(seen_r + 1)
                seen_b += 1
            else:
                br.append(seen_b + 1)
                seen_r += 1
        out.append(StairPlacement(h, tuple(rb), tuple(br)))
    return sorted(out, key=lambda p: (p.b_stairs, p.r_stairs))


def enumerate_placements_direct(h: int) -> list[StairPlacement]:
    """Filter the full product of crossing indices; exponential, small h only."""
    out = []
    for rb in itertools.product(range(1, h + 3), repeat=h):
        for br in itertools.product(range(1, h + 2), repeat=h + 1):
            p = StairPlacement(h, rb, br)
            if p.consistent():
                out.append(p)
    return sorted(out, key=lambda p: (p.b_stairs, p.r_stairs))


@dataclass
class MinPlacement:
    h: int
    count: int
    min_cost: WeightPoly
    argmin: list[StairPlacement]

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "placements": self.count,
            "min_cost": str(self.min_cost),
            "argmin": [str(p) for p in self.argmin],
            "unique_alternating": len(self.argmin) == 1 and self.argmin[0].alternating,
        }


def brute_force_min_placement(h: int) -> MinPlacement:
    if h > PLACEMENT_GUARD:
        raise ValueError(f"placement search limited to h <= {PLACEMENT_GUARD}, got {h}")
    placements = enumerate_placements(h)
    # coefficients stay far below this bound for h <= 8
    omega = 10**6
    best: WeightPoly | None = None
    argmin: list[StairPlacement] = []
    for p in placements:
        c = p.cost()
        if best is None:
            best, argmin = c, [p]
            continue
        order = compare_symbolic(c, best, omega)
        if order is Ordering.LESS:
            best, argmin = c, [p]
        elif order is Ordering.EQUAL:
            argmin.append(p)
    return MinPlacement(h, len(placements), best, argmin)
