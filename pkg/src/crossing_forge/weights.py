"""Edge weights and crossing totals as polynomials in the base weight omega.

Every weight in the construction is a polynomial with nonnegative integer
coefficients in a single indeterminate ``w``.  Keeping totals symbolic lets
the tests match crossing costs degree by degree instead of comparing one
opaque big integer.
"""

from __future__ import annotations

import enum
from typing import Iterable, Mapping


class WeightPoly:
    """Immutable polynomial in ``w`` with nonnegative integer coefficients."""

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        clean: dict[int, int] = {}
        for deg, c in (coeffs or {}).items():
            if deg < 0:
                raise ValueError(f"negative degree {deg}")
            if c < 0:
                raise ValueError(f"negative coefficient {c} at degree {deg}")
            if c:
                clean[int(deg)] = int(c)
        self._coeffs = dict(sorted(clean.items()))
        self._hash = hash(tuple(self._coeffs.items()))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "WeightPoly":
        return cls({degree: coeff})

    @classmethod
    def constant(cls, c: int) -> "WeightPoly":
        return cls({0: c})

    @classmethod
    def from_array(cls, arr: Iterable[int]) -> "WeightPoly":
        """Build from ``[c0, c1, ..., c_max]``."""
        return cls({d: c for d, c in enumerate(arr)})

    def to_array(self) -> list[int]:
        if not self._coeffs:
            return [0]
        top = self.degree
        return [self._coeffs.get(d, 0) for d in range(top + 1)]

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    @property
    def degree(self) -> int:
        """Highest degree with a nonzero coefficient; -1 for the zero polynomial."""
        return max(self._coeffs, default=-1)

    def coeff(self, degree: int) -> int:
        return self._coeffs.get(degree, 0)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other: "WeightPoly") -> "WeightPoly":
        if not isinstance(other, WeightPoly):
            return NotImplemented
        out = dict(self._coeffs)
        for d, c in other._coeffs.items():
            out[d] = out.get(d, 0) + c
        return WeightPoly(out)

    def __mul__(self, other: "WeightPoly | int") -> "WeightPoly":
        if isinstance(other, int):
            if other < 0:
                raise ValueError("scaling by a negative integer")
            return WeightPoly({d: c * other for d, c in self._coeffs.items()})
        if not isinstance(other, WeightPoly):
            return NotImplemented
        out: dict[int, int] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                out[d1 + d2] = out.get(d1 + d2, 0) + c1 * c2
        return WeightPoly(out)

    __rmul__ = __mul__

    def checked_sub(self, other: "WeightPoly") -> "WeightPoly":
        """Return ``self - other``; raises if any coefficient would go negative."""
        out = dict(self._coeffs)
        for d, c in other._coeffs.items():
            rest = out.get(d, 0) - c
            if rest < 0:
                raise ValueError(f"difference has negative coefficient at degree {d}")
            out[d] = rest
        return WeightPoly(out)

    def __sub__(self, other: "WeightPoly") -> "WeightPoly":
        return self.checked_sub(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, WeightPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, int):
            return self._coeffs == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def eval(self, omega: int) -> int:
        """Exact evaluation at ``w = omega``."""
        if omega < 1:
            raise ValueError("omega must be >= 1")
        return sum(c * omega**d for d, c in self._coeffs.items())

    def max_coeff(self) -> int:
        return max(self._coeffs.values(), default=0)

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for d in sorted(self._coeffs, reverse=True):
            c = self._coeffs[d]
            if d == 0:
                parts.append(str(c))
            elif d == 1:
                parts.append(f"{c}*w")
            else:
                parts.append(f"{c}*w^{d}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"WeightPoly({self})"

    @classmethod
    def parse(cls, text: str) -> "WeightPoly":
        """Inverse of ``str()``: parses ``"c8*w^8 + ... + c0"``."""
        text = text.strip()
        if text == "0":
            return cls()
        coeffs: dict[int, int] = {}
        for term in text.split("+"):
            term = term.strip()
            if "*w" in term:
                c, _, rest = term.partition("*w")
                deg = int(rest[1:]) if rest.startswith("^") else 1
            else:
                c, deg = term, 0
            coeffs[deg] = coeffs.get(deg, 0) + int(c)
        return cls(coeffs)


ZERO = WeightPoly()
ONE = WeightPoly.constant(1)


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def compare_symbolic(a: WeightPoly, b: WeightPoly, omega: int) -> Ordering:
    """Compare two weights degree by degree from the top.

    Only valid when every coefficient of both operands is below ``omega``; in
    that regime the result agrees with comparing ``a.eval(omega)`` against
    ``b.eval(omega)``.  Violations raise instead of answering.
    """
    for p in (a, b):
        if p.max_coeff() >= omega:
            raise ValueError(
                f"coefficient {p.max_coeff()} of {p} is not below omega={omega}"
            )
    for d in range(max(a.degree, b.degree), -1, -1):
        ca, cb = a.coeff(d), b.coeff(d)
        if ca != cb:
            return Ordering.LESS if ca < cb else Ordering.GREATER
    return Ordering.EQUAL


def w(degree: int, coeff: int = 1) -> WeightPoly:
    return WeightPoly.monomial(degree, coeff)


class Color(str, enum.Enum):
    HB = "HB"
    LB = "LB"
    R = "R"
    R_STAIR = "R'"
    B = "B"
    B_STAIR = "B'"
    C = "C"
    G = "G"


BASE_WEIGHT = {
    Color.HB: w(8),
    Color.LB: w(6),
    Color.R_STAIR: w(3),
    Color.B_STAIR: w(3),
    Color.C: w(2),
    Color.G: ONE,
}

STAIR_COLORS = frozenset({Color.R_STAIR, Color.B_STAIR})
VERTICAL_COLORS = frozenset({Color.R, Color.B})


def g_weight(j: int) -> WeightPoly:
    """Weight of the j-th edge of an R-path: w^4 + j(j+1) w."""
    if j < 1:
        raise ValueError(f"R-path edge index must be >= 1, got {j}")
    return WeightPoly({4: 1, 1: j * (j + 1)})


def s_weight(j: int) -> WeightPoly:
    """Weight of the j-th edge of a B-path: w^4 + j(j+2) w."""
    if j < 1:
        raise ValueError(f"B-path edge index must be >= 1, got {j}")
    return WeightPoly({4: 1, 1: j * (j + 2)})


def color_weight(color: Color, index: int | None = None) -> WeightPoly:
    if color is Color.R:
        return g_weight(index)
    if color is Color.B:
        return s_weight(index)
    return BASE_WEIGHT[color]
