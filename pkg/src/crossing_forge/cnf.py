"""CNF instances, DIMACS input/output and a brute-force satisfiability oracle.

Literals are signed integers in the DIMACS convention: ``3`` is x3 and ``-3``
is its negation.  An assignment is a tuple of booleans, index 0 holding x1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

Assignment = tuple[bool, ...]

SAT_GUARD = 24


class DimacsError(ValueError):
    pass


@dataclass(frozen=True)
class CnfInstance:
    num_vars: int
    clauses: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise DimacsError("instance needs at least one variable")
        if not self.clauses:
            raise DimacsError("instance needs at least one clause")
        for idx, clause in enumerate(self.clauses, 1):
            if not clause:
                raise DimacsError(f"clause {idx} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise DimacsError(
                        f"clause {idx}: literal {lit} out of range 1..{self.num_vars}"
                    )
                if -lit in clause:
                    raise DimacsError(
                        f"clause {idx} contains both x{abs(lit)} and its negation"
                    )

    @classmethod
    def from_lists(cls, num_vars: int, clauses) -> "CnfInstance":
        return cls(num_vars, tuple(frozenset(c) for c in clauses))

    @property
    def n(self) -> int:
        return self.num_vars

    @property
    def ell(self) -> int:
        return len(self.clauses)

    def occurrence(self, var: int, clause_index: int) -> int:
        """+1 if x_var is in clause ``clause_index`` (1-based), -1 if negated, else 0."""
        clause = self.clauses[clause_index - 1]
        if var in clause:
            return 1
        if -var in clause:
            return -1
        return 0

    def satisfies(self, assignment: Assignment) -> bool:
        return all(clause_satisfied(c, assignment) for c in self.clauses)


def clause_satisfied(clause: frozenset[int], assignment: Assignment) -> bool:
    return any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause)


def literal_order(lit: int) -> tuple[int, int]:
    return (abs(lit), 0 if lit > 0 else 1)


def parse_dimacs(data: bytes | str) -> CnfInstance:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(data.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before 'p cnf' header")
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError:
            raise DimacsError(f"line {lineno}: non-integer token in {line!r}") from None
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    num_vars, num_clauses = header
    if num_vars < 1:
        raise DimacsError("header declares no variables")

    clauses: list[frozenset[int]] = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            if not current:
                raise DimacsError(f"clause {len(clauses) + 1} is empty")
            clauses.append(frozenset(current))
            current = []
            continue
        if abs(tok) > num_vars:
            raise DimacsError(f"literal {tok} exceeds declared variable count {num_vars}")
        current.append(tok)
    if current:
        # a final clause without terminating 0 is accepted
        clauses.append(frozenset(current))
    if not clauses:
        raise DimacsError("instance has no clauses")
    if len(clauses) != num_clauses:
        raise DimacsError(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfInstance(num_vars, tuple(clauses))


def serialize_dimacs(inst: CnfInstance) -> bytes:
    lines = [f"p cnf {inst.num_vars} {len(inst.clauses)}"]
    for clause in inst.clauses:
        lits = sorted(clause, key=literal_order)
        lines.append(" ".join(str(l) for l in lits) + " 0")
    return ("\n".join(lines) + "\n").encode("ascii")


def brute_force_sat(inst: CnfInstance) -> Assignment | None:
    """First satisfying assignment in lexicographic order (False < True), or None."""
    if inst.num_vars > SAT_GUARD:
        raise ValueError(f"brute force limited to {SAT_GUARD} variables, got {inst.num_vars}")
    for bits in itertools.product((False, True), repeat=inst.num_vars):
        if inst.satisfies(bits):
            return bits
    return None


def parse_assignment(bits: str, n: int) -> Assignment:
    """Parse ``"11000"`` / ``"TTFFF"`` into an assignment of length n."""
    table = {"1": True, "T": True, "t": True, "0": False, "F": False, "f": False}
    try:
        out = tuple(table[ch] for ch in bits.strip())
    except KeyError as exc:
        raise ValueError(f"bad assignment character {exc.args[0]!r}") from None
    if len(out) != n:
        raise ValueError(f"assignment has {len(out)} values, instance has {n} variables")
    return out


def format_assignment(assignment: Assignment) -> str:
    return "".join("1" if b else "0" for b in assignment)
