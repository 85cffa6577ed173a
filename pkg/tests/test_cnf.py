import random

import pytest
from hypothesis import given, strategies as st

from crossing_forge.cnf import (
    CnfInstance, DimacsError, brute_force_sat, format_assignment, parse_assignment, parse_dimacs,
    serialize_dimacs,
)

from conftest import random_cnf


def test_parse_simple():
    inst = parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n2 3 0\n")
    assert inst.n == 3 and inst.ell == 2
    assert inst.occurrence(2, 1) == -1 and inst.occurrence(2, 2) == 1 and inst.occurrence(1, 2) == 0


def test_clause_may_span_lines():
    assert parse_dimacs("p cnf 2 1\n1\n-2 0\n").clauses == (frozenset({1, -2}),)


@pytest.mark.parametrize("text", [
    "1 0\n",
    "p cnf 2 1\n3 0\n",
    "p cnf 2 2\n1 0\n",
    "p cnf 2 1\n1 -1 0\n",
    "p cnf 2 1\n0\n",
    "p cnf x 1\n1 0\n",
    "p cnf 2 1\n1 a 0\n",
])
def test_malformed_rejected(text):
    with pytest.raises(DimacsError):
        parse_dimacs(text)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10**6))
def test_dimacs_roundtrip_byte_stable(n, ell, seed):
    inst = random_cnf(random.Random(seed), n, ell)
    data = serialize_dimacs(inst)
    again = parse_dimacs(data)
    assert again == inst
    assert serialize_dimacs(again) == data


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10**6))
def test_brute_force_is_sound_and_complete(n, ell, seed):
    inst = random_cnf(random.Random(seed), n, ell)
    tau = brute_force_sat(inst)
    if tau is not None:
        assert inst.satisfies(tau)
    else:
        for mask in range(1 << n):
            assert not inst.satisfies(tuple(bool(mask >> i & 1) for i in range(n)))


def test_unsat_pair():
    assert brute_force_sat(CnfInstance.from_lists(1, [[1], [-1]])) is None


def test_assignment_format():
    tau = parse_assignment("10110", 5)
    assert tau == (True, False, True, True, False)
    assert format_assignment(tau) == "10110"
    with pytest.raises(ValueError):
        parse_assignment("101", 5)
    with pytest.raises(ValueError):
        parse_assignment("10x10", 5)
