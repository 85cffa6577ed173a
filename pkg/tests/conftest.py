import random

import pytest

from crossing_forge.cnf import CnfInstance, brute_force_sat


def random_cnf(rng: random.Random, n: int, ell: int, width: int = 3) -> CnfInstance:
    clauses = []
    for _ in range(ell):
        vs = rng.sample(range(1, n + 1), rng.randint(1, min(width, n)))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return CnfInstance.from_lists(n, clauses)


def random_sat_cnf(rng: random.Random, n: int, ell: int) -> CnfInstance:
    while True:
        inst = random_cnf(rng, n, ell)
        if brute_force_sat(inst) is not None:
            return inst


def random_unsat_cnf(rng: random.Random, n: int, ell: int) -> CnfInstance:
    """Unsatisfiable by construction: a unit clause and its negation plus noise."""
    v = rng.randint(1, n)
    clauses = [[v], [-v]]
    if ell > 2:
        clauses += [sorted(c, key=abs) for c in random_cnf(rng, n, ell - 2).clauses]
    rng.shuffle(clauses)
    return CnfInstance.from_lists(n, [list(c) for c in clauses])


# example instance with five variables and three clauses
EXAMPLE_CLAUSES = [[1, -2, 4, -5], [-1, -3, 5], [2, 3, -4]]


@pytest.fixture
def example_instance() -> CnfInstance:
    return CnfInstance.from_lists(5, EXAMPLE_CLAUSES)


# acceptance results, printed once at the end of the session
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
