"""Shared fixtures: published reference data and small helper builders."""

import numpy as np
import pytest

import rccloops as rl

# The published 8x8 multiplication table for q = 3, f = x^2 + 2x + 2
# (r = 1, s = 2), under the labeling 1=[0,1] ... 8=[2,2].  1-based.
TABLE1 = [
    [1, 2, 3, 4, 5, 6, 7, 8],
    [2, 1, 6, 8, 7, 3, 5, 4],
    [3, 6, 4, 1, 8, 5, 2, 7],
    [4, 8, 7, 5, 1, 2, 6, 3],
    [5, 7, 1, 6, 3, 8, 4, 2],
    [6, 3, 8, 2, 4, 7, 1, 5],
    [7, 5, 2, 3, 6, 4, 8, 1],
    [8, 4, 5, 7, 2, 1, 3, 6],
]

# The eight right translations of that loop, as published cycles (1-based).
TABLE1_CYCLES = {
    1: [],
    2: [(1, 2), (3, 6), (4, 8), (5, 7)],
    3: [(1, 3, 4, 7, 2, 6, 8, 5)],
    4: [(1, 4, 5, 6, 2, 8, 7, 3)],
    5: [(1, 5, 3, 8, 2, 7, 6, 4)],
    6: [(1, 6, 7, 4, 2, 3, 5, 8)],
    7: [(1, 7, 8, 3, 2, 5, 4, 6)],
    8: [(1, 8, 6, 5, 2, 4, 3, 7)],
}

# The six matrices with characteristic polynomial x^2 + 2x + 2 over F_3,
# in the published order (which is lexicographic in (a, b), a != 0).
TABLE1_CLASS_MATRICES = [
    ((1, 1), (1, 0)),
    ((0, 1), (1, 1)),
    ((2, 2), (1, 2)),
    ((1, 2), (2, 0)),
    ((0, 2), (2, 1)),
    ((2, 1), (2, 2)),
]


@pytest.fixture(scope="session")
def f3():
    return rl.field_create(3, 1)


@pytest.fixture(scope="session")
def f4():
    return rl.field_create(2, 2)


@pytest.fixture(scope="session")
def f9():
    return rl.field_create(3, 2)


@pytest.fixture(scope="session")
def table1_loop(f3):
    return rl.build_loop(f3, rl.quadratic_from_codes(f3, 1, 2))


@pytest.fixture(scope="session")
def q8_loop(f3):
    # q = 3, f = x^2 + 1 (r = 0, s = 1); this instance is associative
    return rl.build_loop(f3, rl.quadratic_from_codes(f3, 0, 1))


def cyclic_table(m: int) -> rl.LoopTable:
    """Cayley table of the cyclic group of order m (0 is the identity)."""
    idx = np.arange(m)
    return rl.LoopTable((idx[:, None] + idx[None, :]) % m, identity=0)


@pytest.fixture(scope="session")
def all_loops_q_le_9():
    """Every constructed loop for q in {2, 3, 4, 5, 7, 8, 9}, keyed by
    (q, r, s).  Built once per session; several suites sweep over these."""
    out = {}
    for p, n in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]:
        field = rl.field_create(p, n)
        for f in rl.enumerate_irreducible_quadratics(field):
            out[(field.q, f.r.code, f.s.code)] = rl.build_loop(field, f)
    return out
