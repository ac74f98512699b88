import random
from fractions import Fraction
from itertools import product

import pytest

from rankone.system import CutSpacerSchedule

S1 = CutSpacerSchedule.periodic([2], [[1]])
S2 = CutSpacerSchedule.periodic([3], [[1, 2]])


def random_schedule(seed, depth=8, m_range=(2, 5), a_range=(1, 4)):
    rng = random.Random(seed)
    m = [rng.randint(*m_range) for _ in range(depth)]
    a = [[rng.randint(*a_range) for _ in range(mk - 1)] for mk in m]
    return CutSpacerSchedule.explicit(m, a)


RANDOM_SEEDS = [1000, 1001, 1002, 1003, 1004]
RANDOM_SCHEDULES = [random_schedule(s) for s in RANDOM_SEEDS]


def brute_riesz(exponent_lists, radices):
    """Expand prod_k (1/m_k) |sum_p z^{e_p}|^2 by picking one (p, q) pair per factor."""
    out = {}
    weight = Fraction(1)
    for m in radices:
        weight /= m
    pair_sets = [[(p, q) for p in exps for q in exps] for exps in exponent_lists]
    for choice in product(*pair_sets):
        e = sum(p - q for p, q in choice)
        out[e] = out.get(e, Fraction(0)) + weight
    return out


@pytest.fixture
def s1():
    return S1


@pytest.fixture
def s2():
    return S2


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
