from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rankone import odometer as od
from rankone.errors import CapExceeded, InvalidBall
from rankone.odometer import BallAddress as B
from rankone.system import heights

from conftest import RANDOM_SCHEDULES, S1, S2

SYSTEMS = [S1, S2, *RANDOM_SCHEDULES]


def test_zeta_iota():
    assert od.zeta_iota(S2, (0, 2)) == (2, 0)
    assert od.zeta_iota(S1, (1, 0)) == (1, 0)
    with pytest.raises(InvalidBall):
        od.zeta_iota(S1, (1, 1))


def test_mixed_radix_value():
    assert od.mixed_radix_value(S1, (1, 1)) == 3
    assert od.mixed_radix_value(S2, (0, 0, 0)) == 0
    assert od.mixed_radix_value(S2, (1, 2), beta=2) == 5


def test_mixed_radix_bijection():
    s = RANDOM_SCHEDULES[1]
    from itertools import product

    ranges = [range(s.m_at(p)) for p in range(4, 1, -1)]
    values = sorted(od.mixed_radix_value(s, d, beta=2) for d in product(*ranges))
    assert values == list(range(s.m_at(2) * s.m_at(3) * s.m_at(4)))


class TestEnumeration:
    def test_s2_level1(self):
        assert od.enumerate_balls(S2, 1) == [B((0,), 0), B((1,), 0), B((1,), 1)]

    def test_s1_level2(self):
        assert od.enumerate_balls(S1, 2) == [B((0, 0), 0), B((0, 1), 0), B((1, 0), 0)]

    def test_s1_level1(self):
        assert od.enumerate_balls(S1, 1) == [B((0,), 0)]

    def test_cap(self):
        with pytest.raises(CapExceeded):
            od.enumerate_balls(S2, 4, cap=100)

    def test_sorted_in_ball_order(self):
        balls = od.enumerate_balls(S2, 3)
        assert balls == sorted(balls)


class TestUpsilon:
    def test_examples(self):
        assert od.upsilon(S2, B((1, 0), 0)) == 4
        assert od.upsilon(S2, B((0, 0, 0), 0)) == 0
        assert od.upsilon(S2, B((1,), 1)) == 2

    def test_rejects_bad_balls(self):
        with pytest.raises(InvalidBall):
            od.upsilon(S1, B((1, 1), 0))
        with pytest.raises(InvalidBall):
            od.upsilon(S2, B((1,), 2))
        with pytest.raises(InvalidBall):
            od.upsilon(S2, B((3,), 0))

    def test_from_ordinal_examples(self):
        assert od.ball_from_ordinal(S2, 2, 4) == B((1, 0), 0)
        assert od.ball_from_ordinal(S2, 3, 0) == B((0, 0, 0), 0)
        assert od.ball_from_ordinal(S1, 2, 2) == B((1, 0), 0)
        with pytest.raises(IndexError):
            od.ball_from_ordinal(S1, 2, 3)

    @pytest.mark.parametrize("schedule", SYSTEMS)
    def test_bijection_against_enumeration(self, schedule):
        for k in range(1, 5):
            for i, ball in enumerate(od.enumerate_balls(schedule, k)):
                assert od.upsilon(schedule, ball) == i
                assert od.ball_from_ordinal(schedule, k, i) == ball

    def test_exceptional_ball_is_last(self):
        for s in SYSTEMS:
            for k in range(1, 5):
                assert od.upsilon(s, od.exceptional_ball(s, k)) == heights(s, k)[k] - 1


class TestSuccessor:
    def test_examples(self):
        assert od.ball_successor(S2, B((0,), 0)) == B((1,), 0)
        assert od.ball_successor(S2, B((1,), 0)) == B((1,), 1)
        assert od.ball_successor(S1, B((1, 0), 0)) is None

    @pytest.mark.parametrize("schedule", SYSTEMS)
    def test_orbit_visits_every_ball_once(self, schedule):
        for k in range(1, 5):
            h = heights(schedule, k)[k]
            walked = list(od.orbit(schedule, B((0,) * k, 0)))
            assert [od.upsilon(schedule, b) for b in walked] == list(range(h))
            assert od.ball_successor(schedule, walked[-1]) is None
            assert walked[-1] == od.exceptional_ball(schedule, k)


class TestTopSplit:
    def test_s1(self):
        split = od.top_split(S1, 2, 4)
        assert split.balls == (B((0, 1, 1), 0), B((0, 1, 1, 1), 0))
        total = sum((od.ball_measure(S1, b) for b in split.balls), split.residual)
        assert total == Fraction(1, 4) == Fraction(1, 8) + Fraction(1, 16) + Fraction(1, 16)

    def test_s2(self):
        assert od.top_split(S2, 1, 2).balls == (B((0, 2), 0), B((1, 2), 0))

    @pytest.mark.parametrize("schedule", SYSTEMS)
    def test_conserves_measure(self, schedule):
        for k in range(1, 3):
            split = od.top_split(schedule, k, k + 6)
            for b in split.balls:
                od.validate_ball(schedule, b)
            total = sum((od.ball_measure(schedule, b) for b in split.balls), split.residual)
            assert total == od.ball_measure(schedule, od.exceptional_ball(schedule, k))

    def test_pieces_follow_top_ball_in_deeper_orbit(self):
        # Q restricted to the level-(k+1) part of E_k lands on the first split layer
        s = S2
        k = 2
        top = od.exceptional_ball(s, k)
        images = {od.ball_successor(s, c) for c in od.subdivide(s, top)[:-1]}
        assert images == set(od.top_split(s, k, k + 1).balls)


class TestSubdivide:
    def test_examples(self):
        assert od.subdivide(S1, B((0,), 0)) == [B((0, 0), 0), B((1, 0), 0)]
        assert od.subdivide(S2, B((1,), 1)) == [B((0, 1), 1), B((1, 1), 1), B((2, 1), 1)]

    @pytest.mark.parametrize("schedule", SYSTEMS)
    def test_partitions_measure(self, schedule):
        for k in range(1, 4):
            for ball in od.enumerate_balls(schedule, k):
                kids = od.subdivide(schedule, ball)
                assert len(kids) == schedule.m_at(k + 1)
                assert sum(od.ball_measure(schedule, c) for c in kids) == od.ball_measure(schedule, ball)


class TestMeasureAndDistance:
    def test_ball_measure(self):
        assert od.ball_measure(S1, B((0, 1), 0)) == Fraction(1, 4)
        assert od.ball_measure(S1, od.BASE_BALL_0) == 1
        assert od.ball_measure(S2, B((0, 0, 1), 0)) == Fraction(1, 27)

    def test_distance_examples(self):
        assert od.ultrametric_distance(S1, (0, 0, 0), (1, 0, 0)) == Fraction(1, 4)
        assert od.ultrametric_distance(S1, (1, 0, 1), (1, 0, 1)) == 0
        assert od.ultrametric_distance(S1, (0, 0, 0), (0, 0, 1)) == 1

    @settings(max_examples=200)
    @given(st.data())
    def test_strong_triangle(self, data):
        s = data.draw(st.sampled_from(SYSTEMS))
        k = 5
        digits = st.tuples(*[st.integers(0, s.m_at(p) - 1) for p in range(k, 0, -1)])
        x, y, z = data.draw(digits), data.draw(digits), data.draw(digits)
        d = od.ultrametric_distance
        assert d(s, x, z) <= max(d(s, x, y), d(s, y, z))
        assert d(s, x, y) == d(s, y, x)

    def test_intersection_oracle(self):
        assert od.intersection_measure(S1, B((0,), 0), B((1, 0), 0)) == Fraction(1, 4)
        assert od.intersection_measure(S1, B((0, 0), 0), B((0, 1), 0)) == 0
        assert od.intersection_measure(S2, od.BASE_BALL_0, B((1,), 1)) == 0
        assert od.intersection_measure(S2, od.BASE_BALL_0, B((1,), 0)) == Fraction(1, 3)
