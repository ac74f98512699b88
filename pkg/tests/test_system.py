from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rankone.errors import DepthError, ScheduleError
from rankone.odometer import enumerate_balls
from rankone.system import (
    CutSpacerSchedule,
    heights,
    partial_measure,
    total_measure,
    validate_schedule,
)

from conftest import RANDOM_SCHEDULES, S1, S2


@st.composite
def schedules(draw, max_levels=5):
    n = draw(st.integers(1, max_levels))
    m = draw(st.lists(st.integers(2, 5), min_size=n, max_size=n))
    a = [draw(st.lists(st.integers(1, 4), min_size=mk - 1, max_size=mk - 1)) for mk in m]
    if draw(st.booleans()):
        return CutSpacerSchedule.explicit(m, a)
    split = draw(st.integers(0, n - 1))
    return CutSpacerSchedule.periodic(m[split:], a[split:], m[:split], a[:split])


class TestValidate:
    def test_minimal_periodic(self):
        s = validate_schedule({"periodic": {"m": [2], "a": [[1]]}})
        assert s == S1
        assert s.m_at(17) == 2 and s.a_at(17) == (1,)

    def test_s2(self):
        assert validate_schedule({"periodic": {"m": [3], "a": [[1, 2]]}}) == S2

    def test_arity(self):
        with pytest.raises(ScheduleError) as err:
            validate_schedule({"explicit": {"m": [3], "a": [[1]]}})
        assert err.value.violations == [("schedule.explicit.a[0]", "a_1 must have length m_1-1 = 2")]

    @pytest.mark.parametrize(
        "raw, path",
        [
            ({"explicit": {"m": [1], "a": [[]]}}, "schedule.explicit.m[0]"),
            ({"explicit": {"m": [2], "a": [[0]]}}, "schedule.explicit.a[0][0]"),
            ({"periodic": {"m": [], "a": []}}, "schedule.periodic.m"),
            ({"explicit": {"m": [2]}}, "schedule.explicit.a"),
            ({"cyclic": {"m": [2], "a": [[1]]}}, "schedule"),
        ],
    )
    def test_violations_name_the_field(self, raw, path):
        with pytest.raises(ScheduleError) as err:
            validate_schedule(raw)
        assert err.value.violations[0][0] == path

    def test_collects_every_violation(self):
        with pytest.raises(ScheduleError) as err:
            validate_schedule({"explicit": {"m": [1, 3], "a": [[], [0, 0]]}})
        assert len(err.value.violations) == 3

    def test_preamble(self):
        s = validate_schedule({"periodic": {"m": [2], "a": [[1]], "preamble": {"m": [3], "a": [[1, 2]]}}})
        assert [s.m_at(k) for k in range(1, 5)] == [3, 2, 2, 2]
        assert s.a_at(1) == (1, 2)

    def test_periodic_cycle(self):
        s = CutSpacerSchedule.periodic([2, 3], [[1], [1, 1]], [4], [[1, 1, 1]])
        assert [s.m_at(k) for k in range(1, 8)] == [4, 2, 3, 2, 3, 2, 3]

    def test_explicit_rejects_depth(self):
        s = CutSpacerSchedule.explicit([2, 2], [[1], [1]])
        with pytest.raises(DepthError):
            s.m_at(3)
        with pytest.raises(DepthError):
            heights(s, 3)

    @given(schedules())
    def test_describe_roundtrip(self, s):
        assert validate_schedule(s.describe()) == s


class TestHeights:
    def test_s1(self):
        assert heights(S1, 4).h == (0, 1, 3, 7, 15)

    def test_s2(self):
        assert heights(S2, 4).h == (0, 3, 12, 39, 120)

    def test_base(self):
        assert heights(S2, 0).h == (0,)

    @pytest.mark.parametrize("schedule", [S1, S2, *RANDOM_SCHEDULES[:2]])
    def test_matches_enumeration(self, schedule):
        h = heights(schedule, 5)
        assert [len(enumerate_balls(schedule, k)) for k in range(1, 6)] == list(h)[1:]

    @given(schedules())
    def test_recurrence_and_growth(self, s):
        K = s.depth or 6
        h = heights(s, K)
        for k in range(1, K + 1):
            assert h[k] == s.m_at(k) * h[k - 1] + sum(s.a_at(k))
            assert h[k] > h[k - 1]

    @given(schedules())
    def test_telescoping_with_measure(self, s):
        K = s.depth or 6
        h = heights(s, K)
        for k in range(K + 1):
            assert Fraction(h[k], s.radix_product(k)) == partial_measure(s, k)


class TestMeasure:
    def test_s1_limit(self):
        assert total_measure(S1).limit == 1

    def test_s2_limit(self):
        assert total_measure(S2).limit == Fraction(3, 2)

    def test_s1_partial(self):
        rep = total_measure(S1, 2)
        assert rep.partial == Fraction(3, 4)
        assert rep.classification == "finite"

    def test_explicit_is_undetermined(self):
        rep = total_measure(RANDOM_SCHEDULES[0])
        assert rep.limit is None and rep.classification == "undetermined"

    def test_limit_against_long_partial_sum(self):
        s = CutSpacerSchedule.periodic([2, 3], [[2], [1, 3]], [4], [[1, 1, 1]])
        limit = total_measure(s).limit
        # tail after 60 levels is below sum(a)/2^60
        assert 0 < limit - partial_measure(s, 60) < Fraction(4, 2**60)

    @given(schedules())
    def test_periodic_tail_bound(self, s):
        if not s.is_periodic:
            return
        limit = total_measure(s).limit
        amax = max(s.spacer_sum(k) for k in range(1, len(s.m) + 1))
        last = Fraction(0)
        for d in range(1, 10):
            part = partial_measure(s, d)
            assert last < part < limit
            assert limit - part <= Fraction(amax, s.radix_product(d))
            last = part
