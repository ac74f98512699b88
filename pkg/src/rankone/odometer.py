"""Digit strings, balls and the odometer-like map ``Q`` on them.

Digit strings are tuples written top-first, ``(s_k, ..., s_1)``, so
``digits[k - j]`` is the digit at position ``j``.  A ball of level ``k`` is a
digit string of length ``k`` that is not all-nines (digit ``m_j - 1`` at every
position ``j``) together with a floor digit ``s_0``.  The one ball of level 0
is the embedded copy of the digit ring itself, ``BallAddress((), 0)``.

Everything here is combinatorial; points of the space are never
materialized, a deep ball stands in for a point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .errors import CapExceeded, DepthError, InvalidBall
from .system import CutSpacerSchedule, heights

DEFAULT_ENUMERATION_CAP = 2_000_000

Digits = tuple[int, ...]


@dataclass(frozen=True, order=True)
class BallAddress:
    digits: Digits
    floor: int = 0

    @property
    def level(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        sep = "" if all(d < 10 for d in self.digits) else ","
        return f"B_{self.level}({sep.join(map(str, self.digits))};{self.floor})"


BASE_BALL_0 = BallAddress((), 0)


def nines(schedule: CutSpacerSchedule, k: int) -> Digits:
    """The all-nines string ``(m_k - 1, ..., m_1 - 1)``."""
    return tuple(schedule.m_at(j) - 1 for j in range(k, 0, -1))


def check_digits(schedule: CutSpacerSchedule, digits: Sequence[int]) -> None:
    k = len(digits)
    schedule.check_level(k)
    for pos, d in zip(range(k, 0, -1), digits):
        if not 0 <= d < schedule.m_at(pos):
            raise InvalidBall(f"digit at position {pos} is {d}, radix is {schedule.m_at(pos)}")


def zeta_iota(schedule: CutSpacerSchedule, digits: Sequence[int]) -> tuple[int, int]:
    """Position and value of the lowest digit that is not maximal.

    Undefined on the all-nines string, which raises :class:`InvalidBall`.
    """
    k = len(digits)
    for pos in range(1, k + 1):
        d = digits[k - pos]
        if d != schedule.m_at(pos) - 1:
            return pos, d
    raise InvalidBall("zeta/iota are undefined on an all-nines digit string")


def floor_cap(schedule: CutSpacerSchedule, digits: Sequence[int]) -> int:
    """Number of admissible floor digits over ``digits``: ``a_zeta^iota``."""
    z, i = zeta_iota(schedule, digits)
    return schedule.a_at(z)[i]


def validate_ball(schedule: CutSpacerSchedule, ball: BallAddress) -> None:
    if ball.level == 0:
        if ball.floor != 0:
            raise InvalidBall("the level-0 ball has floor 0")
        return
    check_digits(schedule, ball.digits)
    cap = floor_cap(schedule, ball.digits)
    if not 0 <= ball.floor < cap:
        raise InvalidBall(f"floor {ball.floor} outside 0..{cap - 1} for {ball}")


def mixed_radix_value(schedule: CutSpacerSchedule, digits: Sequence[int], beta: int = 1) -> int:
    """Value of ``(s_k, ..., s_beta)`` with place value ``prod(m_u, beta <= u < t)`` at position ``t``.

    The lowest listed digit sits at position ``beta`` and has weight 1.
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    value = 0
    weight = 1
    pos = beta
    for d in reversed(digits):
        value += d * weight
        weight *= schedule.m_at(pos)
        pos += 1
    return value


def upsilon(schedule: CutSpacerSchedule, ball: BallAddress) -> int:
    """Ordinal of ``ball`` in the orbit of the level's base ball under ``Q``."""
    validate_ball(schedule, ball)
    k = ball.level
    digits = ball.digits
    total = ball.floor
    for alpha in range(1, k + 1):
        a = schedule.a_at(alpha)
        higher = digits[: k - alpha]
        total += mixed_radix_value(schedule, higher, alpha + 1) * sum(a)
        total += sum(a[: digits[k - alpha]])
    return total


def ball_from_ordinal(schedule: CutSpacerSchedule, k: int, t: int) -> BallAddress:
    """Inverse of :func:`upsilon` at level ``k``, by peeling the top digit.

    Within the top digit ``d`` the block holds the ``h_{k-1}`` balls with
    lower digits forming a level ``k-1`` ball, followed (for ``d < m_k - 1``)
    by the ``a_k^d`` balls whose lower digits are all nines.
    """
    if k < 1:
        raise DepthError("ordinals are defined for levels >= 1")
    h = heights(schedule, k)
    if not 0 <= t < h[k]:
        raise IndexError(f"ordinal {t} outside 0..{h[k] - 1}")
    digits: list[int] = []
    level = k
    while True:
        mk = schedule.m_at(level)
        a = schedule.a_at(level)
        below = h[level - 1]
        start = 0
        for d in range(mk):
            size = below + (a[d] if d < mk - 1 else 0)
            if t < start + size:
                break
            start += size
        digits.append(d)
        t -= start
        if t >= below:
            digits.extend(nines(schedule, level - 1))
            return BallAddress(tuple(digits), t - below)
        level -= 1


def iter_balls(schedule: CutSpacerSchedule, k: int) -> Iterator[BallAddress]:
    """All level-``k`` balls by brute force, in the lexicographic ball order."""
    if k < 1:
        raise DepthError("enumeration starts at level 1")
    schedule.check_level(k)
    ranges = [range(schedule.m_at(pos)) for pos in range(k, 0, -1)]
    top = nines(schedule, k)
    for digits in product(*ranges):
        if digits == top:
            continue
        for floor in range(floor_cap(schedule, digits)):
            yield BallAddress(digits, floor)


def enumerate_balls(schedule: CutSpacerSchedule, k: int, cap: int = DEFAULT_ENUMERATION_CAP) -> list[BallAddress]:
    out = []
    for ball in iter_balls(schedule, k):
        if len(out) >= cap:
            raise CapExceeded(f"more than {cap} balls at level {k}")
        out.append(ball)
    return out


def exceptional_ball(schedule: CutSpacerSchedule, k: int) -> BallAddress:
    """The last ball ``E_k`` of level ``k``, the only one ``Q`` does not map to a ball."""
    if k < 1:
        raise DepthError("levels start at 1")
    digits = nines(schedule, k)[:-1] + (schedule.m_at(1) - 2,)
    return BallAddress(digits, schedule.a_at(1)[-1] - 1)


def ball_successor(schedule: CutSpacerSchedule, ball: BallAddress) -> BallAddress | None:
    """Image of ``ball`` under ``Q``, or ``None`` when ``ball`` is ``E_k``.

    Raise the floor digit; past its cap, add one to the digit string with
    carries and reset the floor to 0.
    """
    validate_ball(schedule, ball)
    if ball.level == 0:
        raise InvalidBall("the level-0 ball has no successor ball")
    if ball.floor + 1 < floor_cap(schedule, ball.digits):
        return BallAddress(ball.digits, ball.floor + 1)
    digits = list(ball.digits)
    k = len(digits)
    for pos in range(1, k + 1):
        i = k - pos
        if digits[i] + 1 < schedule.m_at(pos):
            digits[i] += 1
            break
        digits[i] = 0
    else:
        raise AssertionError("carry out of a non-all-nines string")
    if tuple(digits) == nines(schedule, k):
        return None
    return BallAddress(tuple(digits), 0)


def orbit(schedule: CutSpacerSchedule, ball: BallAddress, limit: int | None = None) -> Iterator[BallAddress]:
    """``ball, Q ball, Q^2 ball, ...`` up to ``E_k`` (or ``limit`` items)."""
    count = 0
    while ball is not None and (limit is None or count < limit):
        yield ball
        count += 1
        ball = ball_successor(schedule, ball)


def subdivide(schedule: CutSpacerSchedule, ball: BallAddress) -> list[BallAddress]:
    """The ``m_{k+1}`` children of ``ball`` at level ``k + 1``."""
    validate_ball(schedule, ball)
    if ball.level == 0:
        raise InvalidBall("the level-0 ball is not a finite union of level-1 balls")
    m_next = schedule.m_at(ball.level + 1)
    return [BallAddress((i,) + ball.digits, ball.floor) for i in range(m_next)]


def refine(schedule: CutSpacerSchedule, ball: BallAddress, level: int) -> list[BallAddress]:
    """Partition of ``ball`` into balls of a deeper ``level``."""
    out = [ball]
    for _ in range(ball.level, level):
        out = [child for b in out for child in subdivide(schedule, b)]
    return out


def ball_measure(schedule: CutSpacerSchedule, ball: BallAddress) -> Fraction:
    validate_ball(schedule, ball)
    return Fraction(1, schedule.radix_product(ball.level))


def contains(outer: BallAddress, inner: BallAddress) -> bool:
    """Whether ``inner`` lies inside ``outer`` (both assumed valid)."""
    if inner.level < outer.level:
        return False
    if outer.level == 0:
        return inner.floor == 0
    return inner.digits[inner.level - outer.level:] == outer.digits and inner.floor == outer.floor


def intersection_measure(schedule: CutSpacerSchedule, x: BallAddress, y: BallAddress) -> Fraction:
    """``mu(x & y)`` from the nesting-or-disjoint property of balls."""
    small, big = (x, y) if x.level >= y.level else (y, x)
    return ball_measure(schedule, small) if contains(big, small) else Fraction(0)


@dataclass(frozen=True)
class TopSplit:
    """Decomposition of ``Q(E_k)`` down to ``max_level``.

    ``residual`` is the measure of the part whose digits ``k+1..max_level``
    are all maximal; it splits further at deeper levels.
    """

    k: int
    max_level: int
    balls: tuple[BallAddress, ...]
    residual: Fraction


def top_split(schedule: CutSpacerSchedule, k: int, max_level: int) -> TopSplit:
    """``Q(E_k)`` as the balls ``B_l[j 9...9; 0]``, ``k < l <= max_level``, ``j <= m_l - 2``."""
    if k < 1 or max_level <= k:
        raise ValueError("need 1 <= k < max_level")
    schedule.check_level(max_level)
    balls = []
    for level in range(k + 1, max_level + 1):
        tail = nines(schedule, level - 1)
        for j in range(schedule.m_at(level) - 1):
            balls.append(BallAddress((j,) + tail, 0))
    return TopSplit(k, max_level, tuple(balls), Fraction(1, schedule.radix_product(max_level)))


def ultrametric_distance(schedule: CutSpacerSchedule, x: Sequence[int], y: Sequence[int]) -> Fraction:
    """``1/(m_1 ... m_j)`` where ``j`` is the number of agreeing low digits; 0 if equal."""
    if len(x) != len(y):
        raise ValueError("digit strings must have equal length")
    k = len(x)
    for j in range(k):
        if x[k - 1 - j] != y[k - 1 - j]:
            return Fraction(1, schedule.radix_product(j))
    return Fraction(0)
