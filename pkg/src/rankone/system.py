"""Cut-and-spacer schedules, tower heights and total measure.

A schedule fixes, for every level ``k >= 1``, a cut count ``m_k >= 2`` and
``m_k - 1`` spacer counts ``a_k^0, ..., a_k^{m_k-2}``, each ``>= 1``.
Levels are 1-based throughout the package.

Heights follow the convention ``h_0 = 0``, which is the value forced by the
ball count at level 1 (that count is ``sum(a_1)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Any, Iterator, Mapping, Sequence

from .errors import DepthError, ScheduleError


@dataclass(frozen=True)
class CutSpacerSchedule:
    """Validated schedule parameters.

    ``m`` and ``a`` hold levels ``1..len(m)``.  With ``period`` set, the last
    ``period`` entries repeat forever after the first ``preamble`` ones, so
    ``m_k = m_{k - period}`` for ``k > preamble + period``.
    """

    m: tuple[int, ...]
    a: tuple[tuple[int, ...], ...]
    preamble: int = 0
    period: int | None = None

    def __post_init__(self):
        violations = _rule_violations(self.m, self.a, "")
        if self.period is not None:
            if self.period < 1:
                violations.append(("period", "empty period"))
            elif self.preamble + self.period != len(self.m):
                violations.append(("period", "preamble + period must equal len(m)"))
        elif not self.m:
            violations.append(("m", "explicit schedule needs at least one level"))
        if violations:
            raise ScheduleError(violations)

    @classmethod
    def explicit(cls, m: Sequence[int], a: Sequence[Sequence[int]]) -> "CutSpacerSchedule":
        return cls(tuple(m), tuple(tuple(x) for x in a))

    @classmethod
    def periodic(
        cls,
        m: Sequence[int],
        a: Sequence[Sequence[int]],
        preamble_m: Sequence[int] = (),
        preamble_a: Sequence[Sequence[int]] = (),
    ) -> "CutSpacerSchedule":
        return cls(
            tuple(preamble_m) + tuple(m),
            tuple(tuple(x) for x in preamble_a) + tuple(tuple(x) for x in a),
            preamble=len(preamble_m),
            period=len(m),
        )

    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    @property
    def depth(self) -> int | None:
        """Deepest available level, or ``None`` when every level is available."""
        return None if self.is_periodic else len(self.m)

    def _index(self, k: int) -> int:
        if k < 1:
            raise DepthError(f"levels start at 1, got {k}")
        if self.period is None:
            if k > len(self.m):
                raise DepthError(f"level {k} exceeds schedule depth {len(self.m)}")
            return k - 1
        if k <= len(self.m):
            return k - 1
        return self.preamble + (k - 1 - self.preamble) % self.period

    def check_level(self, k: int) -> None:
        """Raise :class:`DepthError` unless levels ``1..k`` are all available."""
        if k > 0:
            self._index(k)
        elif k < 0:
            raise DepthError(f"negative level {k}")

    def m_at(self, k: int) -> int:
        return self.m[self._index(k)]

    def a_at(self, k: int) -> tuple[int, ...]:
        return self.a[self._index(k)]

    def spacer_sum(self, k: int) -> int:
        return sum(self.a[self._index(k)])

    def radix_product(self, k: int) -> int:
        """``m_1 * ... * m_k``; 1 for ``k = 0``."""
        return prod(self.m_at(j) for j in range(1, k + 1))

    def describe(self) -> dict[str, Any]:
        """Canonical JSON-ready form, accepted back by :func:`validate_schedule`."""
        if self.period is None:
            return {"explicit": {"m": list(self.m), "a": [list(x) for x in self.a]}}
        body: dict[str, Any] = {
            "m": list(self.m[self.preamble:]),
            "a": [list(x) for x in self.a[self.preamble:]],
        }
        if self.preamble:
            body["preamble"] = {
                "m": list(self.m[: self.preamble]),
                "a": [list(x) for x in self.a[: self.preamble]],
            }
        return {"periodic": body}


def _rule_violations(m, a, prefix: str, offset: int = 0) -> list[tuple[str, str]]:
    out = []
    if len(m) != len(a):
        out.append((f"{prefix}a", f"expected {len(m)} spacer lists, got {len(a)}"))
    for i, mk in enumerate(m):
        k = i + 1 + offset
        if not isinstance(mk, int) or isinstance(mk, bool):
            out.append((f"{prefix}m[{i}]", f"m_{k} must be an integer"))
            continue
        if mk < 2:
            out.append((f"{prefix}m[{i}]", f"m_{k} must be >= 2, got {mk}"))
            continue
        if i >= len(a):
            continue
        ak = a[i]
        if len(ak) != mk - 1:
            out.append((f"{prefix}a[{i}]", f"a_{k} must have length m_{k}-1 = {mk - 1}"))
        for j, x in enumerate(ak):
            if not isinstance(x, int) or isinstance(x, bool) or x < 1:
                out.append((f"{prefix}a[{i}][{j}]", f"a_{k}^{j} must be an integer >= 1, got {x!r}"))
    return out


def validate_schedule(raw: Mapping[str, Any], path: str = "schedule") -> CutSpacerSchedule:
    """Build a schedule from its JSON description.

    Accepted shapes::

        {"explicit": {"m": [...], "a": [[...], ...]}}
        {"periodic": {"m": [...], "a": [...], "preamble": {"m": [...], "a": [...]}}}

    ``preamble`` is optional.  Every broken rule is collected and reported in
    a single :class:`ScheduleError`.
    """
    if not isinstance(raw, Mapping) or len(raw) != 1:
        raise ScheduleError([(path, "expected exactly one of 'explicit' or 'periodic'")])
    (kind, body), = raw.items()
    if kind not in ("explicit", "periodic"):
        raise ScheduleError([(path, f"unknown schedule kind {kind!r}")])
    here = f"{path}.{kind}"
    if not isinstance(body, Mapping):
        raise ScheduleError([(here, "expected an object")])

    violations: list[tuple[str, str]] = []

    def fetch(obj, where):
        got = []
        for key in ("m", "a"):
            if key not in obj:
                violations.append((f"{where}.{key}", "missing field"))
                got.append(None)
            elif not isinstance(obj[key], list):
                violations.append((f"{where}.{key}", "expected a list"))
                got.append(None)
            else:
                got.append(obj[key])
        if got[1] is not None:
            for i, ak in enumerate(got[1]):
                if not isinstance(ak, list):
                    violations.append((f"{where}.a[{i}]", "expected a list"))
                    got[1] = None
                    break
        return got

    m, a = fetch(body, here)
    pre_m, pre_a = [], []
    if kind == "periodic" and "preamble" in body:
        pre = body["preamble"]
        if not isinstance(pre, Mapping):
            violations.append((f"{here}.preamble", "expected an object"))
        else:
            pre_m, pre_a = fetch(pre, f"{here}.preamble")
    if violations:
        raise ScheduleError(violations)

    if pre_m:
        violations += _rule_violations(pre_m, pre_a, f"{here}.preamble.")
    if kind == "periodic" and not m:
        violations.append((f"{here}.m", "empty period"))
    elif kind == "explicit" and not m:
        violations.append((f"{here}.m", "explicit schedule needs at least one level"))
    violations += _rule_violations(m, a, f"{here}.", offset=len(pre_m))
    if violations:
        raise ScheduleError(violations)

    if kind == "explicit":
        return CutSpacerSchedule.explicit(m, a)
    return CutSpacerSchedule.periodic(m, a, pre_m, pre_a)


@dataclass(frozen=True)
class HeightTable:
    """Tower heights ``h_0, ..., h_K``."""

    h: tuple[int, ...]

    def __getitem__(self, k):
        return self.h[k]

    def __len__(self) -> int:
        return len(self.h)

    def __iter__(self) -> Iterator[int]:
        return iter(self.h)

    @property
    def depth(self) -> int:
        return len(self.h) - 1


def heights(schedule: CutSpacerSchedule, K: int) -> HeightTable:
    """Heights up to level ``K`` by ``h_k = m_k h_{k-1} + sum(a_k)`` from ``h_0 = 0``."""
    schedule.check_level(K)
    h = [0]
    for k in range(1, K + 1):
        h.append(schedule.m_at(k) * h[-1] + schedule.spacer_sum(k))
    return HeightTable(tuple(h))


@dataclass(frozen=True)
class MeasureReport:
    partial: Fraction
    depth: int
    limit: Fraction | None
    classification: str  # "finite" or "undetermined"

    @property
    def tail(self) -> Fraction | None:
        return None if self.limit is None else self.limit - self.partial


def partial_measure(schedule: CutSpacerSchedule, depth: int) -> Fraction:
    """``sum_{k<=depth} sum(a_k) / (m_1 ... m_k)``."""
    schedule.check_level(depth)
    total = Fraction(0)
    scale = 1
    for k in range(1, depth + 1):
        scale *= schedule.m_at(k)
        total += Fraction(schedule.spacer_sum(k), scale)
    return total


def total_measure(schedule: CutSpacerSchedule, depth: int | None = None) -> MeasureReport:
    """Partial total measure, plus the exact limit for periodic schedules.

    For a periodic schedule each further period scales the block sum by
    ``1 / prod(m over one period) <= 1/2``, so the tail is a geometric series
    and the measure is always finite.  Explicit schedules only report the
    partial sum and are classified ``"undetermined"``.
    """
    if depth is None:
        depth = schedule.depth if schedule.depth is not None else len(schedule.m)
    partial = partial_measure(schedule, depth)
    if not schedule.is_periodic:
        return MeasureReport(partial, depth, None, "undetermined")
    head = partial_measure(schedule, schedule.preamble)
    block = partial_measure(schedule, len(schedule.m)) - head
    ratio = prod(schedule.m[schedule.preamble:])
    limit = head + block * Fraction(ratio, ratio - 1)
    return MeasureReport(partial, depth, limit, "finite")
