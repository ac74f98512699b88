"""Spectral data of a rank-one system.

``Theta_k`` is the sparse 0/1 polynomial whose exponents are the ordinals of
the ``m_k`` children of the level ``k-1`` base ball, ``T_k = Theta_k
reflect(Theta_k) / m_k``, and the partial Riesz product ``P_n = T_1 ... T_n``
is the density of the measure ``kappa_n`` on the circle.

The image of a ball indicator under the spectral isometry is
``z^Upsilon / (Theta_1 ... Theta_k)``.  Inner products of such images against
``kappa_n`` reduce to single coefficients of products of ``Theta`` and ``T``
factors, so the quotient is never divided out numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, DepthError
from .laurent import LaurentPolynomial
from .odometer import (
    BallAddress,
    ball_from_ordinal,
    refine,
    subdivide,
    upsilon,
    validate_ball,
)
from .system import CutSpacerSchedule, HeightTable, heights

DEFAULT_SUPPORT_CAP = 20_000_000
DEFAULT_MATRIX_CAP = 2048
DEFAULT_GRID = 1 << 14
DEFAULT_GRID_CAP = 1 << 20


class ThetaFamily:
    """Cached ``Theta_k``, ``T_k`` and their products for one schedule.

    Caches only ever receive values that are pure functions of their keys, so
    a family can be shared freely.
    """

    def __init__(self, schedule: CutSpacerSchedule, support_cap: int = DEFAULT_SUPPORT_CAP):
        self.schedule = schedule
        self.support_cap = support_cap
        self._heights = heights(schedule, 0)
        self._theta: dict[int, LaurentPolynomial] = {}
        self._products: dict[tuple[int, int], LaurentPolynomial] = {}

    def heights(self, k: int) -> HeightTable:
        if k > self._heights.depth:
            self._heights = heights(self.schedule, k)
        return HeightTable(self._heights.h[: k + 1])

    def h(self, k: int) -> int:
        return self.heights(k)[k]

    def radix_product(self, k: int) -> int:
        return self.schedule.radix_product(k)

    def theta_exponents(self, k: int) -> list[int]:
        """``p h_{k-1} + a_k^0 + ... + a_k^{p-1}`` for ``p = 0..m_k-1``."""
        self.schedule.check_level(k)
        if k < 1:
            raise DepthError("Theta is indexed from level 1")
        h_prev = self.h(k - 1)
        a = self.schedule.a_at(k)
        return [p * h_prev + sum(a[:p]) for p in range(self.schedule.m_at(k))]

    def theta(self, k: int) -> LaurentPolynomial:
        if k not in self._theta:
            self._theta[k] = LaurentPolynomial.from_exponents(self.theta_exponents(k))
        return self._theta[k]

    def t_factor(self, k: int) -> LaurentPolynomial:
        th = self.theta(k)
        return (th * th.reflect()).scale(Fraction(1, self.schedule.m_at(k)))

    def t_product(self, l: int, k: int) -> LaurentPolynomial:
        """``T_{l+1} ... T_k``; the constant 1 when ``l >= k``."""
        if l >= k:
            return LaurentPolynomial.constant(1)
        self.schedule.check_level(k)
        width = 2 * (self.h(k) - self.h(l)) + 1
        if width > self.support_cap:
            raise CapExceeded(f"support {width} of T_{l + 1}..T_{k} exceeds cap {self.support_cap}")
        key = (l, k)
        if key not in self._products:
            prev = self.t_product(l, k - 1)
            th = self.theta(k)
            nxt = (prev * th * th.reflect()).scale(Fraction(1, self.schedule.m_at(k)))
            self._products[key] = nxt
        return self._products[key]

    def theta_product(self, l: int, k: int) -> LaurentPolynomial:
        """``Theta_{l+1} ... Theta_k``."""
        out = LaurentPolynomial.constant(1)
        for j in range(l + 1, k + 1):
            out = out * self.theta(j)
        return out


def theta(family: ThetaFamily, k: int) -> LaurentPolynomial:
    return family.theta(k)


def t_factor(family: ThetaFamily, k: int) -> LaurentPolynomial:
    return family.t_factor(k)


@dataclass(frozen=True)
class RieszPartial:
    n: int
    density: LaurentPolynomial


def riesz_partial(family: ThetaFamily, n: int) -> RieszPartial:
    """Exact density ``P_n`` of ``kappa_n``."""
    return RieszPartial(n, family.t_product(0, n))


def fourier_sequence(family: ThetaFamily, alpha: int, n_max: int) -> list[Fraction]:
    """``[coeff(P_1, alpha), ..., coeff(P_{n_max}, alpha)]``.

    These are nondecreasing lower bounds for the Fourier coefficient of the
    limit measure; the limit itself is not computed.
    """
    return [family.t_product(0, n).coeff(alpha) for n in range(1, n_max + 1)]


@dataclass(frozen=True)
class GapReport:
    l: int
    k: int
    h_l: int
    min_positive_exponent: int | None
    violations: tuple[int, ...]
    passed: bool


def check_gap(family: ThetaFamily, l: int, k: int) -> GapReport:
    """Check that ``T_{l+1} ... T_k`` has no mass on ``0 < |alpha| < h_l``."""
    if not 0 <= l < k:
        raise ValueError("need 0 <= l < k")
    prod = family.t_product(l, k)
    h_l = family.h(l)
    positive = [e for e in prod.exponents() if e > 0]
    bad = tuple(e for e in prod.exponents() if 0 < abs(e) < h_l)
    return GapReport(
        l=l,
        k=k,
        h_l=h_l,
        min_positive_exponent=positive[0] if positive else None,
        violations=bad[:16],
        passed=not bad,
    )


@dataclass(frozen=True)
class GramReport:
    """Inner products of isometry images of the level-``k`` ball indicators under ``kappa_n``.

    Rows and columns are indexed by ball ordinal.  Entry ``(s, t)`` is
    ``numerators[s, t] / denominator``.
    """

    k: int
    n: int
    numerators: np.ndarray = field(repr=False)
    denominator: int
    expected_diagonal: Fraction
    symmetric: bool
    passed: bool

    @property
    def size(self) -> int:
        return self.numerators.shape[0]

    def entry(self, s: int, t: int) -> Fraction:
        return Fraction(int(self.numerators[s, t]), self.denominator)

    def matrix(self) -> list[list[Fraction]]:
        return [[self.entry(s, t) for t in range(self.size)] for s in range(self.size)]


def gram(family: ThetaFamily, k: int, n: int, matrix_cap: int = DEFAULT_MATRIX_CAP) -> GramReport:
    """Exact Gram matrix of the level-``k`` indicators, expected ``(m_1...m_k)^{-1} I``."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    family.schedule.check_level(n)
    size = family.h(k)
    if size > matrix_cap:
        raise CapExceeded(f"h_{k} = {size} exceeds matrix cap {matrix_cap}")
    sched = family.schedule
    exps = np.array([upsilon(sched, ball_from_ordinal(sched, k, t)) for t in range(size)], dtype=np.int64)
    tail = family.t_product(k, n)
    nums = tail.coeff_numerators(exps[None, :] - exps[:, None])
    scale = family.radix_product(k)
    expected = np.zeros((size, size), dtype=nums.dtype)
    np.fill_diagonal(expected, tail.denominator)
    g = math.gcd(tail.denominator * scale, _array_gcd(nums))
    return GramReport(
        k=k,
        n=n,
        numerators=nums // g if g > 1 else nums,
        denominator=tail.denominator * scale // g,
        expected_diagonal=Fraction(1, scale),
        symmetric=bool(np.array_equal(nums, nums.T)),
        passed=bool(np.array_equal(nums, expected)),
    )


def _array_gcd(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return math.gcd(*a.ravel().tolist())
    return int(np.gcd.reduce(a.ravel()))


def inner_product(family: ThetaFamily, x: BallAddress, y: BallAddress, n: int) -> Fraction:
    """``<R I_x, R I_y>`` against ``kappa_n`` by refining both balls to a common level.

    The level-0 ball does not split into finitely many balls, so pairs that
    involve it go through :func:`inner_product_direct`.
    """
    sched = family.schedule
    validate_ball(sched, x)
    validate_ball(sched, y)
    level = max(x.level, y.level)
    if level > n:
        raise ValueError(f"n = {n} must be at least the deepest level {level}")
    if min(x.level, y.level) == 0:
        return inner_product_direct(family, x, y, n)
    tail = family.t_product(level, n)
    ux = [upsilon(sched, b) for b in refine(sched, x, level)]
    uy = [upsilon(sched, b) for b in refine(sched, y, level)]
    total = sum((tail.coeff(v - u) for u in ux for v in uy), Fraction(0))
    return total / family.radix_product(level)


def inner_product_direct(family: ThetaFamily, x: BallAddress, y: BallAddress, n: int) -> Fraction:
    """Same inner product without refinement.

    For ``x`` at level ``s <= t`` the integrand collapses to
    ``z^(Upsilon_x - Upsilon_y) Theta_{s+1}...Theta_t T_{t+1}...T_n / (m_1...m_t)``.
    """
    sched = family.schedule
    if x.level > y.level:
        x, y = y, x
    s, t = x.level, y.level
    if t > n:
        raise ValueError(f"n = {n} must be at least the deepest level {t}")
    ux = upsilon(sched, x) if s else 0
    uy = upsilon(sched, y) if t else 0
    kernel = family.theta_product(s, t) * family.t_product(t, n)
    return kernel.coeff(uy - ux) / family.radix_product(t)


@dataclass(frozen=True)
class RefinementReport:
    ball: BallAddress
    n: int
    child_ordinals: tuple[int, ...]
    base_child_ordinals: tuple[int, ...]
    theta_exponents: tuple[int, ...]
    image_identity: bool
    inner_products_agree: bool
    mismatches: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return (
            self.base_child_ordinals == self.theta_exponents
            and self.image_identity
            and self.inner_products_agree
        )


def refinement_invariance(family: ThetaFamily, ball: BallAddress, n: int, partners: int | None = 64) -> RefinementReport:
    """Check that splitting a ball into its children leaves the isometry image unchanged.

    Three checks at level ``k = ball.level``:

    * the children of the base ball sit at the exponents of ``Theta_{k+1}``;
    * ``z^Upsilon(ball) Theta_{k+1} = sum_i z^Upsilon(child_i)`` exactly, which
      is the image identity cleared of its common denominator;
    * inner products with level-``k`` balls (the first ``partners`` of them,
      all when ``None``) agree when both sides are refined one more level.
    """
    sched = family.schedule
    validate_ball(sched, ball)
    k = ball.level
    if k < 1:
        raise ValueError("refinement starts from a level >= 1 ball")
    if k + 1 > n:
        raise ValueError("need ball level + 1 <= n")
    children = subdivide(sched, ball)
    child_u = tuple(upsilon(sched, c) for c in children)
    base = BallAddress((0,) * k, 0)
    base_u = tuple(upsilon(sched, c) for c in subdivide(sched, base))
    th_exps = tuple(family.theta_exponents(k + 1))

    lhs = family.theta(k + 1).shift(upsilon(sched, ball))
    rhs = LaurentPolynomial.from_exponents(child_u)
    image_ok = lhs == rhs

    mismatches = []
    coarse_tail = family.t_product(k, n)
    fine_tail = family.t_product(k + 1, n)
    u_ball = upsilon(sched, ball)
    count = family.h(k) if partners is None else min(partners, family.h(k))
    for t in range(count):
        other = ball_from_ordinal(sched, k, t)
        u_other = upsilon(sched, other)
        coarse = coarse_tail.coeff(u_other - u_ball) / family.radix_product(k)
        o_children = [upsilon(sched, c) for c in subdivide(sched, other)]
        fine = sum((fine_tail.coeff(v - u) for u in child_u for v in o_children), Fraction(0))
        fine /= family.radix_product(k + 1)
        if coarse != fine:
            mismatches.append(f"{other}: level {k} gives {coarse}, level {k + 1} gives {fine}")

    return RefinementReport(
        ball=ball,
        n=n,
        child_ordinals=child_u,
        base_child_ordinals=base_u,
        theta_exponents=th_exps,
        image_identity=image_ok,
        inner_products_agree=not mismatches,
        mismatches=tuple(mismatches[:8]),
    )


def _grid_values(exponents, grid: int) -> np.ndarray:
    """``sum_p exp(2 pi i e_p j / grid)`` for ``j = 0..grid-1``.

    Phases are reduced modulo ``grid`` in integers first so large exponents
    cost no accuracy.
    """
    j = np.arange(grid, dtype=np.int64)
    total = np.zeros(grid, dtype=np.complex128)
    for e in exponents:
        r = (int(e) % grid) * j % grid
        total += np.exp(2j * np.pi * r / grid)
    return total


@dataclass(frozen=True)
class ZeroCertificate:
    k: int
    certified: bool
    grid: int
    lipschitz: int
    min_modulus: float
    margin: float
    witness_theta: float
    witness_value: float

    @property
    def status(self) -> str:
        return "certified" if self.certified else "not_certified"


def zero_certificate(family: ThetaFamily, k: int, grid: int = DEFAULT_GRID, grid_cap: int = DEFAULT_GRID_CAP) -> ZeroCertificate:
    """Certify that ``Theta_k`` has no zeros on the unit circle, or return a near-zero witness.

    ``|d/dtheta Theta_k| <= L = sum of exponents`` and every angle is within
    ``pi/N`` of an ``N``-point grid, so a grid minimum above ``pi L / N``
    proves the modulus stays positive.  The grid doubles until that holds or
    ``grid_cap`` is passed.
    """
    exps = family.theta_exponents(k)
    lip = sum(exps)
    n_pts = grid
    while True:
        mod = np.abs(_grid_values(exps, n_pts))
        i = int(np.argmin(mod))
        low = float(mod[i])
        slack = math.pi * lip / n_pts
        if low > slack or 2 * n_pts > grid_cap:
            return ZeroCertificate(
                k=k,
                certified=low > slack,
                grid=n_pts,
                lipschitz=lip,
                min_modulus=low,
                margin=low - slack,
                witness_theta=2 * math.pi * i / n_pts,
                witness_value=low,
            )
        n_pts *= 2


@dataclass(frozen=True)
class DensityTable:
    n: int
    theta: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)


def density_samples(family: ThetaFamily, n: int, grid: int = 1 << 12) -> DensityTable:
    """``P_n`` on a uniform grid from the factored form ``prod |Theta_k|^2 / m_k``."""
    family.schedule.check_level(n)
    values = np.ones(grid, dtype=np.float64)
    for k in range(1, n + 1):
        values *= np.abs(_grid_values(family.theta_exponents(k), grid)) ** 2 / family.schedule.m_at(k)
    theta = 2 * np.pi * np.arange(grid) / grid
    return DensityTable(n, theta, values)


def density_crosscheck(family: ThetaFamily, n: int, grid: int = 1 << 12) -> float:
    """Largest gap between factored samples and the expanded exact ``P_n``, relative to the sup norm."""
    table = density_samples(family, n, grid)
    exact = riesz_partial(family, n).density
    expanded = np.real(exact.eval_unit_circle(table.theta))
    scale = max(1.0, float(np.max(np.abs(table.values))))
    return float(np.max(np.abs(expanded - table.values))) / scale

