"""Exact Laurent polynomials with rational coefficients.

A polynomial is stored densely over its support ``lo..hi`` as an integer
numerator vector with one shared positive denominator, kept in lowest terms
(``gcd(numerators, denominator) == 1``) and trimmed so both end coefficients
are nonzero.  Coefficients read back as :class:`fractions.Fraction`.

Numerators live in an ``int64`` array while the sum of their absolute values
stays below ``2**62``; past that they move to an object array of Python ints.
Products are shift-and-add convolutions over the nonzero terms of the
sparser factor, which is the cheap direction for the sparse tower factors.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from numbers import Rational
from typing import Iterable, Iterator, Mapping

import numpy as np

_SAFE = 1 << 62


def _sum_abs(num: np.ndarray) -> int:
    if num.dtype == object:
        return sum(abs(x) for x in num.tolist())
    return int(np.abs(num).sum())


def _as_int64_if_safe(num: np.ndarray) -> np.ndarray:
    if num.dtype == object and _sum_abs(num) < _SAFE:
        return num.astype(np.int64)
    return num


def _vector_gcd(num: np.ndarray) -> int:
    if num.size == 0:
        return 0
    if num.dtype == object:
        return reduce(gcd, num.tolist(), 0)
    return int(np.gcd.reduce(num))


class LaurentPolynomial:
    """Immutable exact Laurent polynomial ``sum c_alpha z^alpha``."""

    __slots__ = ("_lo", "_num", "_den")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None):
        if not coeffs:
            self._set(0, np.zeros(0, dtype=np.int64), 1)
            return
        items = {int(e): Fraction(c) for e, c in coeffs.items() if c != 0}
        if not items:
            self._set(0, np.zeros(0, dtype=np.int64), 1)
            return
        den = reduce(lambda x, y: x * y // gcd(x, y), (c.denominator for c in items.values()), 1)
        lo, hi = min(items), max(items)
        num = np.zeros(hi - lo + 1, dtype=object)
        for e, c in items.items():
            num[e - lo] = c.numerator * (den // c.denominator)
        self._normalize(lo, num, den)

    @classmethod
    def _raw(cls, lo: int, num: np.ndarray, den: int = 1) -> "LaurentPolynomial":
        p = cls.__new__(cls)
        p._normalize(lo, num, den)
        return p

    def _set(self, lo, num, den):
        num.flags.writeable = False
        self._lo = lo
        self._num = num
        self._den = den

    def _normalize(self, lo: int, num: np.ndarray, den: int) -> None:
        nz = np.flatnonzero(num)
        if nz.size == 0:
            self._set(0, np.zeros(0, dtype=np.int64), 1)
            return
        num = num[nz[0]: nz[-1] + 1]
        lo += int(nz[0])
        if den < 0:
            num, den = -num, -den
        g = gcd(_vector_gcd(num), den)
        if g > 1:
            num = num // g
            den //= g
        num = _as_int64_if_safe(num)
        if num.dtype != object and _sum_abs(num) >= _SAFE:
            num = num.astype(object)
        self._set(lo, np.array(num, copy=True), int(den))

    # -- construction -------------------------------------------------

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "LaurentPolynomial":
        """``sum z^e`` over ``exponents``; repeated exponents add up."""
        exps = np.asarray(list(exponents), dtype=np.int64)
        if exps.size == 0:
            return cls()
        lo = int(exps.min())
        num = np.bincount(exps - lo).astype(np.int64)
        return cls._raw(lo, num)

    @classmethod
    def constant(cls, c: Rational = 1) -> "LaurentPolynomial":
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c: Rational = 1) -> "LaurentPolynomial":
        return cls({e: c})

    # -- inspection ---------------------------------------------------

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        """Highest exponent; ``lo - 1`` for the zero polynomial."""
        return self._lo + len(self._num) - 1

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def numerators(self) -> np.ndarray:
        """Read-only numerator vector over ``lo..hi``."""
        return self._num

    def is_zero(self) -> bool:
        return len(self._num) == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __len__(self) -> int:
        return len(self._num)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self._den) for x in self._num.tolist())

    def coeff(self, alpha: int) -> Fraction:
        i = alpha - self._lo
        if 0 <= i < len(self._num):
            return Fraction(int(self._num[i]), self._den)
        return Fraction(0)

    __getitem__ = coeff

    def coeff_numerators(self, alphas) -> np.ndarray:
        """Numerators (over :attr:`denominator`) at many exponents; zero off support."""
        alphas = np.asarray(alphas, dtype=np.int64)
        idx = alphas - self._lo
        inside = (idx >= 0) & (idx < len(self._num))
        out = np.zeros(alphas.shape, dtype=self._num.dtype)
        out[inside] = self._num[idx[inside]]
        return out

    def items(self) -> Iterator[tuple[int, Fraction]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing exponent order."""
        for i in np.flatnonzero(self._num).tolist():
            yield self._lo + i, Fraction(int(self._num[i]), self._den)

    def exponents(self) -> list[int]:
        return [self._lo + i for i in np.flatnonzero(self._num).tolist()]

    def nnz(self) -> int:
        return int(np.count_nonzero(self._num))

    def value_at_one(self) -> Fraction:
        """Exact sum of coefficients."""
        total = int(self._num.sum()) if self._num.dtype != object else sum(self._num.tolist())
        return Fraction(total, self._den)

    def is_palindromic(self) -> bool:
        if self.is_zero():
            return True
        return self._lo == -self.hi and bool(np.array_equal(self._num, self._num[::-1]))

    # -- algebra ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Rational):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return (
            self._lo == other._lo
            and self._den == other._den
            and len(self._num) == len(other._num)
            and bool(np.array_equal(self._num, other._num))
        )

    def __hash__(self) -> int:
        return hash((self._lo, self._den, tuple(self._num.tolist())))

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._raw(self._lo, -self._num, self._den)

    def __add__(self, other) -> "LaurentPolynomial":
        if isinstance(other, Rational):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        den = self._den * other._den // gcd(self._den, other._den)
        lo = min(self._lo, other._lo)
        hi = max(self.hi, other.hi)
        wide = max(_sum_abs(self._num) * (den // self._den), _sum_abs(other._num) * (den // other._den))
        dtype = np.int64 if 2 * wide < _SAFE else object
        out = np.zeros(hi - lo + 1, dtype=dtype)
        for p in (self, other):
            scaled = p._num.astype(dtype) * (den // p._den)
            out[p._lo - lo: p._lo - lo + len(p._num)] += scaled
        return LaurentPolynomial._raw(lo, out, den)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPolynomial":
        if isinstance(other, Rational):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPolynomial":
        return (-self) + other

    def scale(self, c: Rational) -> "LaurentPolynomial":
        c = Fraction(c)
        if c == 0:
            return LaurentPolynomial()
        num = self._num if c.numerator == 1 else self._num.astype(object) * c.numerator
        return LaurentPolynomial._raw(self._lo, num, self._den * c.denominator)

    def __mul__(self, other) -> "LaurentPolynomial":
        if isinstance(other, Rational):
            return self.scale(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return LaurentPolynomial()
        big, small = (self, other) if self.nnz() >= other.nnz() else (other, self)
        bound = _sum_abs(big._num) * _sum_abs(small._num)
        dtype = np.int64 if bound < _SAFE else object
        src = big._num.astype(dtype)
        out = np.zeros(len(big._num) + len(small._num) - 1, dtype=dtype)
        n = len(src)
        for i in np.flatnonzero(small._num).tolist():
            c = small._num[i]
            c = int(c) if dtype == object else np.int64(c)
            if c == 1:
                out[i: i + n] += src
            else:
                out[i: i + n] += c * src
        return LaurentPolynomial._raw(big._lo + small._lo, out, big._den * small._den)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPolynomial":
        if e < 0:
            raise ValueError("negative powers are not polynomials")
        out = LaurentPolynomial.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def reflect(self) -> "LaurentPolynomial":
        """``z -> 1/z``; on the unit circle this is complex conjugation."""
        if self.is_zero():
            return self
        return LaurentPolynomial._raw(-self.hi, self._num[::-1].copy(), self._den)

    def shift(self, e: int) -> "LaurentPolynomial":
        """Multiply by ``z^e``."""
        if self.is_zero():
            return self
        return LaurentPolynomial._raw(self._lo + e, self._num, self._den)

    # -- floating point -----------------------------------------------

    def float_coeffs(self) -> np.ndarray:
        if self._num.dtype == object:
            return np.array([float(Fraction(int(x), self._den)) for x in self._num.tolist()])
        return self._num.astype(np.float64) / float(self._den)

    def eval_unit_circle(self, theta):
        """``sum c_alpha e^{i alpha theta}`` in double precision.

        ``theta`` may be a scalar or an array.  Each term carries a relative
        phase error of about ``eps * (2 + |alpha theta|)`` from forming
        ``alpha * theta`` in floating point, so the absolute error is at most
        ``sum|c| * eps * (3 + max|alpha| * |theta|)`` for pairwise summation
        of moderate length.
        """
        theta_arr = np.asarray(theta, dtype=np.float64)
        if self.is_zero():
            out = np.zeros(theta_arr.shape, dtype=np.complex128)
            return complex(out) if out.ndim == 0 else out
        alphas = np.arange(self._lo, self.hi + 1, dtype=np.float64)
        c = self.float_coeffs()
        keep = c != 0
        alphas, c = alphas[keep], c[keep]
        phases = np.exp(1j * np.multiply.outer(theta_arr, alphas))
        out = phases @ c
        return complex(out) if np.ndim(out) == 0 else out

    def __repr__(self) -> str:
        if self.is_zero():
            return "LaurentPolynomial(0)"
        terms = []
        for e, c in self.items():
            terms.append(f"{c}*z^{e}" if e else f"{c}")
        return "LaurentPolynomial(" + " + ".join(terms) + ")"


def from_exponents(exponents: Iterable[int]) -> LaurentPolynomial:
    return LaurentPolynomial.from_exponents(exponents)


def multiply(p: LaurentPolynomial, q: LaurentPolynomial) -> LaurentPolynomial:
    return p * q


def reflect(p: LaurentPolynomial) -> LaurentPolynomial:
    return p.reflect()


def coeff(p: LaurentPolynomial, alpha: int) -> Fraction:
    return p.coeff(alpha)


def eval_unit_circle(p: LaurentPolynomial, theta):
    return p.eval_unit_circle(theta)


def naive_multiply(p: LaurentPolynomial, q: LaurentPolynomial) -> dict[int, Fraction]:
    """Double-loop convolution over Fractions, kept as a reference for tests."""
    out: dict[int, Fraction] = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, Fraction(0)) + x * y
    return {e: c for e, c in out.items() if c != 0}
