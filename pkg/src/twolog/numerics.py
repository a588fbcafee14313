"""Certified real arithmetic: outward-rounded interval enclosures on MPFR.

Every quantity that enters an inequality check in this package is carried as
an :class:`IntervalReal`, a pair of MPFR endpoints rounded outward so that the
enclosure is guaranteed to contain the exact value.  Soundness rests on MPFR's
correct rounding in the ``RoundDown`` / ``RoundUp`` modes; nothing here ever
returns an approximate point value.

Domain violations (log of a nonpositive interval, division by an interval
containing zero, ...) raise :class:`DomainError` rather than producing a
silent NaN interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

__all__ = [
    "DomainError",
    "IndeterminateError",
    "Precision",
    "DEFAULT_PRECISION",
    "MAX_PRECISION_BITS",
    "IntervalReal",
    "enclose_constant",
    "pi_interval",
    "euler_e_interval",
    "log_interval",
    "exp_interval",
    "sqrt_interval",
    "pow_real",
    "atan2_interval",
    "abs_interval",
    "max_interval",
    "min_interval",
    "square_interval",
    "log_factorial",
    "sum_log_factorials",
    "epsilon_of_n",
    "floor_exact",
    "round_nearest_exact",
    "round_half_even",
]


class DomainError(ValueError):
    """An operation was applied outside its mathematical domain."""


class IndeterminateError(RuntimeError):
    """A certified decision could not be reached at the maximum precision."""


ExactLike = Union[int, Fraction, mpz, mpq]

MAX_PRECISION_BITS = 1024
_EXACT_FACTORIAL_MAX = 20000


@dataclass(frozen=True)
class Precision:
    """Working precision in bits; escalation doubles up to the package cap."""

    bits: int = 128

    def __post_init__(self) -> None:
        if self.bits < 64:
            raise ValueError(f"precision must be at least 64 bits, got {self.bits}")

    def double(self) -> "Precision":
        return Precision(min(self.bits * 2, MAX_PRECISION_BITS))

    def ladder(self) -> Iterator["Precision"]:
        """Yield this precision, then doublings, up to MAX_PRECISION_BITS."""
        p = self
        while True:
            yield p
            if p.bits >= MAX_PRECISION_BITS:
                return
            p = p.double()


DEFAULT_PRECISION = Precision(128)


def _down(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, round=gmpy2.RoundDown)


def _up(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp)


def _bits(prec: Union[Precision, int, None], fallback: int = 0) -> int:
    if prec is None:
        return fallback if fallback else DEFAULT_PRECISION.bits
    if isinstance(prec, Precision):
        return prec.bits
    return int(prec)


def _to_mpq(x: ExactLike) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


@dataclass(frozen=True)
class IntervalReal:
    """Closed interval [lo, hi] of extended reals with outward rounding.

    Invariant: lo <= hi and neither endpoint is NaN.  Every operation returns
    an interval containing the exact image of all point inputs.
    """

    lo: mpfr
    hi: mpfr

    def __post_init__(self) -> None:
        if gmpy2.is_nan(self.lo) or gmpy2.is_nan(self.hi):
            raise DomainError("NaN endpoint in interval")
        if self.lo > self.hi:
            raise DomainError(f"inverted interval [{self.lo}, {self.hi}]")

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_exact(x: ExactLike, prec: Union[Precision, int, None] = None) -> "IntervalReal":
        """Tightest enclosure of an exact integer or rational."""
        bits = _bits(prec)
        q = _to_mpq(x)
        with _down(bits):
            lo = mpfr(q)
        with _up(bits):
            hi = mpfr(q)
        return IntervalReal(lo, hi)

    @staticmethod
    def from_decimal(text: str, prec: Union[Precision, int, None] = None) -> "IntervalReal":
        """Enclosure of an exact decimal literal such as '2.7704'."""
        return IntervalReal.from_exact(Fraction(text), prec)

    @staticmethod
    def point(x: mpfr) -> "IntervalReal":
        return IntervalReal(x, x)

    @staticmethod
    def hull(*items: "IntervalReal") -> "IntervalReal":
        return IntervalReal(min(i.lo for i in items), max(i.hi for i in items))

    # -- inspection --------------------------------------------------------

    @property
    def prec(self) -> int:
        return max(self.lo.precision, self.hi.precision)

    def width(self) -> mpfr:
        with _up(max(self.prec, 64)):
            return self.hi - self.lo

    def mid(self) -> mpfr:
        # diagnostic midpoint only; never used in a certified comparison
        with gmpy2.context(precision=self.prec):
            return (self.lo + self.hi) / 2

    def is_finite(self) -> bool:
        return gmpy2.is_finite(self.lo) and gmpy2.is_finite(self.hi)

    def contains(self, x: ExactLike) -> bool:
        q = _to_mpq(x)
        return self.lo <= q <= self.hi

    def contains_interval(self, other: "IntervalReal") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "IntervalReal") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    # -- certified comparisons (True only when it holds for every point) ---

    def strictly_above(self, other: Union["IntervalReal", ExactLike]) -> bool:
        o = _as_interval(other, self.prec)
        return self.lo > o.hi

    def strictly_below(self, other: Union["IntervalReal", ExactLike]) -> bool:
        o = _as_interval(other, self.prec)
        return self.hi < o.lo

    def at_least(self, other: Union["IntervalReal", ExactLike]) -> bool:
        o = _as_interval(other, self.prec)
        return self.lo >= o.hi

    def at_most(self, other: Union["IntervalReal", ExactLike]) -> bool:
        o = _as_interval(other, self.prec)
        return self.hi <= o.lo

    # -- arithmetic ---------------------------------------------------------
    #
    # Every mpfr operation, including unary minus, rounds to the *ambient*
    # gmpy2 context; all arithmetic here must therefore run inside an
    # explicit context at operand precision or the result silently drops to
    # the global default precision with round-to-nearest (inward, unsound).

    def __neg__(self) -> "IntervalReal":
        with gmpy2.context(precision=self.prec):
            # sign flip is exactly representable at the same precision
            return IntervalReal(-self.hi, -self.lo)

    def __add__(self, other: Union["IntervalReal", ExactLike]) -> "IntervalReal":
        o = _as_interval(other, self.prec)
        bits = max(self.prec, o.prec)
        with _down(bits):
            lo = self.lo + o.lo
        with _up(bits):
            hi = self.hi + o.hi
        return IntervalReal(lo, hi)

    __radd__ = __add__

    def __sub__(self, other: Union["IntervalReal", ExactLike]) -> "IntervalReal":
        o = _as_interval(other, self.prec)
        bits = max(self.prec, o.prec)
        with _down(bits):
            lo = self.lo - o.hi
        with _up(bits):
            hi = self.hi - o.lo
        return IntervalReal(lo, hi)

    def __rsub__(self, other: ExactLike) -> "IntervalReal":
        return _as_interval(other, self.prec) - self

    def __mul__(self, other: Union["IntervalReal", ExactLike]) -> "IntervalReal":
        o = _as_interval(other, self.prec)
        bits = max(self.prec, o.prec)
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        with _down(bits):
            lo = min(a * b for a, b in pairs)
        with _up(bits):
            hi = max(a * b for a, b in pairs)
        return IntervalReal(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other: Union["IntervalReal", ExactLike]) -> "IntervalReal":
        o = _as_interval(other, self.prec)
        if o.lo <= 0 <= o.hi:
            raise DomainError("division by an interval containing zero")
        bits = max(self.prec, o.prec)
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        with _down(bits):
            lo = min(a / b for a, b in pairs)
        with _up(bits):
            hi = max(a / b for a, b in pairs)
        return IntervalReal(lo, hi)

    def __rtruediv__(self, other: ExactLike) -> "IntervalReal":
        return _as_interval(other, self.prec) / self

    def __repr__(self) -> str:
        return f"IntervalReal({self.lo!r}, {self.hi!r})"


def _as_interval(x: Union[IntervalReal, ExactLike], bits: int) -> IntervalReal:
    if isinstance(x, IntervalReal):
        return x
    return IntervalReal.from_exact(x, bits)


# -- elementary functions ---------------------------------------------------


def _monotone_increasing(fn: Callable, x: IntervalReal, bits: int) -> IntervalReal:
    with _down(bits):
        lo = fn(x.lo)
    with _up(bits):
        hi = fn(x.hi)
    return IntervalReal(lo, hi)


def log_interval(x: IntervalReal, prec: Union[Precision, int, None] = None) -> IntervalReal:
    if x.lo <= 0:
        raise DomainError(f"log of interval with nonpositive lower end {x.lo}")
    return _monotone_increasing(gmpy2.log, x, _bits(prec, x.prec))


def exp_interval(x: IntervalReal, prec: Union[Precision, int, None] = None) -> IntervalReal:
    return _monotone_increasing(gmpy2.exp, x, _bits(prec, x.prec))


def sqrt_interval(x: IntervalReal, prec: Union[Precision, int, None] = None) -> IntervalReal:
    if x.lo < 0:
        raise DomainError(f"sqrt of interval with negative lower end {x.lo}")
    return _monotone_increasing(gmpy2.sqrt, x, _bits(prec, x.prec))


def pow_real(x: IntervalReal, y: Union[IntervalReal, ExactLike],
             prec: Union[Precision, int, None] = None) -> IntervalReal:
    """x**y for certifiably positive x, via exp(y * log x)."""
    bits = _bits(prec, x.prec)
    return exp_interval(_as_interval(y, bits) * log_interval(x, bits), bits)


def square_interval(x: IntervalReal, prec: Union[Precision, int, None] = None) -> IntervalReal:
    """x**2, tight when the interval straddles zero."""
    bits = _bits(prec, x.prec)
    if x.lo <= 0 <= x.hi:
        with _up(bits):
            hi = max(x.lo * x.lo, x.hi * x.hi)
        return IntervalReal(mpfr(0), hi)
    return x * x


def abs_interval(x: IntervalReal) -> IntervalReal:
    if x.lo >= 0:
        return x
    if x.hi <= 0:
        return -x
    neg = -x
    return IntervalReal(mpfr(0), max(neg.hi, x.hi))


def max_interval(*items: IntervalReal) -> IntervalReal:
    return IntervalReal(max(i.lo for i in items), max(i.hi for i in items))


def min_interval(*items: IntervalReal) -> IntervalReal:
    return IntervalReal(min(i.lo for i in items), min(i.hi for i in items))


def _atan(x: IntervalReal, bits: int) -> IntervalReal:
    return _monotone_increasing(gmpy2.atan, x, bits)


def atan2_interval(y: IntervalReal, x: IntervalReal,
                   prec: Union[Precision, int, None] = None) -> IntervalReal:
    """Enclosure of atan2 over the rectangle (x, y), principal value.

    Rejects rectangles that meet the branch cut (nonpositive real axis with y
    straddling zero) or contain the origin.
    """
    bits = _bits(prec, max(y.prec, x.prec))
    if x.lo > 0:
        return _atan(y / x, bits)
    half_pi = pi_interval(bits) / 2
    if y.lo > 0:
        return half_pi - _atan(x / y, bits)
    if y.hi < 0:
        return -half_pi - _atan(x / y, bits)
    raise DomainError("atan2 rectangle meets the branch cut or contains the origin")


# -- constants ---------------------------------------------------------------


def pi_interval(prec: Union[Precision, int, None] = None) -> IntervalReal:
    bits = _bits(prec)
    with _down(bits):
        lo = gmpy2.const_pi()
    with _up(bits):
        hi = gmpy2.const_pi()
    return IntervalReal(lo, hi)


def euler_e_interval(prec: Union[Precision, int, None] = None) -> IntervalReal:
    bits = _bits(prec)
    with _down(bits):
        lo = gmpy2.exp(mpfr(1))
    with _up(bits):
        hi = gmpy2.exp(mpfr(1))
    return IntervalReal(lo, hi)


_CONSTANTS = {"pi": pi_interval, "euler_e": euler_e_interval}


def enclose_constant(name: str, prec: Union[Precision, int, None] = None) -> IntervalReal:
    try:
        builder = _CONSTANTS[name]
    except KeyError:
        raise DomainError(f"unknown constant {name!r}; known: {sorted(_CONSTANTS)}") from None
    return builder(prec)


# -- log-factorial machinery --------------------------------------------------


def log_factorial(n: int, prec: Union[Precision, int, None] = None) -> IntervalReal:
    """Enclosure of log(n!).

    For n up to 20000 the factorial is computed exactly and converted with
    directed rounding; beyond that a two-sided Stirling bound is used
    (remainder between 1/(12n+1) and 1/(12n), Robbins' form).
    """
    if n < 1:
        raise DomainError(f"log_factorial needs n >= 1, got {n}")
    bits = _bits(prec)
    if n <= _EXACT_FACTORIAL_MAX:
        f = gmpy2.fac(n)
        with _down(bits):
            lo = gmpy2.log(mpfr(f))
        with _up(bits):
            hi = gmpy2.log(mpfr(f))
        return IntervalReal(lo, hi)
    n_iv = IntervalReal.from_exact(n, bits)
    log_n = log_interval(n_iv, bits)
    two_pi = pi_interval(bits) * 2
    base = (n_iv + Fraction(1, 2)) * log_n - n_iv + log_interval(two_pi, bits) / 2
    remainder = IntervalReal.hull(
        IntervalReal.from_exact(Fraction(1, 12 * n + 1), bits),
        IntervalReal.from_exact(Fraction(1, 12 * n), bits),
    )
    return base + remainder


def sum_log_factorials(count: int, prec: Union[Precision, int, None] = None) -> IntervalReal:
    """Enclosure of sum_{k=1}^{count} log(k!) via sum_{j} (count+1-j) log j."""
    if count < 1:
        raise DomainError(f"sum_log_factorials needs count >= 1, got {count}")
    bits = _bits(prec)
    with _down(bits):
        lo = mpfr(0)
        for j in range(2, count + 1):
            lo += (count + 1 - j) * gmpy2.log(j)
    with _up(bits):
        hi = mpfr(0)
        for j in range(2, count + 1):
            hi += (count + 1 - j) * gmpy2.log(j)
    return IntervalReal(lo, hi)


def epsilon_of_n(n: int, prec: Union[Precision, int, None] = None) -> IntervalReal:
    """Enclosure of the error functional 2*log(n! n^(1-n) (e^n + (e-1)^n))/n.

    Evaluated in log-domain: the sum e^n + (e-1)^n is n + log1p(((e-1)/e)^n),
    which stays representable for n ~ 1e4 and beyond.
    """
    if n < 2:
        raise DomainError(f"epsilon_of_n needs n >= 2, got {n}")
    bits = _bits(prec)
    n_iv = IntervalReal.from_exact(n, bits)
    log_n = log_interval(n_iv, bits)
    e = euler_e_interval(bits)
    # ratio (e-1)/e is in (0, 1) so ratio**n never overflows
    ratio_pow = pow_real((e - 1) / e, n, bits)
    with _down(bits):
        lp_lo = gmpy2.log1p(ratio_pow.lo)
    with _up(bits):
        lp_hi = gmpy2.log1p(ratio_pow.hi)
    tail = IntervalReal(lp_lo, lp_hi)
    total = log_factorial(n, bits) - (n - 1) * log_n + n_iv + tail
    return total * 2 / n


# -- certified integer extraction --------------------------------------------


def floor_exact(x: IntervalReal) -> "int | None":
    """floor(x) when it is the same integer across the interval, else None."""
    with gmpy2.context(precision=max(x.prec, 64)):
        lo_f = gmpy2.floor(x.lo)
        hi_f = gmpy2.floor(x.hi)
    if lo_f == hi_f and gmpy2.is_finite(lo_f):
        return int(lo_f)
    return None


def round_nearest_exact(x: IntervalReal) -> "int | None":
    """Nearest integer to x when unambiguous across the interval, else None.

    An interval pinned exactly on a half-integer cannot be disambiguated
    numerically; callers that know the value exactly should round it
    rationally (half-to-even) instead.
    """
    shifted = x + Fraction(1, 2)
    with gmpy2.context(precision=max(shifted.prec, 64)):
        lo_f = gmpy2.floor(shifted.lo)
        hi_f = gmpy2.floor(shifted.hi)
    if lo_f == hi_f and gmpy2.is_finite(lo_f):
        # reject when the interval may sit exactly on the tie point
        if shifted.lo == lo_f and shifted.lo == shifted.hi:
            return None
        return int(lo_f)
    return None


def round_half_even(x: Fraction) -> int:
    """Exact nearest-integer rounding of a rational, ties to even."""
    twice = 2 * x
    if twice.denominator == 1 and twice.numerator % 2 != 0:
        below = (twice.numerator - 1) // 2
        return below if below % 2 == 0 else below + 1
    return math.floor(x + Fraction(1, 2))
