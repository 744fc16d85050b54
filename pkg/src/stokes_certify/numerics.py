"""Exact rationals and rigorous rational-endpoint interval enclosures.

Every transcendental value (pi, exp, log, sin, Gamma, fractional powers) is
produced as a :class:`RatInterval` whose endpoints are exact fractions.  Each
series is truncated with an explicit remainder bound, so the true value is
always contained in the returned interval.  Endpoints are rounded outward to
dyadic grids to keep their bit length under control.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2

from .errors import DomainError

Rational = Fraction
RationalLike = Union[Fraction, int, str]

__all__ = [
    "Rational",
    "RatInterval",
    "as_rational",
    "format_rational",
    "parse_rational",
    "interval_arith",
    "pi_enclosure",
    "exp_enclosure",
    "log_enclosure",
    "sin_enclosure",
    "gamma_enclosure",
    "rational_power_enclosure",
    "bernoulli_numbers",
    "to_decimal",
]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ``x`` to an exact :class:`Fraction` (strings may be "p/q" or decimal)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals; pass a string")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    """Render ``x`` as "numerator/denominator" (always with a slash)."""
    x = as_rational(x)
    # gmpy2 formatting is not subject to the int/str digit limit
    return f"{gmpy2.mpz(x.numerator)}/{gmpy2.mpz(x.denominator)}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`; also accepts integers and decimals."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(gmpy2.mpz(num.strip())), int(gmpy2.mpz(den.strip())))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational number: {text!r}") from exc


def to_decimal(x: Fraction, digits: int, rounding: str = "nearest") -> str:
    """Decimal rendering of ``x`` with ``digits`` digits after the point.

    ``rounding`` is one of "nearest", "floor", "ceil"; interval endpoints use
    floor/ceil so the printed interval still contains the exact one.
    """
    x = as_rational(x)
    scaled = x * 10**digits
    if rounding == "floor":
        q = math.floor(scaled)
    elif rounding == "ceil":
        q = math.ceil(scaled)
    else:
        q = round(scaled)
    sign = "-" if q < 0 else ""
    q = abs(q)
    if digits == 0:
        return f"{sign}{q}"
    whole, frac = divmod(q, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _floor_log2(q: Fraction) -> int:
    """floor(log2(q)) for q > 0."""
    e = q.numerator.bit_length() - q.denominator.bit_length()
    if (q.numerator << max(0, -e)) < (q.denominator << max(0, e)):
        e -= 1
    return e


def _floor_to_grid(q: Fraction, shift: int) -> Fraction:
    """Largest multiple of 2**-shift that is <= q."""
    if shift >= 0:
        return Fraction((q.numerator << shift) // q.denominator, 1 << shift)
    return Fraction((q.numerator // (q.denominator << -shift)) << -shift)


def _ceil_to_grid(q: Fraction, shift: int) -> Fraction:
    return -_floor_to_grid(-q, shift)


@dataclass(frozen=True)
class RatInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo > hi:
            raise DomainError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: RationalLike) -> "RatInterval":
        x = as_rational(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: RationalLike) -> bool:
        x = as_rational(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "RatInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "RatInterval") -> "RatInterval":
        if not self.overlaps(other):
            raise DomainError(f"disjoint intervals {self} and {other}")
        return RatInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def round_out(self, bits: int) -> "RatInterval":
        """Widen outward to a dyadic grid of ``bits`` bits relative to the magnitude."""
        m = max(abs(self.lo), abs(self.hi))
        if m == 0:
            return self
        shift = bits - _floor_log2(m)
        return RatInterval(_floor_to_grid(self.lo, shift), _ceil_to_grid(self.hi, shift))

    def round_abs(self, bits: int) -> "RatInterval":
        """Widen outward to the absolute grid 2**-bits."""
        return RatInterval(_floor_to_grid(self.lo, bits), _ceil_to_grid(self.hi, bits))

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "RatInterval":
        if isinstance(other, RatInterval):
            return other
        return RatInterval.point(other)

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __add__(self, other) -> "RatInterval":
        other = self._coerce(other)
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other) -> "RatInterval":
        other = self._coerce(other)
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "RatInterval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatInterval":
        other = self._coerce(other)
        if self.lo >= 0 and other.lo >= 0:
            return RatInterval(self.lo * other.lo, self.hi * other.hi)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RatInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RatInterval":
        if self.lo <= 0 <= self.hi:
            raise DomainError(f"division by interval containing zero: {self}")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "RatInterval":
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "RatInterval":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, k: int) -> "RatInterval":
        if not isinstance(k, int):
            raise TypeError("interval powers take integer exponents; see rational_power_enclosure")
        if k < 0:
            return self.reciprocal() ** (-k)
        if k == 0:
            return RatInterval.point(1)
        a, b = self.lo**k, self.hi**k
        if k % 2 == 0 and self.lo < 0 < self.hi:
            return RatInterval(Fraction(0), max(a, b))
        return RatInterval(min(a, b), max(a, b))

    def __str__(self) -> str:
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def interval_arith(a: RatInterval, b: RatInterval, op: str) -> RatInterval:
    """Apply ``op`` (add, sub, mul, div) to two intervals."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise DomainError(f"unknown interval operation {op!r}") from None
    return fn(a, b)


# elementary series -------------------------------------------------------


def _atan_inv(x: int, bits: int) -> RatInterval:
    """arctan(1/x) for an integer x >= 2, width <= 2**-bits."""
    x2 = x * x
    term = Fraction(1, x)
    total = term
    k = 0
    eps = Fraction(1, 1 << bits)
    while True:
        k += 1
        term = term / x2
        nxt = term / (2 * k + 1)
        if nxt <= eps:
            # alternating, decreasing: the limit lies between consecutive partial sums
            other = total - nxt if k % 2 else total + nxt
            return RatInterval(min(total, other), max(total, other))
        total = total - nxt if k % 2 else total + nxt


@lru_cache(maxsize=64)
def pi_enclosure(precision: int = 128) -> RatInterval:
    """Enclosure of pi of width <= 2**-precision (Machin's formula)."""
    if precision < 8:
        raise DomainError("precision must be at least 8 bits")
    wp = precision + 8
    pi = 16 * _atan_inv(5, wp) - 4 * _atan_inv(239, wp)
    return pi.round_abs(precision + 4)


def _exp_point(x: Fraction, bits: int) -> RatInterval:
    """exp(x) with relative width about 2**-bits."""
    if x == 0:
        return RatInterval.point(1)
    s = max(0, int(abs(x)).bit_length() + 1)
    r = x / (1 << s)  # |r| <= 1/2
    wp = bits + s + 8
    eps = Fraction(1, 1 << (wp + 2))
    term = Fraction(1)
    total = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * r / k
        total += term
        # tail after term k is bounded by 2|r|^(k+1)/(k+1)! since |r| <= 1/2
        tail = 2 * abs(term * r) / (k + 1)
        if tail <= eps:
            break
    e = RatInterval(total - tail, total + tail).round_out(wp)
    for _ in range(s):
        e = (e * e).round_out(wp)
    return e


def exp_enclosure(x: Union[RatInterval, RationalLike], bits: int = 128) -> RatInterval:
    """Enclosure of exp over a rational point or interval."""
    if not isinstance(x, RatInterval):
        return _exp_point(as_rational(x), bits)
    if x.is_point():
        return _exp_point(x.lo, bits)
    return RatInterval(_exp_point(x.lo, bits).lo, _exp_point(x.hi, bits).hi)


def _atanh_series(y: Fraction, bits: int) -> RatInterval:
    """atanh(y) for 0 <= y <= 1/3, width <= 2**-bits."""
    if y == 0:
        return RatInterval.point(0)
    y2 = y * y
    power = y
    total = y
    j = 0
    eps = Fraction(1, 1 << bits)
    while True:
        j += 1
        power *= y2
        # all terms positive; tail <= y^(2j+1) / ((2j+1)(1-y^2))
        tail = power / ((2 * j + 1) * (1 - y2))
        if tail <= eps:
            return RatInterval(total, total + tail)
        total += power / (2 * j + 1)


@lru_cache(maxsize=64)
def _log2(bits: int) -> RatInterval:
    return 2 * _atanh_series(Fraction(1, 3), bits + 1)


def _log_point(x: Fraction, bits: int) -> RatInterval:
    """log(x) for x > 0 with absolute width about 2**-bits."""
    if x <= 0:
        raise DomainError(f"log of nonpositive number {x}")
    if x == 1:
        return RatInterval.point(0)
    k = _floor_log2(x)
    m = x / Fraction(2) ** k  # 1 <= m < 2
    y = (m - 1) / (m + 1)
    wp = bits + 4
    result = 2 * _atanh_series(y, wp + 1)
    if k:
        result = result + k * _log2(wp + abs(k).bit_length() + 1)
    return result.round_abs(wp)


def log_enclosure(x: Union[RatInterval, RationalLike], bits: int = 128) -> RatInterval:
    """Enclosure of the natural log over a positive point or interval."""
    if not isinstance(x, RatInterval):
        return _log_point(as_rational(x), bits)
    if x.lo <= 0:
        raise DomainError(f"log of interval with nonpositive part {x}")
    if x.is_point():
        return _log_point(x.lo, bits)
    return RatInterval(_log_point(x.lo, bits).lo, _log_point(x.hi, bits).hi)


def _sin_point(x: Fraction, bits: int) -> RatInterval:
    # |x| <= 3/2: Taylor terms decrease from the first one, so partial sums bracket
    eps = Fraction(1, 1 << bits)
    x2 = x * x
    term = x
    total = x
    k = 0
    while True:
        k += 1
        term = -term * x2 / ((2 * k) * (2 * k + 1))
        if abs(term) <= eps:
            other = total + term
            return RatInterval(min(total, other), max(total, other))
        total += term


def sin_enclosure(x: Union[RatInterval, RationalLike], bits: int = 128) -> RatInterval:
    """Enclosure of sin over a point or interval inside [0, 3/2] (where sin is increasing)."""
    if not isinstance(x, RatInterval):
        x = RatInterval.point(x)
    if x.lo < 0 or x.hi > Fraction(3, 2):
        raise DomainError("sin_enclosure supports arguments in [0, 3/2]")
    return RatInterval(_sin_point(x.lo, bits).lo, _sin_point(x.hi, bits).hi)


# Gamma --------------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """B_0..B_n (with B_1 = -1/2) by the classical binomial recurrence."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum((math.comb(m + 1, k) * b[k] for k in range(m)), Fraction(0))
        b.append(-s / (m + 1))
    return tuple(b)


def _stirling_tail(z: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Sum of the Stirling correction terms and a bound on the remainder.

    For real z > 0 the error after K terms is bounded in modulus by the first
    omitted term |B_{2K+2}| / ((2K+2)(2K+1) z^(2K+1)).
    """
    eps = Fraction(1, 1 << bits)
    total = Fraction(0)
    k = 1
    prev = None
    while True:
        bern = bernoulli_numbers(2 * k + 2)
        term = bern[2 * k] / (2 * k * (2 * k - 1) * z ** (2 * k - 1))
        nxt = abs(bern[2 * k + 2]) / ((2 * k + 2) * (2 * k + 1) * z ** (2 * k + 1))
        total += term
        if nxt <= eps:
            return total, nxt
        if prev is not None and nxt >= prev:
            raise DomainError("Stirling series stopped converging; increase the argument shift")
        prev = nxt
        k += 1


def _gamma_once(x: Fraction, precision: int, wp: int) -> RatInterval:
    m = -(-precision // 4) + 10
    z = x + m
    zbits = int(z).bit_length()
    lnz = _log_point(z, wp + zbits + 8)
    two_pi = 2 * pi_enclosure(wp + 8)
    ln2pi = log_enclosure(two_pi, wp + 8)
    corr, rem = _stirling_tail(z, wp + 4)
    lg = (z - Fraction(1, 2)) * lnz - z + ln2pi / 2 + corr + RatInterval(-rem, rem)
    lg = lg.round_abs(wp + 4)
    gz = exp_enclosure(lg, wp + 8)
    prod = math.prod((x + j for j in range(m)), start=Fraction(1))
    return (gz / prod).round_out(wp)


@lru_cache(maxsize=256)
def gamma_enclosure(x: RationalLike, precision: int = 128) -> RatInterval:
    """Enclosure of Gamma(x), x > 0 rational, width <= 2**-precision * max(1, Gamma(x)).

    The argument is shifted to z = x + m with m = ceil(precision/4) + 10, the
    Stirling series for log Gamma(z) is summed with its rigorous remainder,
    exponentiated, and divided by the exact product x(x+1)...(x+m-1).
    """
    x = as_rational(x)
    if x <= 0:
        raise DomainError(f"gamma_enclosure requires x > 0, got {x}")
    if precision < 8:
        raise DomainError("precision must be at least 8 bits")
    extra = 16
    while True:
        g = _gamma_once(x, precision, precision + extra)
        if g.width * (1 << precision) <= max(Fraction(1), g.lo):
            return g
        extra *= 2


def _exact_root(x: Fraction, q: int) -> Fraction | None:
    if x < 0:
        return None
    rn, ok_n = gmpy2.iroot(gmpy2.mpz(x.numerator), q)
    rd, ok_d = gmpy2.iroot(gmpy2.mpz(x.denominator), q)
    if ok_n and ok_d:
        return Fraction(int(rn), int(rd))
    return None


def rational_power_enclosure(
    base: Union[RatInterval, RationalLike], exponent: RationalLike, precision: int = 128
) -> RatInterval:
    """Enclosure of base**exponent for a strictly positive base.

    Integer powers are exact.  Otherwise base**e = base**floor(e) * exp(f log base)
    with f = e - floor(e); exact rational roots of point bases are detected first.
    """
    if not isinstance(base, RatInterval):
        base = RatInterval.point(base)
    e = as_rational(exponent)
    if base.lo <= 0:
        raise DomainError(f"rational power of nonpositive base {base}")
    if precision < 8:
        raise DomainError("precision must be at least 8 bits")
    if e.denominator == 1:
        return base ** int(e)
    if base.is_point():
        root = _exact_root(base.lo, e.denominator)
        if root is not None:
            return RatInterval.point(root**e.numerator)
    whole = math.floor(e)
    frac = e - whole
    int_part = base**whole
    extra = 16
    while True:
        wp = precision + extra
        logs = log_enclosure(base, wp + 8)
        result = (int_part * exp_enclosure(logs * frac, wp + 4)).round_out(wp)
        if not base.is_point() or result.width * (1 << precision) <= max(Fraction(1), result.lo):
            return result
        extra *= 2
