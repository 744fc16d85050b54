from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stokes_certify.errors import DomainError
from stokes_certify.numerics import (
    RatInterval,
    as_rational,
    bernoulli_numbers,
    exp_enclosure,
    format_rational,
    gamma_enclosure,
    interval_arith,
    log_enclosure,
    parse_rational,
    pi_enclosure,
    rational_power_enclosure,
    sin_enclosure,
    to_decimal,
)

mpmath.mp.prec = 400

fractions_ = st.fractions(min_value=-50, max_value=50, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 1000), max_value=40, max_denominator=10**4)


def mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def holds(iv: RatInterval, value) -> bool:
    # slack covers the rounding of the 400-bit reference itself (inputs like 1/1000 are not dyadic)
    slack = abs(value) * mpmath.mpf(2) ** -350
    return mpf(iv.lo) - slack <= value <= mpf(iv.hi) + slack


@st.composite
def interval_with_point(draw):
    a, b = draw(fractions_), draw(fractions_)
    lo, hi = min(a, b), max(a, b)
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=1000))
    return RatInterval(lo, hi), lo + t * (hi - lo)


# rationals


@given(fractions_)
def test_format_parse_roundtrip(q):
    text = format_rational(q)
    assert "/" in text
    assert parse_rational(text) == q


def test_format_huge_rational():
    q = Fraction(7**20000, 3**9000)
    assert parse_rational(format_rational(q)) == q


@pytest.mark.parametrize("text,value", [("3/4", Fraction(3, 4)), ("-6/8", Fraction(-3, 4)), ("1.05", Fraction(21, 20)), ("7", Fraction(7))])
def test_parse_accepts(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1/2/3"])
def test_parse_rejects(text):
    with pytest.raises(DomainError):
        parse_rational(text)


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.1)


def test_to_decimal_rounding():
    assert to_decimal(Fraction(2, 3), 4) == "0.6667"
    assert to_decimal(Fraction(2, 3), 4, "floor") == "0.6666"
    assert to_decimal(Fraction(-2, 3), 4, "ceil") == "-0.6666"
    assert to_decimal(Fraction(-2, 3), 4, "floor") == "-0.6667"


def test_bernoulli():
    B = bernoulli_numbers(8)
    assert B[:9] == (1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42), 0, Fraction(-1, 30))


# interval arithmetic


def test_interval_examples():
    assert interval_arith(RatInterval(1, 2), RatInterval(3, 4), "mul") == RatInterval(3, 8)
    assert interval_arith(RatInterval(-1, 1), RatInterval(-1, 1), "mul") == RatInterval(-1, 1)
    assert interval_arith(RatInterval(1, 1), RatInterval(2, 2), "div") == RatInterval(Fraction(1, 2), Fraction(1, 2))


def test_interval_errors():
    with pytest.raises(DomainError):
        RatInterval(2, 1)
    with pytest.raises(DomainError):
        RatInterval(1, 2) / RatInterval(-1, 1)
    with pytest.raises(DomainError):
        interval_arith(RatInterval(1, 2), RatInterval(1, 2), "pow")
    with pytest.raises(DomainError):
        RatInterval(0, 1).intersect(RatInterval(2, 3))


@settings(max_examples=300)
@given(interval_with_point(), interval_with_point(), st.sampled_from(["add", "sub", "mul", "div"]))
def test_containment_soundness(xa, yb, op):
    (X, x), (Y, y) = xa, yb
    if op == "div" and Y.contains(0):
        return
    exact = {"add": x + y, "sub": x - y, "mul": x * y, "div": x / y if y else None}[op]
    assert interval_arith(X, Y, op).contains(exact)


@given(interval_with_point(), st.integers(min_value=0, max_value=6))
def test_integer_power_sound(xa, k):
    X, x = xa
    assert (X**k).contains(x**k)


@given(interval_with_point(), st.integers(min_value=1, max_value=80))
def test_round_out_contains(xa, bits):
    X, _ = xa
    assert X.round_out(bits).contains_interval(X)
    assert X.round_abs(bits).contains_interval(X)


# transcendental enclosures


def test_pi_precision_8():
    iv = pi_enclosure(8)
    assert iv.width <= Fraction(1, 256)
    assert iv.overlaps(RatInterval(Fraction(223, 71), Fraction(22, 7)))
    assert holds(iv, mpmath.pi)


@pytest.mark.parametrize("p", [16, 64, 128, 256])
def test_pi_width_contract(p):
    iv = pi_enclosure(p)
    assert iv.width <= Fraction(1, 2**p)
    assert holds(iv, mpmath.pi)


def test_pi_precision_domain():
    with pytest.raises(DomainError):
        pi_enclosure(4)


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-30, max_value=30, max_denominator=1000))
def test_exp_contains(x):
    assert holds(exp_enclosure(x, 96), mpmath.exp(mpf(x)))


@settings(max_examples=60, deadline=None)
@given(positive)
def test_log_contains(x):
    iv = log_enclosure(x, 96)
    assert holds(iv, mpmath.log(mpf(x)))
    assert iv.width <= Fraction(1, 2**90)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=0, max_value=Fraction(3, 2), max_denominator=1000))
def test_sin_contains(x):
    assert holds(sin_enclosure(x, 96), mpmath.sin(mpf(x)))


def test_sin_domain():
    with pytest.raises(DomainError):
        sin_enclosure(Fraction(2), 64)


@pytest.mark.parametrize("x", [Fraction(1, 7), Fraction(3, 7), Fraction(1, 2), Fraction(1), Fraction(5, 2), Fraction(1601, 2), Fraction(400001, 14)])
def test_gamma_contains_and_width(x):
    iv = gamma_enclosure(x, 128)
    assert holds(iv, mpmath.gamma(mpf(x)))
    assert iv.width * 2**128 <= max(1, iv.lo)


def test_gamma_one():
    assert gamma_enclosure(1, 64).contains(1)


def test_gamma_half_squared_is_pi():
    g = gamma_enclosure(Fraction(1, 2), 128)
    assert (g * g).overlaps(pi_enclosure(128))


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=Fraction(1, 50), max_value=30, max_denominator=200))
def test_gamma_recurrence(x):
    assert gamma_enclosure(x + 1, 96).overlaps(gamma_enclosure(x, 100) * x)


def test_gamma_reflection_one_seventh():
    pi = pi_enclosure(140)
    product = gamma_enclosure(Fraction(1, 7), 128) * gamma_enclosure(Fraction(6, 7), 128)
    assert product.overlaps(pi / sin_enclosure(pi / 7, 140))


def test_gamma_domain():
    for bad in (0, -1, Fraction(-1, 2)):
        with pytest.raises(DomainError):
            gamma_enclosure(bad, 64)


def test_rational_power_examples():
    iv = rational_power_enclosure(RatInterval.point(4), Fraction(1, 2), 64)
    assert iv.contains(2) and iv.width <= Fraction(1, 2**60)
    assert rational_power_enclosure(RatInterval.point(1), Fraction(3, 11), 64) == RatInterval.point(1)
    root = rational_power_enclosure(RatInterval.point(2), Fraction(13, 14), 128)
    assert (root**14).overlaps(RatInterval.point(2**13))
    assert holds(root, mpmath.mpf(2) ** (mpmath.mpf(13) / 14))


@settings(max_examples=30, deadline=None)
@given(positive, st.fractions(min_value=-3, max_value=3, max_denominator=30))
def test_rational_power_contains(base, e):
    assert holds(rational_power_enclosure(RatInterval.point(base), e, 96), mpf(base) ** mpf(e))


def test_rational_power_domain():
    with pytest.raises(DomainError):
        rational_power_enclosure(RatInterval(-1, 2), Fraction(1, 2), 64)
