import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stokes_certify.errors import DomainError
from stokes_certify.recurrence import (
    CoefficientTable,
    compute_DN,
    compute_E,
    dn_closed_form,
    extend_table,
    u_coefficient,
)

# b_1..b_8 as printed in the source table
B_TABLE = [
    Fraction(1),
    Fraction(169, 160),
    Fraction(743, 680),
    Fraction(426573, 382976),
    Fraction(71300607, 63289600),
    Fraction(1406520669011, 1239463526400),
    Fraction(135335882622883, 118668949344000),
    Fraction(6575066918153233021, 5744440195153920000),
]


def reference_c(n_max: int) -> list[Fraction]:
    """Direct O(n^2) evaluation of the c-recurrence with plain Fractions."""
    c = [Fraction(1)]
    s = [Fraction(1)]
    for n in range(1, n_max + 1):
        w = lambda m: Fraction((7 * m - 6) * (7 * m - 4))
        tail = sum((w(n - k) / 2 * c[n - k - 1] * s[k] for k in range(1, n)), Fraction(0))
        tp = sum((c[k] * c[n - k] for k in range(1, n)), Fraction(0))
        c.append(w(n) / 4 * c[n - 1] + tail / 2 - tp / 2)
        s.append(sum((c[i] * c[n - i] for i in range(n + 1)), Fraction(0)))
    return c


def test_seed_values():
    t = CoefficientTable(0)
    assert t.c == [1] and t.d == [1] and t.b == [1]
    assert t.n_max == 0


def test_first_terms():
    t = CoefficientTable(2)
    assert (t.c[1], t.d[1], t.b[1]) == (Fraction(3, 4), Fraction(3, 4), 1)
    assert t.c[2] == Fraction(507, 32)
    assert t.d[2] == 15
    assert t.b[2] == Fraction(169, 160)


def test_b_table():
    assert CoefficientTable(8).b[1:9] == B_TABLE


def test_matches_plain_fraction_recurrence():
    assert CoefficientTable(60).c == reference_c(60)


def test_append_only(table_1000):
    small = CoefficientTable(40)
    snapshot = list(small.c), list(small.b), list(small.qplus)
    small.extend(90)
    assert (small.c[:41], small.b[:41], small.qplus[:41]) == snapshot
    assert small.c == table_1000.c[:91]


def test_extend_table_rejects_shrinking():
    t = CoefficientTable(10)
    with pytest.raises(DomainError):
        extend_table(t, 5)
    assert extend_table(t, 12).n_max == 12


def test_invariants(table_1000):
    t = table_1000
    for n in range(t.n_max + 1):
        assert t.c[n] > 0 and t.d[n] > 0 and t.b[n] > 0
        assert t.b[n] * t.d[n] == t.c[n]
    assert t.check_recbn() is None


def test_recbn_self_check_detects_tampering():
    t = CoefficientTable(20)
    t.qplus[13] += Fraction(1, 10**30)
    assert t.check_recbn() == 13


def test_dn_closed_form(table_1000):
    assert dn_closed_form(0) == 1
    assert dn_closed_form(1) == Fraction(3, 4)
    assert dn_closed_form(2) == 15
    for n in (3, 17, 250):
        assert dn_closed_form(n) == table_1000.d[n]


def test_tprime_and_t_positive(table_1000):
    t = table_1000
    assert t.tprime[0] == t.tprime[1] == 0
    for k in range(2, t.n_max + 1):
        assert t.tprime[k] > 0
        assert 2 * t.d[k] * t.b[k] + t.tprime[k] > 0


def test_compute_DN(table_1000):
    t = table_1000
    assert compute_DN(t, 2) == Fraction(3, 80)
    assert compute_DN(t, 3) == 2 * t.d[1] * t.d[2] / t.d[3]
    with pytest.raises(DomainError):
        compute_DN(t, 1)
    with pytest.raises(DomainError):
        compute_DN(t, 10**6)


def test_DN_bound_chain(table_1000):
    t = table_1000
    assert compute_DN(t, 2) <= compute_E(2) / 4
    # E decreasing on [3, n_max] reduces the (N0, N) family to N0 = N
    assert all(compute_E(N + 1) < compute_E(N) for N in range(3, t.n_max))
    for N in range(3, t.n_max + 1):
        assert compute_DN(t, N) * N * N <= compute_E(N)


def test_compute_E():
    assert compute_E(5) == Fraction(15175, 69223)
    assert compute_E(5) < Fraction(6, 25)
    assert compute_E(2) == Fraction(6, 49) * 4 / (Fraction(8, 7) * Fraction(10, 7)) + Fraction(240, 2401) * 4 / (
        Fraction(10, 7) * Fraction(3, 7) * Fraction(1, 7)
    )
    # the second term decays like 1/N, so E(N) decreases to 6/49
    limit = Fraction(6, 49)
    assert compute_E(10**3) > compute_E(10**6) > limit
    assert compute_E(10**6) - limit < Fraction(1, 10**5)


@pytest.mark.parametrize("N", [Fraction(6, 7), Fraction(4, 7), Fraction(11, 7), Fraction(13, 7), 1, Fraction(3, 2)])
def test_compute_E_domain(N):
    with pytest.raises(DomainError):
        compute_E(N)


@settings(max_examples=50)
@given(st.fractions(min_value=Fraction(27, 14), max_value=10**4, max_denominator=100))
def test_compute_E_positive(N):
    assert compute_E(N) > 0


def test_u_coefficient(table_1000):
    assert u_coefficient(table_1000, 1) == Fraction(12, 49)
    assert u_coefficient(table_1000, 2) == Fraction(4056, 2401)
    assert all(u_coefficient(table_1000, n) > 0 for n in range(1, 1001))
    with pytest.raises(DomainError):
        u_coefficient(table_1000, 0)


def test_c_denominators_are_powers_of_two(table_1000):
    for n in range(table_1000.n_max + 1):
        den = table_1000.c[n].denominator
        assert den & (den - 1) == 0


def test_bit_growth(table_1000):
    for n in range(1, table_1000.n_max + 1):
        bits = table_1000.c[n].numerator.bit_length()
        assert bits < 2 * (2 * n + 1) * math.log2(2 * n + 1)
