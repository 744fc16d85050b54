from fractions import Fraction

import pytest

from stokes_certify.certifier import (
    A1,
    A2,
    B_PUBLISHED,
    ESTIMB0_UPPER,
    BoundCertificate,
    b_constants,
    certify_lemma2,
    check_Qn_bound,
    compute_alpha,
    compute_B,
    enclose_limit,
    lemma1_failure,
)
from stokes_certify.errors import CertificateError, DomainError, HypothesisError
from stokes_certify.numerics import RatInterval
from stokes_certify.recurrence import CoefficientTable

B_DEF = Fraction(10597725969, 9765625000)


def test_compute_B():
    assert compute_B(1) == Fraction(384, 625)
    assert compute_B(A2) == B_DEF
    assert abs(B_DEF - Fraction(10852, 10000)) < Fraction(1, 10**4)
    with pytest.raises(DomainError):
        compute_B(0)


def test_constants_are_exact():
    assert A2 == Fraction(331, 250)
    assert B_PUBLISHED == Fraction(10787, 10000)
    assert ESTIMB0_UPPER == 1 + Fraction(12, 37)
    assert compute_alpha(A2) == 2 * A2 + Fraction(3, 50) * A2**2


def test_b_constants_modes():
    assert set(b_constants(A2, "both")) == {"defB", "paper"}
    assert b_constants(A2, "paper") == {"paper": B_PUBLISHED}
    with pytest.raises(DomainError):
        b_constants(A2, "neither")


def test_qn_bound_default_constants(table_1000):
    assert check_Qn_bound(table_1000, A1, A2, (5, 1000))


def test_qn_bound_edge_checks(table_1000):
    from stokes_certify.recurrence import compute_DN

    for k in (2, 3, 4):
        assert compute_DN(table_1000, k) * k * k < Fraction(11, 50)


def test_hypothesis_error_small_a2(table_1000):
    with pytest.raises(HypothesisError) as info:
        check_Qn_bound(table_1000, A1, Fraction(105, 100), (5, 100))
    # b_2 = 169/160 is the first coefficient above 1.05
    assert info.value.index == 2


def test_lemma1_range_checked(table_1000):
    with pytest.raises(DomainError):
        lemma1_failure(table_1000, A1, A2, (4, 10))
    with pytest.raises(DomainError):
        lemma1_failure(table_1000, A1, A2, (5, 10**6))


def test_anchor_k8():
    b8 = CoefficientTable(8).b[8]
    for B in (B_PUBLISHED, B_DEF):
        assert 1 + B / 8 <= b8 <= A2 - B / 8


def test_certify_lemma2_1000(table_1000):
    cert = certify_lemma2(table_1000, 1000)
    assert cert.all_ok
    assert cert.b_results == {"defB": True, "paper": True}
    assert cert.b_const == B_DEF
    lim = cert.limit_enclosure
    assert A1 <= lim.lo and lim.hi <= A2
    assert cert.within_estimb and cert.within_estimb0
    assert cert.alpha == compute_alpha(A2)


def test_certify_needs_anchor(table_1000):
    with pytest.raises(CertificateError) as info:
        certify_lemma2(table_1000, 7)
    assert info.value.check == "anchor"


def test_certify_small_a2_fails_at_2(table_1000):
    with pytest.raises(CertificateError) as info:
        certify_lemma2(table_1000, 100, A1, Fraction(105, 100))
    assert info.value.index == 2


def test_certify_a2_below_b4_fails():
    table = CoefficientTable(40)
    with pytest.raises(CertificateError) as info:
        certify_lemma2(table, 40, b_mode="paper", a2=Fraction(111, 100))
    assert info.value.index == 4


def test_certificate_json_roundtrip(table_1000):
    cert = certify_lemma2(table_1000, 200, b_mode="paper")
    data = cert.to_json()
    assert all(isinstance(v, (str, bool, int)) for v in data.values())
    assert BoundCertificate.from_json(data) == cert


def test_enclose_limit_n8():
    t = CoefficientTable(8)
    iv = enclose_limit(t, 8, B_PUBLISHED)
    assert iv == RatInterval(t.b[8] - B_PUBLISHED / 8, t.b[8] + B_PUBLISHED / 8)
    assert abs(iv.lo - Fraction(10098, 10000)) < Fraction(1, 10**4)
    assert abs(iv.hi - Fraction(12795, 10000)) < Fraction(1, 10**4)


def test_enclose_limit_1000(table_1000):
    iv = enclose_limit(table_1000, 1000, B_DEF)
    assert iv.width == 2 * B_DEF / 1000
    assert iv.contains(Fraction(11722, 10000))


def test_enclose_limit_domain(table_1000):
    with pytest.raises(DomainError):
        enclose_limit(table_1000, 7, B_DEF)
    with pytest.raises(DomainError):
        enclose_limit(table_1000, 5000, B_DEF)


def test_enclosures_pairwise_overlap(table_1000):
    Ns = [8, 16, 50, 100, 333, 500, 1000]
    ivs = [enclose_limit(table_1000, N, B_DEF) for N in Ns]
    for i in range(len(ivs)):
        for j in range(i + 1, len(ivs)):
            assert ivs[i].overlaps(ivs[j])


def test_sandwich_implies_hypothesis(table_1000):
    # a passing sandwich through n gives b_k in [A1, A2] through n + 1
    cert = certify_lemma2(table_1000, 300)
    assert cert.all_ok
    assert all(A1 <= b <= A2 for b in table_1000.b[1:302])


@pytest.mark.slow
def test_certify_lemma2_full(table_full):
    cert = certify_lemma2(table_full, 2000)
    assert cert.all_ok and cert.b_results == {"defB": True, "paper": True}
    assert check_Qn_bound(table_full, A1, A2, (5, 2000))
