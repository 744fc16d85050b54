"""Rigorous enclosures of the Stokes constants S1 and S2.

    S1 = i b K,   S2 = i e^(i pi/14) b K,   K = pi^(3/2) 2^(13/14) / (Gamma(1/7) Gamma(3/7))

Complex values are kept in polar form with an exact rational phase (in units
of pi), so the relation S2 = -S1 e^(15 i pi/14) is an exact identity check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .certifier import A1, A2, BoundCertificate, certify_lemma2
from .errors import DomainError
from .numerics import (
    RatInterval,
    format_rational,
    gamma_enclosure,
    pi_enclosure,
    rational_power_enclosure,
    to_decimal,
)
from .recurrence import CoefficientTable, u_coefficient

__all__ = [
    "ComplexEnclosure",
    "StokesResult",
    "LargeOrderModel",
    "normalize_phase",
    "compute_K",
    "stokes_constants",
    "check_reflection",
    "large_order_estimate",
    "asymptotic_form_ratio",
    "run_pipeline",
]

S1_PHASE = Fraction(1, 2)
S2_PHASE = Fraction(1, 2) + Fraction(1, 14)
REFLECTION_SHIFT = 1 + Fraction(15, 14)  # -e^(15 i pi/14) = e^(i pi (1 + 15/14))


def normalize_phase(q) -> Fraction:
    """Reduce a phase (in units of pi) to (-1, 1]."""
    q = Fraction(q)
    r = q - 2 * math.floor((q + 1) / 2)
    return Fraction(1) if r == -1 else r


@dataclass(frozen=True)
class ComplexEnclosure:
    """Complex number with modulus in ``modulus`` and argument ``phase_over_pi`` * pi."""

    modulus: RatInterval
    phase_over_pi: Fraction

    def __post_init__(self) -> None:
        if self.modulus.lo < 0:
            raise DomainError("modulus interval must be nonnegative")
        object.__setattr__(self, "phase_over_pi", normalize_phase(self.phase_over_pi))

    def __mul__(self, other: "ComplexEnclosure") -> "ComplexEnclosure":
        return ComplexEnclosure(self.modulus * other.modulus, self.phase_over_pi + other.phase_over_pi)

    def to_json(self, digits: int = 20) -> dict:
        return {
            "modulus": _interval_json(self.modulus, digits),
            "phase_over_pi": format_rational(self.phase_over_pi),
            "phase": phase_label(self.phase_over_pi),
        }


def _interval_json(iv: RatInterval, digits: int) -> dict:
    return {
        "lo": format_rational(iv.lo),
        "hi": format_rational(iv.hi),
        "lo_decimal": to_decimal(iv.lo, digits, "floor"),
        "hi_decimal": to_decimal(iv.hi, digits, "ceil"),
    }


def phase_label(q: Fraction) -> str:
    """Human rendering of a phase, e.g. "1/2 π"."""
    return f"{format_rational(q)} π" if q.denominator != 1 else f"{q.numerator} π"


@dataclass(frozen=True)
class StokesResult:
    b_enclosure: RatInterval
    k_enclosure: RatInterval
    s1: ComplexEnclosure
    s2: ComplexEnclosure
    nonzero_certified: bool

    def to_json(self, digits: int = 20) -> dict:
        return {
            "b": _interval_json(self.b_enclosure, digits),
            "K": _interval_json(self.k_enclosure, digits),
            "s1": self.s1.to_json(digits),
            "s2": self.s2.to_json(digits),
            "nonzero_certified": self.nonzero_certified,
            "decimal_digits": digits,
        }


@dataclass(frozen=True)
class LargeOrderModel:
    """Leading-order estimate of b from u_{2n}; not a rigorous enclosure of b."""

    estimate_at_n: RatInterval
    n: int
    correction_note: str = "leading term only; the O(1/r) correction (r = 2n - 1) is unquantified"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("n must be >= 1")


def compute_K(precision: int = 128) -> RatInterval:
    """Enclosure of pi^(3/2) 2^(13/14) / (Gamma(1/7) Gamma(3/7))."""
    if precision < 16:
        raise DomainError("precision must be at least 16 bits")
    wp = precision + 8
    pi = pi_enclosure(wp)
    pi_32 = rational_power_enclosure(pi, Fraction(3, 2), wp)
    two_pow = rational_power_enclosure(RatInterval.point(2), Fraction(13, 14), wp)
    gammas = gamma_enclosure(Fraction(1, 7), wp) * gamma_enclosure(Fraction(3, 7), wp)
    return (pi_32 * two_pow / gammas).round_out(wp)


def stokes_constants(b: RatInterval, precision: int = 128) -> StokesResult:
    """S1 and S2 from an enclosure of b; nonzero is certified iff b.lo > 0."""
    K = compute_K(precision)
    if b.lo > 0:
        modulus = b * K
    else:
        # sign of b unknown: only an upper bound on |b| K survives
        modulus = RatInterval(Fraction(0), max(abs(b.lo), abs(b.hi)) * K.hi)
    s1 = ComplexEnclosure(modulus, S1_PHASE)
    s2 = ComplexEnclosure(modulus, S2_PHASE)
    return StokesResult(b, K, s1, s2, nonzero_certified=b.lo > 0 and K.lo > 0)


def check_reflection(s1: ComplexEnclosure, s2: ComplexEnclosure) -> bool:
    """S2 = -S1 e^(15 i pi / 14): exact phase identity and overlapping moduli."""
    phase_ok = normalize_phase(s1.phase_over_pi + REFLECTION_SHIFT) == s2.phase_over_pi
    return phase_ok and s1.modulus.overlaps(s2.modulus)


def large_order_estimate(table: CoefficientTable, n: int, precision: int = 128) -> LargeOrderModel:
    """b ~ pi u_{2n} / (K Gamma(2n + 1/14)).

    For odd r = 2n - 1 the two exponential contributions to the r-th Borel
    derivative reinforce, giving u_{2n} = Gamma(2n + 1/14) b K / pi (1 + O(1/r)).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    u = u_coefficient(table, n)
    wp = precision + 8
    estimate = pi_enclosure(wp) * u / (compute_K(precision) * gamma_enclosure(2 * n + Fraction(1, 14), wp))
    return LargeOrderModel(estimate.round_out(wp), n)


def asymptotic_form_ratio(n: int, precision: int = 128) -> RatInterval:
    """Gamma(2n + 1/14) / (2^(-13/14) n^(-13/14) Gamma(2n + 1)), which tends to 1."""
    if n < 1:
        raise DomainError("n must be >= 1")
    wp = precision + 8
    num = gamma_enclosure(2 * n + Fraction(1, 14), wp)
    den = (
        rational_power_enclosure(RatInterval.point(2), Fraction(-13, 14), wp)
        * rational_power_enclosure(RatInterval.point(n), Fraction(-13, 14), wp)
        * math.factorial(2 * n)
    )
    return (num / den).round_out(wp)


def run_pipeline(
    n_max: int = 1000,
    precision: int = 128,
    a1=A1,
    a2=A2,
    b_mode: str = "both",
    table: CoefficientTable | None = None,
) -> tuple[CoefficientTable, BoundCertificate, StokesResult]:
    """extend -> certify -> enclose -> Stokes constants."""
    table = table if table is not None else CoefficientTable()
    table.extend(n_max)
    certificate = certify_lemma2(table, n_max, a1, a2, b_mode)
    result = stokes_constants(certificate.limit_enclosure, precision)
    return table, certificate, result
