"""Validated numerics for the Stokes constants of 2v'' - t + 1/v^2 = 0."""

from .certifier import (
    A1,
    A2,
    B_PUBLISHED,
    BoundCertificate,
    certify_lemma2,
    check_Qn_bound,
    compute_B,
    enclose_limit,
)
from .errors import CertificateError, DomainError, HypothesisError, StokesCertifyError
from .numerics import Rational, RatInterval, format_rational, gamma_enclosure, parse_rational, pi_enclosure
from .oracle import NormalFormSystem, TruncatedSeries, run_oracle_checks, solve_u_series, solve_v_series
from .recurrence import CoefficientTable, compute_DN, compute_E, extend_table, u_coefficient
from .stokes import (
    ComplexEnclosure,
    LargeOrderModel,
    StokesResult,
    check_reflection,
    compute_K,
    large_order_estimate,
    run_pipeline,
    stokes_constants,
)

__version__ = "0.1.0"

__all__ = [
    "A1",
    "A2",
    "B_PUBLISHED",
    "BoundCertificate",
    "CertificateError",
    "CoefficientTable",
    "ComplexEnclosure",
    "DomainError",
    "HypothesisError",
    "LargeOrderModel",
    "NormalFormSystem",
    "RatInterval",
    "Rational",
    "StokesCertifyError",
    "StokesResult",
    "TruncatedSeries",
    "certify_lemma2",
    "check_Qn_bound",
    "check_reflection",
    "compute_B",
    "compute_DN",
    "compute_E",
    "compute_K",
    "enclose_limit",
    "extend_table",
    "format_rational",
    "gamma_enclosure",
    "large_order_estimate",
    "parse_rational",
    "pi_enclosure",
    "run_oracle_checks",
    "run_pipeline",
    "solve_u_series",
    "solve_v_series",
    "stokes_constants",
    "u_coefficient",
]
