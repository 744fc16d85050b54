"""Exception types raised by the library."""

from __future__ import annotations


class StokesCertifyError(Exception):
    """Base class for all library errors."""


class DomainError(StokesCertifyError, ValueError):
    """An argument lies outside the domain of the operation."""


class HypothesisError(StokesCertifyError):
    """The hypothesis of an a-priori bound fails on the computed data.

    ``index`` is the first coefficient index at which the hypothesis fails.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class CertificateError(StokesCertifyError):
    """A certified inequality failed; ``index`` names the first failing k."""

    def __init__(self, message: str, index: int | None = None, check: str | None = None):
        super().__init__(message)
        self.index = index
        self.check = check
