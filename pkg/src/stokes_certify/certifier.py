"""Exact machine checks of the a-priori bounds on Q_n and the b_n sandwich.

Increment bound: if A1 <= b_k <= A2 for k < n (n >= 5) then
|Q_n| <= B / n^2 with B = (3/5) A2^2 + (9/625) A2^3.  The intermediate
inequalities of its proof are checked pointwise on the computed range.

Sandwich: A1 + B/k <= b_k <= A2 - B/k for every k >= 8, which
together with the Q_n bound pins the limit b = lim b_n to
[b_N - B/N, b_N + B/N].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CertificateError, DomainError, HypothesisError
from .numerics import RatInterval, format_rational, parse_rational
from .recurrence import CoefficientTable, compute_DN, compute_E

__all__ = [
    "A1",
    "A2",
    "B_PUBLISHED",
    "ESTIMB0_UPPER",
    "BoundCertificate",
    "compute_B",
    "compute_alpha",
    "check_Qn_bound",
    "lemma1_failure",
    "certify_lemma2",
    "enclose_limit",
    "b_constants",
]

A1 = Fraction(1)
A2 = Fraction(331, 250)
B_PUBLISHED = Fraction(10787, 10000)
ESTIMB0_UPPER = 1 + Fraction(12, 37)
E5_BOUND = Fraction(6, 25)
SMALL_K_BOUND = Fraction(11, 50)

B_MODES = ("defB", "paper", "both")


def compute_B(a2) -> Fraction:
    """B = (3/5) a2^2 + (9/625) a2^3."""
    a2 = Fraction(a2)
    if a2 <= 0:
        raise DomainError("A2 must be positive")
    return Fraction(3, 5) * a2**2 + Fraction(9, 625) * a2**3


def compute_alpha(a2) -> Fraction:
    """alpha = 2 A2 + (3/50) A2^2, the bound T_k <= alpha d_k."""
    a2 = Fraction(a2)
    return 2 * a2 + Fraction(3, 50) * a2**2


def b_constants(a2, mode: str = "both") -> dict[str, Fraction]:
    """The candidate B constants selected by ``mode`` (defB, paper or both)."""
    if mode not in B_MODES:
        raise DomainError(f"unknown B mode {mode!r}")
    out = {}
    if mode in ("defB", "both"):
        out["defB"] = compute_B(a2)
    if mode in ("paper", "both"):
        out["paper"] = B_PUBLISHED
    return out


def _check_hypothesis(table: CoefficientTable, a1: Fraction, a2: Fraction, upto: int) -> None:
    for k in range(upto):
        if not a1 <= table.b[k] <= a2:
            raise HypothesisError(
                f"b_{k} = {float(table.b[k]):.6f} lies outside [{a1}, {a2}]", index=k
            )


def lemma1_failure(table: CoefficientTable, a1, a2, n_range: tuple[int, int]) -> tuple[str, int] | None:
    """Name and index of the first failing inequality in the Q_n bound chain, or None.

    Raises HypothesisError when some b_k with k < max(n_range) leaves [a1, a2].
    """
    a1, a2 = Fraction(a1), Fraction(a2)
    lo, hi = n_range
    if not 5 <= lo <= hi <= table.n_max:
        raise DomainError(f"n_range {n_range} must lie in [5, {table.n_max}]")
    if a1 <= 0 or a2 <= a1:
        raise DomainError("need 0 < A1 < A2")
    _check_hypothesis(table, a1, a2, hi)

    bound = compute_B(a2)
    alpha = compute_alpha(a2)
    e5 = compute_E(5)
    if not e5 < E5_BOUND:
        return ("E(5) < 6/25", 5)

    # D_N chain: the two-term majorant and D_N <= E(N)/N^2 for 3 <= N <= hi, with
    # E decreasing, give D_N <= E(N0)/N^2 for all N >= N0 >= 3; plus the N = N0 = 2 case.
    if not compute_DN(table, 2) * 4 <= compute_E(2):
        return ("D_2 <= E(2)/4", 2)
    d = table.d
    prev_e = None
    for N in range(3, hi + 1):
        eN = compute_E(N)
        majorant = (2 * d[1] * d[N - 1] + (N - 3) * d[2] * d[N - 2]) / d[N]
        dn = compute_DN(table, N)
        if not dn <= majorant <= eN / N**2:
            return ("D_N <= E(N)/N^2", N)
        if prev_e is not None and eN > prev_e:
            return ("E decreasing", N)
        prev_e = eN
    for k in (2, 3, 4):
        if not k * k * compute_DN(table, k) < SMALL_K_BOUND:
            return ("k^2 D_k < 11/50", k)

    a2sq = a2 * a2
    for k in range(1, hi):
        tp = table.tprime[k]
        t_k = 2 * d[k] * table.b[k] + tp
        if k >= 2 and not 0 < tp <= Fraction(6, 25) * a2sq * d[k] / k**2:
            return ("0 < T'_k <= 0.24 A2^2 d_k / k^2", k)
        if not 0 < t_k <= alpha * d[k]:
            return ("0 < T_k <= alpha d_k", k)

    for n in range(lo, hi + 1):
        n2 = n * n
        qp, qm = table.qplus[n], table.qminus[n]
        if not 0 < qp <= Fraction(6, 25) * alpha * a2 / n2:
            return ("0 < Q_n^+ <= 0.24 alpha A2 / n^2", n)
        if not 0 < qm <= Fraction(3, 25) * a2sq / n2:
            return ("0 < Q_n^- <= 0.12 A2^2 / n^2", n)
        if not abs(qp - qm) <= bound / n2:
            return ("|Q_n| <= B/n^2", n)
    return None


def check_Qn_bound(table: CoefficientTable, a1, a2, n_range: tuple[int, int]) -> bool:
    """True iff |Q_n| <= B/n^2 and all intermediate inequalities hold on ``n_range``."""
    return lemma1_failure(table, a1, a2, n_range) is None


@dataclass(frozen=True)
class BoundCertificate:
    """Outcome of :func:`certify_lemma2`.

    ``b_results`` maps each tried B constant ("defB", "paper") to whether the
    sandwich and the pointwise |Q_k| <= B/k^2 checks passed; ``b_const`` is the
    constant used for ``limit_enclosure``.
    """

    a1: Fraction
    a2: Fraction
    b_const: Fraction
    alpha: Fraction
    n_checked: int
    base_cases_ok: bool
    induction_ok: bool
    lemma1_ok: bool
    limit_enclosure: RatInterval
    b_mode: str = "both"
    b_values: dict = field(default_factory=dict)
    b_results: dict = field(default_factory=dict)
    within_estimb: bool = False
    within_estimb0: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.a1 < self.a2:
            raise DomainError("need 0 < A1 < A2")

    @property
    def all_ok(self) -> bool:
        return self.base_cases_ok and self.induction_ok and self.lemma1_ok

    def to_json(self) -> dict:
        """Flat JSON object; rationals as "num/den" strings."""
        out = {
            "a1": format_rational(self.a1),
            "a2": format_rational(self.a2),
            "b_const": format_rational(self.b_const),
            "alpha": format_rational(self.alpha),
            "n_checked": self.n_checked,
            "base_cases_ok": self.base_cases_ok,
            "induction_ok": self.induction_ok,
            "lemma1_ok": self.lemma1_ok,
            "limit_enclosure_lo": format_rational(self.limit_enclosure.lo),
            "limit_enclosure_hi": format_rational(self.limit_enclosure.hi),
            "b_mode": self.b_mode,
            "within_estimb": self.within_estimb,
            "within_estimb0": self.within_estimb0,
        }
        for label in sorted(self.b_values):
            out[f"B_{label}"] = format_rational(self.b_values[label])
            out[f"sandwich_{label}_ok"] = self.b_results[label]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "BoundCertificate":
        labels = sorted(k[2:] for k in data if k.startswith("B_"))
        return cls(
            a1=parse_rational(data["a1"]),
            a2=parse_rational(data["a2"]),
            b_const=parse_rational(data["b_const"]),
            alpha=parse_rational(data["alpha"]),
            n_checked=int(data["n_checked"]),
            base_cases_ok=bool(data["base_cases_ok"]),
            induction_ok=bool(data["induction_ok"]),
            lemma1_ok=bool(data["lemma1_ok"]),
            limit_enclosure=RatInterval(
                parse_rational(data["limit_enclosure_lo"]),
                parse_rational(data["limit_enclosure_hi"]),
            ),
            b_mode=data["b_mode"],
            b_values={lab: parse_rational(data[f"B_{lab}"]) for lab in labels},
            b_results={lab: bool(data[f"sandwich_{lab}_ok"]) for lab in labels},
            within_estimb=bool(data["within_estimb"]),
            within_estimb0=bool(data["within_estimb0"]),
        )


def _sandwich_failure(table: CoefficientTable, a1, a2, bound, n_max: int) -> tuple[str, int] | None:
    b = table.b
    for k in range(8, n_max + 1):
        slack = bound / k
        if not a1 + slack <= b[k] <= a2 - slack:
            return ("A1 + B/k <= b_k <= A2 - B/k", k)
    for k in range(9, n_max + 1):
        # inductive step: B/(k-1) - B/k^2 >= B/k, and the Q_k bound it consumes
        if not Fraction(1, k - 1) - Fraction(1, k * k) >= Fraction(1, k):
            return ("1/(k-1) - 1/k^2 >= 1/k", k)
        if not abs(table.q(k)) <= bound / (k * k):
            return ("|Q_k| <= B/k^2", k)
    return None


def certify_lemma2(
    table: CoefficientTable,
    n_max: int,
    a1=A1,
    a2=A2,
    b_mode: str = "both",
) -> BoundCertificate:
    """Check base cases, the k=8 anchor and the sandwich for 8 <= k <= n_max.

    Every constant selected by ``b_mode`` must pass; the first failing k is
    reported through :class:`CertificateError`.
    """
    a1, a2 = Fraction(a1), Fraction(a2)
    if n_max < 8:
        raise CertificateError(f"n_max={n_max}: the anchor k=8 is unavailable", index=8, check="anchor")
    if table.n_max < n_max:
        raise DomainError(f"table only reaches n={table.n_max}, need {n_max}")
    if not 0 < a1 < a2:
        raise DomainError("need 0 < A1 < A2")
    constants = b_constants(a2, b_mode)

    for k in range(8):
        if not a1 <= table.b[k] < a2:
            raise CertificateError(f"base case fails at k={k}", index=k, check="base case")

    results = {}
    for label, bound in constants.items():
        failure = _sandwich_failure(table, a1, a2, bound, n_max)
        if failure is not None:
            name, k = failure
            raise CertificateError(f"{name} fails at k={k} with B={label}", index=k, check=name)
        results[label] = True

    try:
        failure = lemma1_failure(table, a1, a2, (5, n_max))
    except HypothesisError as exc:
        raise CertificateError(str(exc), index=exc.index, check="hypothesis") from exc
    if failure is not None:
        name, k = failure
        raise CertificateError(f"{name} fails at n={k}", index=k, check=name)

    b_const = constants.get("defB", constants.get("paper"))
    limit = enclose_limit(table, n_max, b_const, a1, a2, certified=True)
    return BoundCertificate(
        a1=a1,
        a2=a2,
        b_const=b_const,
        alpha=compute_alpha(a2),
        n_checked=n_max,
        base_cases_ok=True,
        induction_ok=True,
        lemma1_ok=True,
        limit_enclosure=limit,
        b_mode=b_mode,
        b_values=constants,
        b_results=results,
        within_estimb=limit.hi <= A2,
        within_estimb0=limit.hi <= ESTIMB0_UPPER,
    )


def enclose_limit(
    table: CoefficientTable,
    N: int,
    b_const,
    a1=A1,
    a2=A2,
    certified: bool = False,
) -> RatInterval:
    """[b_N - B/N, b_N + B/N], which contains b = lim b_n.

    |b - b_N| <= sum_{k>N} B/k^2 < B/N.  The Q_n bound is re-checked on
    [5, N] first.  With ``certified=True`` (a sandwich certificate exists)
    the interval is also intersected with [a1, a2].
    """
    if N < 8:
        raise DomainError("enclose_limit needs N >= 8")
    if N > table.n_max:
        raise DomainError(f"table only reaches n={table.n_max}")
    b_const = Fraction(b_const)
    failure = lemma1_failure(table, a1, a2, (5, N))
    if failure is not None:
        raise HypothesisError(f"Q_n bound not certified on [5, {N}]: {failure[0]}", index=failure[1])
    radius = b_const / N
    out = RatInterval(table.b[N] - radius, table.b[N] + radius)
    if certified:
        out = out.intersect(RatInterval(Fraction(a1), Fraction(a2)))
    return out
