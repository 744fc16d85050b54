"""Truncated power series solutions used to cross-check the recurrences.

Three formal solutions are computed term by term, each from its own cleared
(polynomial) form of the governing equation:

* v(t) of 2v'' - t + 1/v^2 = 0, as a series in w = t^(-7/2) after factoring
  out t^(-1/2);
* u(x) of the normalized equation for v = t^(-1/2) (1 + u), x = (4/7) t^(7/4),
  as a series in 1/x;
* the pair (y1, y2) of the diagonalized rank-one normal form, with u = y1 + y2.

Each unknown coefficient enters its order linearly, so it is found by
evaluating the residual with the coefficient set to 0 and to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError
from .numerics import format_rational, parse_rational
from .recurrence import U_SCALE, CoefficientTable

__all__ = [
    "TruncatedSeries",
    "NormalFormSystem",
    "solve_v_series",
    "solve_u_series",
    "solve_system_series",
    "v_residual",
    "u_residual",
    "system_residual",
    "borel_map",
    "inverse_borel_map",
    "verify_diagonalization",
    "run_oracle_checks",
]

VARIABLE_TAGS = ("inv_x", "inv_t_7half", "borel_p")


@dataclass(frozen=True)
class TruncatedSeries:
    """sum_{m=0}^{order} coefficients[m] z^m, known exactly through ``order``.

    ``variable_tag`` names z: "inv_x" (1/x), "inv_t_7half" (t^(-7/2)) or
    "borel_p" (the Borel variable p).
    """

    variable_tag: str
    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.variable_tag not in VARIABLE_TAGS:
            raise DomainError(f"unknown variable tag {self.variable_tag!r}")
        if not self.coefficients:
            raise DomainError("a truncated series needs at least one coefficient")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @classmethod
    def zeros(cls, tag: str, order: int) -> "TruncatedSeries":
        return cls(tag, (Fraction(0),) * (order + 1))

    @classmethod
    def constant(cls, tag: str, value, order: int) -> "TruncatedSeries":
        return cls(tag, (Fraction(value),) + (Fraction(0),) * order)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, m: int) -> Fraction:
        return self.coefficients[m]

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.variable_tag, self.coefficients[: order + 1])

    def _check(self, other: "TruncatedSeries") -> int:
        if other.variable_tag != self.variable_tag:
            raise DomainError(f"mixing series in {self.variable_tag} and {other.variable_tag}")
        return min(self.order, other.order)

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(self.variable_tag, other, self.order)

    def __add__(self, other) -> "TruncatedSeries":
        other = self._lift(other)
        n = self._check(other)
        return TruncatedSeries(
            self.variable_tag, tuple(self[m] + other[m] for m in range(n + 1))
        )

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.variable_tag, tuple(-c for c in self.coefficients))

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._lift(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            q = Fraction(other)
            return TruncatedSeries(self.variable_tag, tuple(q * c for c in self.coefficients))
        n = self._check(other)
        a, b = self.coefficients, other.coefficients
        lo_a = next((i for i, c in enumerate(a) if c), n + 1)
        lo_b = next((i for i, c in enumerate(b) if c), n + 1)
        out = []
        for m in range(n + 1):
            s = Fraction(0)
            for i in range(lo_a, m - lo_b + 1):
                s += a[i] * b[m - i]
            out.append(s)
        return TruncatedSeries(self.variable_tag, tuple(out))

    __rmul__ = __mul__

    def const(self, value) -> "TruncatedSeries":
        """Constant series in the same variable and order."""
        return TruncatedSeries.constant(self.variable_tag, value, self.order)

    def weighted(self, fn: Callable[[int], Fraction]) -> "TruncatedSeries":
        """Coefficient m multiplied by fn(m)."""
        return TruncatedSeries(
            self.variable_tag, tuple(c * fn(m) for m, c in enumerate(self.coefficients))
        )

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by z^k (k >= 0), keeping the truncation order."""
        zeros = (Fraction(0),) * k
        return TruncatedSeries(self.variable_tag, (zeros + self.coefficients)[: self.order + 1])

    def d_dx(self) -> "TruncatedSeries":
        """Derivative in x of a series in z = 1/x: z^m -> -m z^(m+1)."""
        if self.variable_tag != "inv_x":
            raise DomainError("d_dx applies to series in 1/x")
        c = self.coefficients
        out = [Fraction(0)] + [-m * c[m] for m in range(self.order)]
        return TruncatedSeries("inv_x", tuple(out))

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; the constant term must be nonzero."""
        a = self.coefficients
        if a[0] == 0:
            raise DomainError("series inversion needs a nonzero constant term")
        inv = [1 / a[0]]
        for m in range(1, self.order + 1):
            s = sum((a[i] * inv[m - i] for i in range(1, m + 1)), Fraction(0))
            inv.append(-s / a[0])
        return TruncatedSeries(self.variable_tag, tuple(inv))

    def to_json(self) -> dict:
        return {
            "variable_tag": self.variable_tag,
            "order": self.order,
            "coefficients": [format_rational(c) for c in self.coefficients],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        coeffs = tuple(parse_rational(s) for s in data["coefficients"])
        series = cls(data["variable_tag"], coeffs)
        if series.order != int(data["order"]):
            raise DomainError("order metadata does not match the coefficient count")
        return series


@dataclass(frozen=True)
class NormalFormSystem:
    """Data of y' = (-Lambda - B/x) y + f0/x^2 + g(x, y) for the normalized equation.

    g(x, y) = g_linear/x^2 [[-1, -1], [1, 1]] y + (1/2) h(x, S y) (-1, 1)^T with
    h(x, u) = -(12/49) u_1/x^2 - (3u_1^2 + 2u_1^3)/(2(1+u_1)^2) and
    S(x) = [[1, 1], [-1 + 1/(14x), 1 + 1/(14x)]].
    """

    lambdas: tuple[Fraction, Fraction] = (Fraction(1), Fraction(-1))
    betas: tuple[Fraction, Fraction] = (Fraction(-1, 14), Fraction(-1, 14))
    f0: tuple[Fraction, Fraction] = (Fraction(6, 49), Fraction(-6, 49))
    g_linear: Fraction = Fraction(15, 392)
    h_linear: Fraction = Fraction(-12, 49)

    def __post_init__(self) -> None:
        if self.lambdas[0] == self.lambdas[1]:
            raise DomainError("resonant eigenvalues")


SIGMA = (-1, 1)


# residuals of the cleared equations ----------------------------------------
#
# Written against the small series API shared by TruncatedSeries and the lazy
# nodes below (+, -, *, shift, d_dx, const, weighted).


def _v_weight(k: int) -> Fraction:
    a = Fraction(7 * k + 1, 2)
    return a * (a + 1)


def v_residual(V):
    """2 w A(V) V^2 - V^2 + 1 where A_k = V_k a_k (a_k + 1), a_k = 7k/2 + 1/2.

    With v = sum V_k t^(-a_k): t v^2 = V^2(w), v'' v^2 = w (A V^2)(w), so this is
    the cleared form 2 v'' v^2 - t v^2 + 1 of the ODE in w = t^(-7/2).
    """
    V2 = V * V
    return (V.weighted(_v_weight) * V2).shift(1) * 2 - V2 + 1


def u_residual(u):
    """2(1+u)^2 (u'' - u - u'/(7x) + 12u/(49x^2) + 12/(49x^2)) + 3u^2 + 2u^3."""
    du = u.d_dx()
    inner = du.d_dx() - u - du.shift(1) * Fraction(1, 7) + (u + 1).shift(2) * Fraction(12, 49)
    opu = u + 1
    u2 = u * u
    return opu * opu * inner * 2 + u2 * 3 + u2 * u * 2


def _h_cleared(u1, system: NormalFormSystem):
    """(1+u1)^2 h(x, u) = h_linear u1 (1+u1)^2 / x^2 - (3u1^2 + 2u1^3)/2."""
    opu = u1 + 1
    u1sq = u1 * u1
    return (u1 * opu * opu).shift(2) * system.h_linear - (u1sq * 3 + u1sq * u1 * 2) * Fraction(1, 2)


def system_residual(ys, system: NormalFormSystem | None = None):
    """Both components of 2(1+u1)^2 (y' + Lambda y + B y/x - f0/x^2 - g) with u1 = y1 + y2."""
    system = system or NormalFormSystem()
    y1, y2 = ys
    u1 = y1 + y2
    opu = u1 + 1
    factor = opu * opu * 2
    hc = _h_cleared(u1, system)
    out = []
    for k, y in enumerate(ys):
        linear = (
            y.d_dx()
            + y * system.lambdas[k]
            + y.shift(1) * system.betas[k]
            - y.const(system.f0[k]).shift(2)
            - u1.shift(2) * (system.g_linear * SIGMA[k])
        )
        out.append(factor * linear - hc * SIGMA[k])
    return out[0], out[1]


# term-by-term solver ------------------------------------------------------


def _solve_linear(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rhs)
    m = [row[:] + [r] for row, r in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise DomainError("singular linear system in term-by-term solve")
        m[col], m[pivot] = m[pivot], m[col]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


class _Context:
    """Shared state of one term-by-term solve: coefficients below ``frontier`` are final."""

    def __init__(self, comps: list[list[Fraction]], start: int):
        self.comps = comps
        self.frontier = start
        self.generation = 1
        # generation at which each index received its final value
        self.finalized = [0] * start

    def finalize(self, m: int) -> None:
        self.generation += 1
        self.finalized.append(self.generation)
        self.frontier = m + 1


class _Lazy:
    """Lazily evaluated series node; finalized coefficients are memoized.

    Coefficient m of a product only needs m+1 child coefficients, so a probe at
    the frontier costs O(m) per node instead of a full truncated product.
    """

    def __init__(self, ctx: _Context, kind: str, args=(), value=None):
        self.ctx = ctx
        self.kind = kind
        self.args = args
        self.value = value
        self._cache: dict[int, tuple[int, Fraction]] = {}

    def __getitem__(self, m: int) -> Fraction:
        ctx = self.ctx
        hit = self._cache.get(m)
        if hit is not None:
            gen = hit[0]
            if gen == ctx.generation or (m < ctx.frontier and gen >= ctx.finalized[m]):
                return hit[1]
        v = self._compute(m)
        self._cache[m] = (ctx.generation, v)
        return v

    def _compute(self, m: int) -> Fraction:
        k, a = self.kind, self.args
        if k == "var":
            return self.ctx.comps[self.value][m]
        if k == "const":
            return self.value if m == 0 else Fraction(0)
        if k == "add":
            return a[0][m] + a[1][m]
        if k == "scale":
            return self.value * a[0][m]
        if k == "weighted":
            return self.value(m) * a[0][m]
        if k == "shift":
            return a[0][m - self.value] if m >= self.value else Fraction(0)
        if k == "d_dx":
            return -(m - 1) * a[0][m - 1] if m >= 1 else Fraction(0)
        if k == "mul":
            x, y = a
            s = Fraction(0)
            for i in range(m + 1):
                xi = x[i]
                if xi:
                    yj = y[m - i]
                    if yj:
                        s += xi * yj
            return s
        raise AssertionError(k)

    def _node(self, kind, args=(), value=None) -> "_Lazy":
        return _Lazy(self.ctx, kind, args, value)

    def const(self, value) -> "_Lazy":
        return self._node("const", value=Fraction(value))

    def _lift(self, other) -> "_Lazy":
        return other if isinstance(other, _Lazy) else self.const(other)

    def __add__(self, other) -> "_Lazy":
        return self._node("add", (self, self._lift(other)))

    __radd__ = __add__

    def __neg__(self) -> "_Lazy":
        return self._node("scale", (self,), Fraction(-1))

    def __sub__(self, other) -> "_Lazy":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "_Lazy":
        return self._lift(other) - self

    def __mul__(self, other) -> "_Lazy":
        if isinstance(other, _Lazy):
            return self._node("mul", (self, other))
        return self._node("scale", (self,), Fraction(other))

    __rmul__ = __mul__

    def shift(self, k: int) -> "_Lazy":
        return self._node("shift", (self,), k)

    def d_dx(self) -> "_Lazy":
        return self._node("d_dx", (self,))

    def weighted(self, fn) -> "_Lazy":
        return self._node("weighted", (self,), fn)


def _solve_term_by_term(
    residual: Callable[[list], Sequence],
    initial: list[list[Fraction]],
    tag: str,
    start: int,
    order: int,
) -> list[TruncatedSeries]:
    """Determine coefficients start..order of each component so residuals vanish.

    The residual's order-m coefficient is affine in the order-m unknowns, so it
    is evaluated at 0 and at each unit vector and the resulting linear system
    is solved exactly.
    """
    comps = [list(c) + [Fraction(0)] * (order + 1 - len(c)) for c in initial]
    ncomp = len(comps)
    ctx = _Context(comps, start)
    variables = [_Lazy(ctx, "var", value=j) for j in range(ncomp)]
    nodes = residual(variables)

    def evaluate(m: int) -> list[Fraction]:
        ctx.generation += 1
        return [node[m] for node in nodes]

    for m in range(start, order + 1):
        for c in comps:
            c[m] = Fraction(0)
        base = evaluate(m)
        jac = [[Fraction(0)] * ncomp for _ in range(ncomp)]
        for j in range(ncomp):
            comps[j][m] = Fraction(1)
            probe = evaluate(m)
            comps[j][m] = Fraction(0)
            for i in range(ncomp):
                jac[i][j] = probe[i] - base[i]
        sol = _solve_linear(jac, [-r for r in base])
        for j in range(ncomp):
            comps[j][m] = sol[j]
        ctx.finalize(m)
    return [TruncatedSeries(tag, tuple(c)) for c in comps]


def solve_v_series(order: int) -> TruncatedSeries:
    """Coefficients c_k of v(t) = sum c_k t^(-7k/2 - 1/2), c_0 = 1, in w = t^(-7/2)."""
    if order < 1:
        raise DomainError("order must be >= 1")
    (series,) = _solve_term_by_term(
        lambda s: (v_residual(s[0]),), [[Fraction(1)]], "inv_t_7half", 1, order
    )
    return series


def solve_u_series(order: int) -> TruncatedSeries:
    """Formal solution u(x) = sum u_m x^(-m) of the normalized equation, u_0 = 0."""
    if order < 2:
        raise DomainError("order must be >= 2")
    (series,) = _solve_term_by_term(
        lambda s: (u_residual(s[0]),), [[Fraction(0)]], "inv_x", 1, order
    )
    return series


def solve_system_series(
    order: int, system: NormalFormSystem | None = None
) -> tuple[TruncatedSeries, TruncatedSeries]:
    """The power series part (y1, y2) of the transseries of the normal form."""
    if order < 2:
        raise DomainError("order must be >= 2")
    system = system or NormalFormSystem()
    y1, y2 = _solve_term_by_term(
        lambda s: system_residual(s, system), [[Fraction(0)], [Fraction(0)]], "inv_x", 1, order
    )
    return y1, y2


# Borel coefficients ---------------------------------------------------------


def borel_map(series: TruncatedSeries) -> TruncatedSeries:
    """sum_{n>=2} y_n x^(-n)  ->  sum_{n>=2} y_n p^(n-1) / (n-1)!."""
    if series.variable_tag != "inv_x":
        raise DomainError("borel_map takes a series in 1/x")
    if series.order < 1 or series[0] != 0 or series[1] != 0:
        raise DomainError("borel_map needs vanishing x^0 and x^-1 coefficients")
    out = [Fraction(0)] + [
        series[n] / math.factorial(n - 1) for n in range(2, series.order + 1)
    ]
    return TruncatedSeries("borel_p", tuple(out))


def inverse_borel_map(series: TruncatedSeries) -> TruncatedSeries:
    """Inverse of :func:`borel_map`: coefficient of p^(n-1) times (n-1)! -> x^(-n)."""
    if series.variable_tag != "borel_p":
        raise DomainError("inverse_borel_map takes a series in p")
    if series[0] != 0:
        raise DomainError("inverse_borel_map needs a vanishing constant term")
    out = [Fraction(0), Fraction(0)] + [
        series[n - 1] * math.factorial(n - 1) for n in range(2, series.order + 2)
    ]
    return TruncatedSeries("inv_x", tuple(out))


# diagonalization -------------------------------------------------------------


def verify_diagonalization(order: int, system: NormalFormSystem | None = None) -> bool:
    """Check that u = S(x) y maps the normal-form solution onto a solution of

        u1' = u2,   u2' = u1 + u2/(7x) - (12/49)/x^2 + h(x, u)

    through ``order`` (the second row cleared by 2(1+u1)^2).
    """
    if order < 2:
        raise DomainError("order must be >= 2")
    y1, y2 = solve_system_series(order, system)
    fourteenth = Fraction(1, 14)
    u1 = y1 + y2
    u2 = (y2 - y1) + (y1 + y2).shift(1) * fourteenth
    r1 = u1.d_dx() - u2
    opu = u1 + 1
    one = TruncatedSeries.constant("inv_x", 1, order)
    inner = u2.d_dx() - u1 - u2.shift(1) * Fraction(1, 7) + one.shift(2) * Fraction(12, 49)
    r2 = opu * opu * inner * 2 - _h_cleared(u1, NormalFormSystem()) * 2
    return r1.is_zero() and r2.is_zero()


# aggregated cross-checks ------------------------------------------------------


def run_oracle_checks(
    n_max: int = 50, table: CoefficientTable | None = None, corrupt: bool = False
) -> list[tuple[str, bool]]:
    """Run every oracle cross-check for coefficients up to c_{n_max}.

    Series in 1/x are solved to order 2 n_max.  ``corrupt`` perturbs c_1 of the
    recurrence table copy used for comparison (negative control).  Returns
    (name, passed) pairs in a fixed order.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    order = max(2, 2 * n_max)
    table = table if table is not None else CoefficientTable()
    table.extend(n_max)
    c = list(table.c[: n_max + 1])
    if corrupt:
        c[1] += 1

    v = solve_v_series(n_max)
    u = solve_u_series(order)
    y1, y2 = solve_system_series(order)
    ysum = y1 + y2

    triple = all(
        c[n] == v[n] and U_SCALE**n * c[n] == u[2 * n] == ysum[2 * n]
        for n in range(n_max + 1)
        if n >= 1
    )
    parity = all(u[m] == 0 and ysum[m] == 0 for m in range(1, order + 1, 2)) and all(
        y1[m] == (y2[m] if m % 2 == 0 else -y2[m]) for m in range(order + 1)
    )
    residuals = (
        v_residual(v).is_zero()
        and u_residual(u).is_zero()
        and all(r.is_zero() for r in system_residual((y1, y2)))
    )
    diag = verify_diagonalization(order)
    borel = borel_map(u)
    roundtrip = inverse_borel_map(borel) == u and all(
        borel[r] * math.factorial(r) == u[r + 1] for r in range(borel.order + 1)
    )
    return [
        ("triple agreement", triple),
        ("parity", parity),
        ("residual vanishing", residuals),
        ("diagonalization", diag),
        ("borel round-trip", roundtrip),
    ]
