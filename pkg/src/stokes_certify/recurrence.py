"""Exact coefficient sequences of the asymptotic expansion of v(t).

v(t) ~ sum_k c_k t^(-7k/2 - 1/2) with c_0 = 1 and

    c_n = (7n-6)(7n-4)/4 * c_{n-1}
          + 1/2 sum_{k=1}^{n-1} (7(n-k)-6)(7(n-k)-4)/2 * c_{n-k-1} * s_k
          - 1/2 sum_{k=1}^{n-1} c_k c_{n-k},          s_k = sum_{i=0}^{k} c_i c_{k-i}

d_n is the same recurrence without the sums, b_n = c_n / d_n, and the
increments b_n - b_{n-1} are split as Q_n = Q_n^+ - Q_n^- (see
:class:`CoefficientTable`).

All c_n have power-of-two denominators (c_n 8^n is an integer) and
d_n 4^n = prod (7k-6)(7k-4) is an integer, so the convolutions run on scaled
integers through :class:`~stokes_certify.convolution.RelaxedConvolution`;
the stored sequences are canonical fractions.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from gmpy2 import mpz

from .convolution import RelaxedConvolution
from .errors import DomainError

__all__ = [
    "CoefficientTable",
    "extend_table",
    "dn_closed_form",
    "compute_DN",
    "compute_E",
    "u_coefficient",
    "shared_table",
]

U_SCALE = Fraction(16, 49)


def _weight(m: int) -> int:
    return (7 * m - 6) * (7 * m - 4)


class CoefficientTable:
    """Append-only table of c_n, d_n, b_n, T'_n, Q_n^+ and Q_n^-.

    ``qplus[n]`` and ``qminus[n]`` are computed from the b's and d's through

        Q_n^+ = 1/(2 d_n) sum_{k=1}^{n-1} (7(n-k)-6)(7(n-k)-4)/2 b_{n-k-1} d_{n-k-1} T_k
        Q_n^- = T'_n / (2 d_n),   T_k = 2 d_k b_k + T'_k,
        T'_k  = sum_{i=1}^{k-1} b_i b_{k-i} d_i d_{k-i}

    on their own convolution streams, independently of the c-recurrence, so
    that b_n - b_{n-1} == qplus[n] - qminus[n] is a genuine self-check.
    Index 0 of ``qplus``/``qminus`` holds a 0 placeholder.
    """

    def __init__(self, n_target: int = 0):
        self.c: list[Fraction] = [Fraction(1)]
        self.d: list[Fraction] = [Fraction(1)]
        self.b: list[Fraction] = [Fraction(1)]
        self.tprime: list[Fraction] = [Fraction(0)]
        self.qplus: list[Fraction] = [Fraction(0)]
        self.qminus: list[Fraction] = [Fraction(0)]
        self._C = [mpz(1)]  # c_n * 8^n
        self._D = [mpz(1)]  # d_n * 4^n
        self._P = [mpz(1)]  # b_n d_n * 8^n, rebuilt from the fractions
        self._dsum = [mpz(0), mpz(0)]  # sum_{i=1}^{N-1} D_i D_{N-i}
        self._c_tail = RelaxedConvolution()
        self._c_self = RelaxedConvolution()
        # different tile threshold: the Q path multiplies through other code paths
        self._q_tail = RelaxedConvolution(direct_below=4)
        self._q_self = RelaxedConvolution(direct_below=4)
        self._d_self = RelaxedConvolution()
        self._lock = threading.Lock()
        if n_target:
            self.extend(n_target)

    @property
    def n_max(self) -> int:
        return len(self.c) - 1

    def q(self, n: int) -> Fraction:
        """Q_n = Q_n^+ - Q_n^-."""
        return self.qplus[n] - self.qminus[n]

    def dsum(self, n: int) -> Fraction:
        """sum_{i=1}^{n-1} d_i d_{n-i} (exact)."""
        return Fraction(self._dsum[n], 4**n)

    def extend(self, n_target: int) -> "CoefficientTable":
        """Fill all sequences through ``n_target``; existing entries never change."""
        with self._lock:
            for n in range(self.n_max + 1, n_target + 1):
                self._step(n)
        return self

    def _step(self, n: int) -> None:
        w = _weight(n)
        C, D, P = self._C, self._D, self._P

        # c-recurrence, scaled by 8^n
        tp = self._c_self.value(n)
        h = self._c_tail.value(n)
        twice = 4 * w * C[n - 1] + 4 * h - tp
        if twice % 2:
            raise ArithmeticError(f"c_{n} * 8^{n} is not an integer")
        c_scaled = twice // 2
        C.append(c_scaled)
        self._c_tail.push(w * C[n - 1], 2 * c_scaled + tp)
        self._c_self.push(c_scaled, c_scaled)

        scale = 8**n
        c_n = Fraction(int(c_scaled), scale)
        d_n = self.d[n - 1] * Fraction(w, 4)
        D.append(D[n - 1] * w)
        b_n = c_n / d_n
        self._dsum.append(self._d_self.value(n)) if n >= 2 else None
        self._d_self.push(D[n], D[n])

        # Q path from b and d
        tpq = self._q_self.value(n)
        hq = self._q_tail.value(n)
        self.qplus.append(Fraction(int(hq), 4 * 8 ** (n - 1)) / d_n)
        self.qminus.append(Fraction(int(tpq), 2 * scale) / d_n)
        self.tprime.append(Fraction(int(tpq), scale))
        p = b_n * d_n
        p_num = p.numerator * scale
        if p_num % p.denominator:
            raise ArithmeticError(f"b_{n} d_{n} * 8^{n} is not an integer")
        p_scaled = mpz(p_num // p.denominator)
        P.append(p_scaled)
        self._q_tail.push(w * P[n - 1], 2 * p_scaled + tpq)
        self._q_self.push(p_scaled, p_scaled)

        self.c.append(c_n)
        self.d.append(d_n)
        self.b.append(b_n)

    def check_recbn(self) -> int | None:
        """First n with b_n - b_{n-1} != Q_n, or None if the identity holds throughout."""
        for n in range(1, self.n_max + 1):
            if self.b[n] - self.b[n - 1] != self.q(n):
                return n
        return None


def extend_table(table: CoefficientTable, n_target: int) -> CoefficientTable:
    """Extend ``table`` through ``n_target`` (which must not be below ``table.n_max``)."""
    if n_target < table.n_max:
        raise DomainError(f"n_target={n_target} is below the table size {table.n_max}")
    return table.extend(n_target)


_shared: CoefficientTable | None = None
_shared_lock = threading.Lock()


def shared_table(n_target: int = 0) -> CoefficientTable:
    """Process-wide table, extended on demand."""
    global _shared
    with _shared_lock:
        if _shared is None:
            _shared = CoefficientTable()
    return _shared.extend(n_target)


def dn_closed_form(n: int) -> Fraction:
    """prod_{k=1}^{n} (7k-6)(7k-4)/4."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= Fraction(_weight(k), 4)
    return out


def compute_DN(table: CoefficientTable, N: int) -> Fraction:
    """D_N = (1/d_N) sum_{i=1}^{N-1} d_i d_{N-i}."""
    if N < 2:
        raise DomainError(f"D_N is defined for N >= 2, got {N}")
    if N > table.n_max:
        raise DomainError(f"table only reaches n={table.n_max}")
    return Fraction(int(table._dsum[N]), int(table._D[N]))


_E_POLES = (Fraction(6, 7), Fraction(4, 7), Fraction(11, 7), Fraction(13, 7))


def compute_E(N) -> Fraction:
    """E(N) = 6/49 N^2/((N-6/7)(N-4/7)) + 240/49^2 N^2/((N-4/7)(N-11/7)(N-13/7))."""
    N = Fraction(N)
    if N in _E_POLES:
        raise DomainError(f"E has a pole at N={N}")
    if N <= Fraction(13, 7):
        raise DomainError(f"E(N) requires N > 13/7, got {N}")
    p6, p4, p11, p13 = (N - q for q in _E_POLES)
    n2 = N * N
    return Fraction(6, 49) * n2 / (p6 * p4) + Fraction(240, 49**2) * n2 / (p4 * p11 * p13)


def u_coefficient(table: CoefficientTable, n: int) -> Fraction:
    """u_{2n} = (16/49)^n c_n, the coefficient of x^(-2n) in u(x)."""
    if n < 1:
        raise DomainError("u has no constant term; n must be >= 1")
    if n > table.n_max:
        raise DomainError(f"table only reaches n={table.n_max}")
    return U_SCALE**n * table.c[n]
