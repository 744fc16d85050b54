"""Online convolution of nonnegative big-integer streams.

The coefficient recurrences need, at step n, sums of the form

    h[n] = sum_{k=1}^{n-1} a[n-k] * b[k]

where a[j] and b[j] only become known after step j.  Evaluated directly this
costs O(n^2) big-integer products.  :class:`RelaxedConvolution` tiles the
index quadrant {(i, k): i, k >= 1} into dyadic squares and multiplies each
square as soon as its last entry is known, packing both blocks into single
integers (Kronecker substitution) so GMP's fast multiplication does the work.

Tiling: for t = 1, 2, 4, ... and q >= 1 the squares
    a-indices [t*q, t*q + t) x b-indices [t, 2t)       (q >= 1)
    a-indices [t, 2t)        x b-indices [t*q, t*q + t) (q >= 2)
cover every pair exactly once.  Both squares are complete once index
t*(q+1) - 1 is pushed, which is one step before their smallest target index
t*(q+1) is requested.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpz

__all__ = ["RelaxedConvolution", "naive_convolution"]


def naive_convolution(a, b, n: int) -> int:
    """Reference value of sum_{k=1}^{n-1} a[n-k] * b[k]."""
    return sum((a[n - k] * b[k] for k in range(1, n)), 0)


class RelaxedConvolution:
    """h[n] = sum_{k=1}^{n-1} a[n-k] b[k] for streams pushed one index at a time.

    Entries must be nonnegative integers.  Call :meth:`push` with (a[m], b[m])
    for m = 1, 2, ...; after index n - 1 has been pushed, :meth:`value` (n)
    returns h[n].  Each h[n] can be read once.
    """

    def __init__(self, direct_below: int = 16):
        self._a = [mpz(0)]
        self._b = [mpz(0)]
        self._acc: dict[int, mpz] = {}
        self._direct_below = direct_below

    def __len__(self) -> int:
        return len(self._a) - 1

    def push(self, a_m: int, b_m: int) -> None:
        a_m, b_m = mpz(a_m), mpz(b_m)
        if a_m < 0 or b_m < 0:
            raise ValueError("RelaxedConvolution requires nonnegative entries")
        self._a.append(a_m)
        self._b.append(b_m)
        m = len(self._a) - 1
        t = 1
        while (m + 1) % t == 0 and m + 1 >= 2 * t:
            q = (m + 1) // t - 1
            self._tile(t * q, t, t)
            if q >= 2:
                self._tile(t, t * q, t)
            t *= 2

    def _tile(self, i0: int, k0: int, t: int) -> None:
        block_a = self._a[i0 : i0 + t]
        block_b = self._b[k0 : k0 + t]
        base = i0 + k0
        acc = self._acc
        if t < self._direct_below:
            for x, av in enumerate(block_a):
                if not av:
                    continue
                for y, bv in enumerate(block_b):
                    j = base + x + y
                    acc[j] = acc.get(j, 0) + av * bv
            return
        width = (
            max(v.bit_length() for v in block_a)
            + max(v.bit_length() for v in block_b)
            + t.bit_length()
            + 1
        )
        product = gmpy2.pack(block_a, width) * gmpy2.pack(block_b, width)
        for j, v in enumerate(gmpy2.unpack(product, width), start=base):
            if v:
                acc[j] = acc.get(j, 0) + v

    def value(self, n: int) -> mpz:
        if n - 1 > len(self):
            raise IndexError(f"h[{n}] needs entries through {n - 1}, only {len(self)} pushed")
        return self._acc.pop(n, mpz(0))
