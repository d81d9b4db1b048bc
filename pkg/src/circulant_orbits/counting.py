"""Closed-form counts of primitive periodic orbits and pseudo orbits.

Everything here is exact integer/rational arithmetic: prefactors such as
n/l are carried as fractions.Fraction and the final result is checked to
be integral (integrality is a theorem, so a non-integer result signals a
bug or misuse, never a rounding problem).  Binomial coefficients with
fractional, negative, or inverted arguments count nothing and are 0.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


class NonIntegerResultError(ArithmeticError):
    """An exactly-rational count failed to reduce to an integer."""


def mobius(w: int) -> int:
    """Moebius function: 1 at 1, 0 if a squared prime divides w, else (-1)^k."""
    if not isinstance(w, int) or isinstance(w, bool):
        raise TypeError(f"w must be an int, got {w!r}")
    if w < 1:
        raise ValueError(f"w must be >= 1, got {w}")
    k = 0
    p = 2
    while p * p <= w:
        if w % p == 0:
            w //= p
            if w % p == 0:
                return 0
            k += 1
        p += 1 if p == 2 else 2
    if w > 1:
        k += 1
    return (-1) ** k


def divisors(m: int) -> list[int]:
    """Positive divisors of m >= 1, ascending."""
    small, large = [], []
    i = 1
    while i * i <= m:
        if m % i == 0:
            small.append(i)
            if i != m // i:
                large.append(m // i)
        i += 1
    return small + large[::-1]


def binom_or_zero(top: Rational, bottom: Rational) -> int:
    """C(top, bottom) when both are integers with 0 <= bottom <= top, else 0.

    Accepts int or Fraction; floats are rejected so inexactness cannot
    sneak in.
    """
    for x in (top, bottom):
        if not isinstance(x, (int, Fraction)) or isinstance(x, bool):
            raise TypeError(f"arguments must be int or Fraction, got {x!r}")
    t, b = Fraction(top), Fraction(bottom)
    if t.denominator != 1 or b.denominator != 1:
        return 0
    t, b = int(t), int(b)
    if b < 0 or t < 0 or b > t:
        return 0
    return math.comb(t, b)


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise NonIntegerResultError(f"{what} is not an integer: {x}")
    return int(x)


def po_count_family1(n: int, l: int) -> int:
    """Primitive periodic orbits of length l on C_n^+(1,2), 0 < l <= n."""
    _check_window(n, l, n_min=3)
    if l < n:
        return _as_int(Fraction(n, l) * binom_or_zero(l, n - l), "orbit count")
    return 2 if n % 2 == 1 else 1


def po_count_family2(n: int, l: int) -> int:
    """Primitive periodic orbits of length l on C_n^+(1,3), 0 < l <= n."""
    _check_window(n, l, n_min=4)
    if l < n:
        s = (binom_or_zero(l, Fraction(n - l, 2))
             + binom_or_zero(l, Fraction(2 * n - l, 2))
             - binom_or_zero(Fraction(l, 2), Fraction(2 * n - l, 4)))
        return _as_int(Fraction(n, l) * s, "orbit count")
    base = binom_or_zero(l, Fraction(l, 2)) - binom_or_zero(Fraction(l, 2), Fraction(l, 4))
    return base + (1 if n % 3 == 0 else 2)


def po_count_general(n: int, l: int, a1: int, d: int) -> int:
    """Primitive periodic orbits of length l > 0 on C_n^+(a1, a1+d).

    (n/l) * sum over walk-sum multiples m in [ceil(a1 l / n),
    floor((a1+d) l / n)] of sum over common divisors w of m and l of
    mu(w) * C(l/w, (m n - a1 l) / (w d)).
    """
    if a1 < 1 or d < 1:
        raise ValueError(f"need a1 >= 1 and d >= 1, got a1={a1}, d={d}")
    if n <= a1 + d:
        raise ValueError(f"need n > a1 + d, got n={n}, a1+d={a1 + d}")
    if l < 1:
        raise ValueError(f"need l >= 1, got l={l}")
    m_lo = -((-a1 * l) // n)
    m_hi = ((a1 + d) * l) // n
    total = 0
    for m in range(m_lo, m_hi + 1):
        for w in divisors(math.gcd(m, l)):
            mu = mobius(w)
            if mu == 0:
                continue
            total += mu * binom_or_zero(Fraction(l, w), Fraction(m * n - a1 * l, w * d))
    return _as_int(Fraction(n * total, l), "orbit count")


def pso_count_family1(n: int, l: int) -> int:
    """All primitive pseudo orbits of length l on C_n^+(1,2), 0 < l <= n.

    Every one of them is free of self-intersections, so this is also the
    no-intersection class size used by the variance formula.
    """
    _check_window(n, l, n_min=3)
    if l < n:
        return _as_int(Fraction(n, l) * binom_or_zero(l, n - l), "pseudo-orbit count")
    return 2


def pso0_family2(n: int, l: int) -> int:
    """Primitive pseudo orbits of length l on C_n^+(1,3) with no self-intersection."""
    _check_window(n, l, n_min=4)
    if l < n:
        return _as_int(
            Fraction(n, l) * binom_or_zero(l, Fraction(n - l, 2))
            + Fraction(2 * n, l) * binom_or_zero(Fraction(l, 2), n - l),
            "pseudo-orbit count")
    return 2 if n % 2 == 1 else 4


def psoN_family2(n: int, l: int, N: int) -> int:
    """Primitive pseudo orbits on C_n^+(1,3) with exactly N 2-encounters of
    length zero and no other self-intersection, N >= 1."""
    _check_window(n, l, n_min=4)
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    count = (Fraction(2 ** N * n, N)
             * binom_or_zero(Fraction(l, 2) - N, n - l + N)
             * binom_or_zero(Fraction(l, 2) - N - 1, N - 1))
    return _as_int(count, "pseudo-orbit count")


def max_n_2encounters(n: int, l: int) -> int:
    """Largest N for which psoN_family2 can be nonzero: floor((3l-2n)/4), >= 0."""
    _check_window(n, l, n_min=4)
    return max(0, (3 * l - 2 * n) // 4)


def _check_window(n: int, l: int, n_min: int) -> None:
    if n < n_min:
        raise ValueError(f"need n >= {n_min}, got {n}")
    if not 0 < l <= n:
        raise ValueError(f"need 0 < l <= n, got l={l}, n={n}")
