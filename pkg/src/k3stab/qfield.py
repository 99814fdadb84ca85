"""Exact arithmetic in real quadratic fields Q(sqrt d).

Only what the kernel needs: field operations, exact sign and ordering, floor.
Numbers from different fields never mix; rationals mix with everything.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

__all__ = ["QuadraticNumber", "sqrt_rational", "as_fraction", "floor_exact", "ceil_exact"]


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (c, m) with n = c*c*m and m free of small square factors."""
    c = 1
    f = 2
    while f * f <= n and f < 100_000:
        while n % (f * f) == 0:
            n //= f * f
            c *= f
        f += 1 if f == 2 else 2
    r = isqrt(n)
    if r * r == n:
        return c * r, 1
    return c, n


def sqrt_rational(q) -> "Fraction | QuadraticNumber":
    """Exact square root of a non-negative rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    p, d = q.numerator, q.denominator
    # sqrt(p/d) = sqrt(p*d)/d
    c, m = _squarefree_split(p * d)
    if m == 1:
        return Fraction(c, d)
    return QuadraticNumber(0, Fraction(c, d), m)


class QuadraticNumber:
    """a + b*sqrt(d) with rational a, b and a square-free integer d > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = int(d)

    # -- coercion ---------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ValueError(f"cannot mix Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other, 0, self.d)
        return NotImplemented

    @staticmethod
    def _make(a, b, d):
        if b == 0:
            return Fraction(a)
        return QuadraticNumber(a, b, d)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self._make(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self._make(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self._make(self.a * o.a + self.b * o.b * self.d, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        if isinstance(num, Fraction):
            return num / n
        return self._make(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    # -- order ------------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else sb

    def _cmp(self, other) -> int:
        diff = self - other
        if isinstance(diff, Fraction):
            return (diff > 0) - (diff < 0)
        return diff.sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadraticNumber):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        b = "" if self.b == 1 else ("-" if self.b == -1 else f"{self.b}*")
        if self.a == 0:
            return f"{b}sqrt({self.d})"
        sep = "+" if self.b > 0 and b != "-" else ""
        return f"{self.a}{sep}{b}sqrt({self.d})"


def as_fraction(x):
    """Return ``x`` as a Fraction if it is rational, else None."""
    if isinstance(x, QuadraticNumber):
        return x.a if x.b == 0 else None
    return Fraction(x)


def floor_exact(x) -> int:
    """Floor of a rational or quadratic number, computed without rounding."""
    if not isinstance(x, QuadraticNumber):
        return Fraction(x).__floor__()
    # bracket, then bisect on integers using exact comparisons
    bound = abs(x.a) + abs(x.b) * (isqrt(x.d) + 1)
    lo, hi = -int(bound) - 1, int(bound) + 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if x >= mid:
            lo = mid
        else:
            hi = mid
    return lo


def ceil_exact(x) -> int:
    return -floor_exact(-x)
