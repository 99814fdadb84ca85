"""Exact univariate and bivariate polynomials over Q.

Univariate polynomials carry Sturm-sequence root isolation and an exact
feasibility test for systems of sign conditions on an interval; bivariate
polynomials carry exact evaluation, restriction to lines and a centred-form
range bound over axis-aligned boxes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = ["Poly1", "Poly2", "MONOMIALS_DEG4", "feasible_on_interval", "solution_set", "SolutionInterval"]


def _strip(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly1:
    """Univariate polynomial, coefficients from degree 0 upwards."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        self.c = _strip([Fraction(a) for a in coeffs])

    @classmethod
    def const(cls, a) -> "Poly1":
        return cls([a])

    @classmethod
    def linear(cls, a0, a1) -> "Poly1":
        return cls([a0, a1])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Fraction:
        return self.c[-1]

    def __call__(self, t):
        acc = 0
        for a in reversed(self.c):
            acc = acc * t + a
        return acc

    def __add__(self, o: "Poly1") -> "Poly1":
        n = max(len(self.c), len(o.c))
        return Poly1([(self.c[i] if i < len(self.c) else 0) + (o.c[i] if i < len(o.c) else 0) for i in range(n)])

    def __neg__(self) -> "Poly1":
        return Poly1([-a for a in self.c])

    def __sub__(self, o: "Poly1") -> "Poly1":
        return self + (-o)

    def __mul__(self, o) -> "Poly1":
        if not isinstance(o, Poly1):
            return Poly1([a * o for a in self.c])
        if not self.c or not o.c:
            return Poly1()
        out = [Fraction(0)] * (len(self.c) + len(o.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        return Poly1(out)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, Poly1) and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly1({[str(a) for a in self.c]})"

    def derivative(self) -> "Poly1":
        return Poly1([i * a for i, a in enumerate(self.c)][1:])

    def divmod(self, o: "Poly1") -> tuple["Poly1", "Poly1"]:
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [Fraction(0)] * max(len(r) - len(o.c) + 1, 0)
        lo = o.lead()
        while len(r) >= len(o.c) and r:
            k = len(r) - len(o.c)
            f = r[-1] / lo
            q[k] = f
            for i, b in enumerate(o.c):
                r[i + k] -= f * b
            r = list(_strip(r))
        return Poly1(q), Poly1(r)

    def monic(self) -> "Poly1":
        return self * (1 / self.lead()) if self.c else self

    def gcd(self, o: "Poly1") -> "Poly1":
        a, b = self, o
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def squarefree(self) -> "Poly1":
        if self.degree < 1:
            return self
        g = self.gcd(self.derivative())
        return self.divmod(g)[0].monic()

    def sturm_chain(self) -> list["Poly1"]:
        chain = [self, self.derivative()]
        while not chain[-1].is_zero():
            r = chain[-2].divmod(chain[-1])[1]
            chain.append(-r)
        return chain[:-1]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(chain: list[Poly1], t) -> int:
    signs = [s for s in (_sign(p(t)) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


class _Root:
    """A real root of a squarefree polynomial: exact rational or isolating interval."""

    __slots__ = ("exact", "lo", "hi", "poly")

    def __init__(self, exact=None, lo=None, hi=None, poly=None):
        self.exact, self.lo, self.hi, self.poly = exact, lo, hi, poly

    def refine(self, width) -> "_Root":
        """Bisect the isolating interval until it is narrower than ``width``."""
        if self.exact is not None:
            return self
        a, b = self.lo, self.hi
        sa = _sign(self.poly(a))
        while b - a >= width:
            m = (a + b) / 2
            sm = _sign(self.poly(m))
            if sm == 0:
                return _Root(exact=m, poly=self.poly)
            if sm == sa:
                a = m
            else:
                b = m
        return _Root(lo=a, hi=b, poly=self.poly)

    def approx(self, width=Fraction(1, 2**20)) -> Fraction:
        r = self.refine(width)
        return r.exact if r.exact is not None else (r.lo + r.hi) / 2

    def __repr__(self):
        if self.exact is not None:
            return f"{self.exact}"
        return f"root in ({self.lo}, {self.hi})"


def isolate_roots(p: Poly1, lo, hi) -> list[_Root]:
    """Real roots of squarefree ``p`` in the open interval (lo, hi), ascending.

    Irrational roots come back as open intervals (a, b) with p(a), p(b) != 0
    that contain exactly one root and are pairwise disjoint.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if p.degree < 1 or lo >= hi:
        return []
    chain = p.sturm_chain()
    out: list[_Root] = []

    def count(a, b):
        return _variations(chain, a) - _variations(chain, b)

    def rec(a, b):
        # invariant: p(a) != 0 and p(b) != 0
        n = count(a, b)
        if n == 0:
            return
        if n == 1:
            out.append(_rationalize(p, a, b))
            return
        m = (a + b) / 2
        if p(m) != 0:
            rec(a, m)
            rec(m, b)
            return
        eps = (b - a) / 4
        while p(m - eps) == 0 or p(m + eps) == 0 or count(m - eps, m + eps) != 1:
            eps /= 2
        rec(a, m - eps)
        out.append(_Root(exact=m, poly=p))
        rec(m + eps, b)

    a = _nudge(p, lo, hi, +1) if p(lo) == 0 else lo
    b = _nudge(p, lo, hi, -1) if p(hi) == 0 else hi
    rec(a, b)
    return out


def _rationalize(p: Poly1, a, b) -> _Root:
    """Return the unique root in (a, b) exactly when it is rational.

    A rational root of an integral polynomial has denominator dividing the
    leading coefficient L, and two such fractions are at least 1/L^2 apart, so
    once the interval is narrower than that the only candidate is the best
    approximation with denominator <= L.
    """
    den = lcm(*(c.denominator for c in p.c))
    lead = abs(int(p.lead() * den))
    sa = _sign(p(a))
    target = Fraction(1, 2 * lead * lead)
    while b - a >= target:
        m = (a + b) / 2
        sm = _sign(p(m))
        if sm == 0:
            return _Root(exact=m, poly=p)
        if sm == sa:
            a = m
        else:
            b = m
    cand = ((a + b) / 2).limit_denominator(lead)
    if a < cand < b and p(cand) == 0:
        return _Root(exact=cand, poly=p)
    return _Root(lo=a, hi=b, poly=p)


def _nudge(p: Poly1, a, b, direction):
    """Step from a root endpoint towards the interval interior, staying inside and root-free there."""
    if direction > 0:
        step = (b - a) / 2
        while True:
            t = a + step
            if p(t) != 0 and _no_root_between(p, a, t):
                return t
            step /= 2
    step = (b - a) / 2
    while True:
        t = b - step
        if p(t) != 0 and _no_root_between(p, t, b):
            return t
        step /= 2


def _no_root_between(p: Poly1, a, b) -> bool:
    # roots strictly between a and b (a or b may be roots themselves)
    q = p.divmod(Poly1([-a, 1]))[0] if p(a) == 0 else p
    q = q.divmod(Poly1([-b, 1]))[0] if q(b) == 0 else q
    if q.degree < 1:
        return True
    ch = q.sturm_chain()
    return _variations(ch, a) - _variations(ch, b) == 0


def sign_at_root(defining: Poly1, root: _Root, q: Poly1) -> int:
    """Sign of ``q`` at a root of the squarefree ``defining`` polynomial."""
    if root.exact is not None:
        return _sign(q(root.exact))
    if q.is_zero():
        return 0
    a, b = root.lo, root.hi
    g = defining.gcd(q)
    if g.degree >= 1:
        ch = g.sturm_chain()
        if _variations(ch, a) - _variations(ch, b) > 0:
            return 0
    qs = q.squarefree()
    chq = qs.sturm_chain()
    dch = defining.sturm_chain()
    # shrink until q has no root in [a, b]
    while qs.degree >= 1 and (_variations(chq, a) - _variations(chq, b) > 0 or qs(a) == 0 or qs(b) == 0):
        m = (a + b) / 2
        if defining(m) == 0:
            return _sign(q(m))
        if _variations(dch, a) - _variations(dch, m) == 1:
            b = m
        else:
            a = m
    return _sign(q((a + b) / 2))


_RELATIONS = {
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
    "==": lambda s: s == 0,
    "!=": lambda s: s != 0,
}


def feasible_on_interval(constraints: Sequence[tuple[Poly1, str]], lo, hi) -> "Fraction | _Root | None":
    """Decide whether some t in [lo, hi] satisfies every ``(poly, rel)`` sign condition.

    ``rel`` is one of ``<, <=, >, >=, ==, !=`` comparing ``poly(t)`` with zero.
    Returns a witness (a rational t, or an isolated algebraic root) or None.
    Exact: critical points are the real roots of the product of all constraint
    polynomials, and every cell of the induced decomposition is tested.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        return None

    def ok_rational(t):
        return all(_RELATIONS[rel](_sign(p(t))) for p, rel in constraints)

    if lo == hi:
        return lo if ok_rational(lo) else None
    prod = Poly1([1])
    for p, _ in constraints:
        if not p.is_zero():
            prod = prod * p
    for t in (lo, hi):
        if ok_rational(t):
            return t
    if prod.degree < 1:
        t = (lo + hi) / 2
        return t if ok_rational(t) else None
    sq = prod.squarefree()
    roots = isolate_roots(sq, lo, hi)
    # sample points in the open gaps between consecutive critical points
    marks = [lo]
    for r in roots:
        marks.append(r.exact if r.exact is not None else r.lo)
        marks.append(r.exact if r.exact is not None else r.hi)
    marks.append(hi)
    for k in range(0, len(marks), 2):
        a, b = marks[k], marks[k + 1]
        if a < b:
            t = (a + b) / 2
            if ok_rational(t):
                return t
    for r in roots:
        if all(_RELATIONS[rel](sign_at_root(sq, r, p)) for p, rel in constraints):
            return r.exact if r.exact is not None else r
    return None


class SolutionInterval:
    """A connected piece of a univariate solution set; endpoints are rationals or roots."""

    __slots__ = ("lo", "lo_closed", "hi", "hi_closed")

    def __init__(self, lo, lo_closed, hi, hi_closed):
        self.lo, self.lo_closed, self.hi, self.hi_closed = lo, lo_closed, hi, hi_closed

    @property
    def is_point(self) -> bool:
        return self.lo is self.hi

    def __repr__(self):
        lo, hi = (str(e) if isinstance(e, Fraction) else repr(e) for e in (self.lo, self.hi))
        if self.is_point:
            return f"{{{lo}}}"
        return f"{'[' if self.lo_closed else '('}{lo}, {hi}{']' if self.hi_closed else ')'}"


def solution_set(constraints: Sequence[tuple[Poly1, str]], lo, hi) -> list[SolutionInterval]:
    """Exact decomposition of {t in [lo, hi] : every sign condition holds} into intervals."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        return []

    def ok_rational(t):
        return all(_RELATIONS[rel](_sign(p(t))) for p, rel in constraints)

    if lo == hi:
        return [SolutionInterval(lo, True, lo, True)] if ok_rational(lo) else []
    prod = Poly1([1])
    for p, _ in constraints:
        if not p.is_zero():
            prod = prod * p
    sq = prod.squarefree() if prod.degree >= 1 else prod
    roots = isolate_roots(sq, lo, hi) if sq.degree >= 1 else []
    # alternate points and open cells: lo, cell, root, cell, ..., root, cell, hi
    pieces: list[tuple[object, bool]] = [(lo, ok_rational(lo))]
    left = lo
    for r in roots:
        right = r.exact if r.exact is not None else r.lo
        pieces.append((None, ok_rational((left + right) / 2)))
        if r.exact is not None:
            pieces.append((r.exact, ok_rational(r.exact)))
        else:
            pieces.append((r, all(_RELATIONS[rel](sign_at_root(sq, r, p)) for p, rel in constraints)))
        left = r.exact if r.exact is not None else r.hi
    pieces.append((None, ok_rational((left + hi) / 2)))
    pieces.append((hi, ok_rational(hi)))
    out: list[SolutionInterval] = []
    k = 0
    n = len(pieces)
    while k < n:
        point, good = pieces[k]
        if not good:
            k += 1
            continue
        # start of a run
        if point is None:
            start, start_closed = pieces[k - 1][0], False
        else:
            start, start_closed = point, True
        j = k
        while j + 1 < n and pieces[j + 1][1]:
            j += 1
        end_point = pieces[j][0]
        if end_point is None:
            end, end_closed = pieces[j + 1][0], False
        else:
            end, end_closed = end_point, True
        out.append(SolutionInterval(start, start_closed, end, end_closed))
        k = j + 1
    return out


# ----------------------------------------------------------------------------
# bivariate


MONOMIALS_DEG4: tuple[tuple[int, int], ...] = tuple(
    (i, total - i) for total in range(5) for i in range(total, -1, -1)
)


def _affine_powers(c: Fraction, h: Fraction, n: int) -> list[list[Fraction]]:
    """Coefficient lists of (c + h t)^i for i = 0..n."""
    rows = [[Fraction(1)]]
    for _ in range(n):
        prev = rows[-1]
        row = [Fraction(0)] * (len(prev) + 1)
        for k, a in enumerate(prev):
            row[k] += a * c
            row[k + 1] += a * h
        rows.append(row)
    return rows


class Poly2:
    """Polynomial in x, y with rational coefficients, stored sparsely."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def const(cls, a) -> "Poly2":
        return cls({(0, 0): a})

    @classmethod
    def x(cls) -> "Poly2":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "Poly2":
        return cls({(0, 1): 1})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def __add__(self, o) -> "Poly2":
        if not isinstance(o, Poly2):
            o = Poly2.const(o)
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, 0) + v
        return Poly2(t)

    __radd__ = __add__

    def __neg__(self) -> "Poly2":
        return Poly2({k: -v for k, v in self.terms.items()})

    def __sub__(self, o) -> "Poly2":
        return self + (-o if isinstance(o, Poly2) else Poly2.const(-Fraction(o)))

    def __rsub__(self, o) -> "Poly2":
        return (-self) + o

    def __mul__(self, o) -> "Poly2":
        if not isinstance(o, Poly2):
            return Poly2({k: v * o for k, v in self.terms.items()})
        t: dict = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in o.terms.items():
                key = (i + k, j + l)
                t[key] = t.get(key, 0) + a * b
        return Poly2(t)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, Poly2) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly2({self.pretty()})"

    def __call__(self, x, y):
        return sum((c * x**i * y**j for (i, j), c in self.terms.items()), Fraction(0))

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    def dense(self, monomials=MONOMIALS_DEG4) -> list[Fraction]:
        extra = set(self.terms) - set(monomials)
        if extra:
            raise ValueError(f"polynomial has monomials outside the dense listing: {sorted(extra)}")
        return [self.coefficient(i, j) for i, j in monomials]

    @classmethod
    def from_dense(cls, coeffs, monomials=MONOMIALS_DEG4) -> "Poly2":
        return cls({m: c for m, c in zip(monomials, coeffs)})

    def restrict_x(self, x0) -> Poly1:
        """Univariate polynomial in y obtained by fixing x = x0."""
        deg = max((j for _, j in self.terms), default=0)
        c = [Fraction(0)] * (deg + 1)
        for (i, j), a in self.terms.items():
            c[j] += a * Fraction(x0) ** i
        return Poly1(c)

    def restrict_y(self, y0) -> Poly1:
        deg = max((i for i, _ in self.terms), default=0)
        c = [Fraction(0)] * (deg + 1)
        for (i, j), a in self.terms.items():
            c[i] += a * Fraction(y0) ** j
        return Poly1(c)

    def coeffs_in_x(self) -> list["Poly1"]:
        """Coefficients as polynomials in y: self = sum_k c_k(y) x^k."""
        deg = max((i for i, _ in self.terms), default=0)
        rows: list[list[Fraction]] = [[] for _ in range(deg + 1)]
        for (i, j), a in self.terms.items():
            row = rows[i]
            while len(row) <= j:
                row.append(Fraction(0))
            row[j] += a
        return [Poly1(r) for r in rows]

    def substitute_affine(self, cx, hx, cy, hy) -> "Poly2":
        """Return p(cx + hx*t, cy + hy*u) as a polynomial in (t, u)."""
        cx, hx, cy, hy = Fraction(cx), Fraction(hx), Fraction(cy), Fraction(hy)
        dx = max((i for i, _ in self.terms), default=0)
        dy = max((j for _, j in self.terms), default=0)
        # (c + h t)^i = sum_k binom(i, k) c^(i-k) h^k t^k
        ex = _affine_powers(cx, hx, dx)
        ey = _affine_powers(cy, hy, dy)
        out: dict = {}
        for (i, j), a in self.terms.items():
            for k, bx in enumerate(ex[i]):
                if not bx:
                    continue
                abx = a * bx
                for l, by in enumerate(ey[j]):
                    if by:
                        out[(k, l)] = out.get((k, l), 0) + abx * by
        return Poly2(out)

    def range_bound(self, x0, x1, y0, y1) -> tuple[Fraction, Fraction]:
        """Rigorous enclosure [lo, hi] of the values on the box (centred form)."""
        cx, hx = (Fraction(x0) + x1) / 2, (Fraction(x1) - x0) / 2
        cy, hy = (Fraction(y0) + y1) / 2, (Fraction(y1) - y0) / 2
        q = self.substitute_affine(cx, hx, cy, hy)
        lo = hi = q.coefficient(0, 0)
        for (i, j), a in q.terms.items():
            if (i, j) == (0, 0):
                continue
            if i % 2 == 0 and j % 2 == 0:
                if a > 0:
                    hi += a
                else:
                    lo += a
            else:
                lo -= abs(a)
                hi += abs(a)
        return lo, hi

    def quadratic_range(self, x0, x1, y0, y1) -> tuple[Fraction, Fraction]:
        """Exact [min, max] on the box for a polynomial of degree at most two.

        Extremes sit at corners, at vertices of the edge restrictions, or at
        the interior critical point, all of which are rational.
        """
        if self.degree > 2:
            raise ValueError("quadratic_range needs degree <= 2")
        g = self.terms.get
        a00, a10, a01 = g((0, 0), 0), g((1, 0), 0), g((0, 1), 0)
        a20, a02, a11 = g((2, 0), 0), g((0, 2), 0), g((1, 1), 0)

        def f(x, y):
            return a00 + x * (a10 + a20 * x + a11 * y) + y * (a01 + a02 * y)

        pts = [(x0, y0), (x0, y1), (x1, y0), (x1, y1)]
        if a02:
            for x in (x0, x1):
                yv = -(a01 + a11 * x) / (2 * a02)
                if y0 < yv < y1:
                    pts.append((x, yv))
        if a20:
            for y in (y0, y1):
                xv = -(a10 + a11 * y) / (2 * a20)
                if x0 < xv < x1:
                    pts.append((xv, y))
        det = 4 * a20 * a02 - a11 * a11
        if det:
            xc = (-2 * a02 * a10 + a11 * a01) / det
            yc = (-2 * a20 * a01 + a11 * a10) / det
            if x0 < xc < x1 and y0 < yc < y1:
                pts.append((xc, yc))
        vals = [f(Fraction(x), Fraction(y)) for x, y in pts]
        return min(vals), max(vals)

    def compiled(self):
        """Fast exact evaluator (x, y) -> value over gmpy2 rationals."""
        terms = [(i, j, mpq(c)) for (i, j), c in self.terms.items()]

        def f(x, y):
            x, y = mpq(x), mpq(y)
            return sum((c * x**i * y**j for i, j, c in terms), mpq(0))

        return f

    def primitive(self) -> "Poly2":
        """Integral multiple with coprime coefficients, first coefficient positive."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for c in self.terms.values()))
        ints = {k: int(c * den) for k, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        order = sorted(ints, key=lambda m: (m[0] + m[1], -m[0]))
        s = 1 if ints[order[0]] > 0 else -1
        return Poly2({k: Fraction(s * v, g) for k, v in ints.items()})

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda m: (-(m[0] + m[1]), -m[0])):
            c = self.terms[(i, j)]
            mono = "*".join(
                s for s in (("x" if i == 1 else f"x^{i}") if i else "", ("y" if j == 1 else f"y^{j}") if j else "") if s
            )
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)
