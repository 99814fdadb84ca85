"""Certified enumeration of lattice vectors with bounded central charge.

For Omega spanning a positive plane P, write v = v_P + v_N with v_N in the
negative definite complement.  Then

    |v|^2 := 2 (v_P, v_P) - (v, v)

is positive definite, and (v_P, v_P) <= k |(Omega, v)|^2 with k the largest
eigenvalue of the inverse Gram matrix of (Re Omega, Im Omega).  So
(v, v) >= floor and |(Omega, v)| <= m force |v|^2 <= 2 k m^2 - floor, an
ellipsoid that Fincke-Pohst enumeration walks exactly.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from gmpy2 import mpq

from .charge import ComplexMukaiVector, _div, _norm
from .errors import DomainError, EnumerationCapError
from .lattice import MukaiVector, SurfaceConfig, mukai_pairing
from .poly import Poly1, Poly2, solution_set
from .qfield import QuadraticNumber, floor_exact, sqrt_rational
from .regions import in_positive_two_plane, plane_gram

__all__ = [
    "DEFAULT_CAP",
    "EnumerationQuery",
    "Frame",
    "CertifiedBox",
    "orthogonalize_frame",
    "certified_box",
    "enumerate_bounded",
    "brute_force_enumerate",
    "wall_candidates",
    "candidate_bounds",
]

DEFAULT_CAP = 10**9


@dataclass(frozen=True)
class EnumerationQuery:
    omega_vec: ComplexMukaiVector
    bound_m: object
    norm_floor: int = -2
    rank_positive_only: bool = False
    roots_only: bool = False

    def __post_init__(self):
        object.__setattr__(self, "bound_m", Fraction(self.bound_m))
        if self.bound_m < 0:
            raise DomainError("bound_m must be non-negative")
        if self.norm_floor < -2:
            raise DomainError("norm_floor must be at least -2")


# ----------------------------------------------------------------------------
# exact linear algebra


def _inverse(mat: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise DomainError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def _sqrt_floor(q) -> int:
    """floor(sqrt(q)) for rational q >= 0."""
    q = Fraction(q)
    return isqrt(q.numerator // q.denominator) if q > 0 else 0


def _sqrt_upper(q) -> Fraction:
    """A rational upper bound for sqrt(q), exact when q is a rational square."""
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    p, d = q.numerator, q.denominator
    s = isqrt(p * d)
    if s * s == p * d:
        return Fraction(s, d)
    return Fraction(s + 1, d)


def _ceil(q) -> int:
    return -((-Fraction(q)).__floor__())


# ----------------------------------------------------------------------------
# frame and majorant


@dataclass(frozen=True)
class Frame:
    """Orthogonal rational basis adapted to the plane of Omega.

    ``basis[0], basis[1]`` span the plane, the rest its complement; ``norms``
    are the squares (e_i, e_i), positive for the first two and negative after.
    Scaling e_i by 1/sqrt|norm_i| gives Gram diag(1, 1, -1, ..., -1).
    ``k`` is the exact constant with v1^2 + v2^2 <= k |(Omega, v)|^2, and
    ``k_bound`` a rational upper bound for it used by the search box.
    """

    basis: tuple
    norms: tuple
    k: object
    k_bound: Fraction

    @property
    def signature(self) -> tuple[int, int]:
        return sum(1 for n in self.norms if n > 0), sum(1 for n in self.norms if n < 0)


def _plane_constant(A, B, C):
    """Largest eigenvalue of the inverse of [[A, B], [B, C]]: (A + C + sqrt((A-C)^2 + 4B^2)) / 2D."""
    D = A * C - B * B
    root = sqrt_rational(Fraction((A - C) ** 2 + 4 * B * B))
    return _div(A + C + root, 2 * D)


def _k_bound(k) -> Fraction:
    if isinstance(k, QuadraticNumber):
        scale = 2**20
        return Fraction(floor_exact(k * scale) + 1, scale)
    return Fraction(k)


def orthogonalize_frame(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector) -> Frame:
    if not in_positive_two_plane(cfg, omega_vec):
        raise DomainError("Omega must span a positive definite two-plane")
    n = cfg.lattice_rank
    G = cfg.mukai_gram()

    def pair(x, y):
        return sum(x[i] * G[i][j] * y[j] for i in range(n) for j in range(n) if G[i][j])

    a = [Fraction(c) for c in omega_vec.re.coords]
    b = [Fraction(c) for c in omega_vec.im.coords]
    basis = [a]
    e2 = [bi - pair(b, a) / pair(a, a) * ai for ai, bi in zip(a, b)]
    basis.append(e2)
    norms = [pair(a, a), pair(e2, e2)]
    for i in range(n):
        if len(basis) == n:
            break
        e = [Fraction(int(i == j)) for j in range(n)]
        for f, nf in zip(basis, norms):
            c = pair(e, f) / nf
            e = [x - c * y for x, y in zip(e, f)]
        if any(e):
            basis.append(e)
            norms.append(pair(e, e))
    A, B, C = plane_gram(cfg, omega_vec)
    k = _plane_constant(A, B, C)
    return Frame(
        tuple(tuple(_norm(c) for c in e) for e in basis), tuple(_norm(x) for x in norms), k, _k_bound(k)
    )


def majorant_matrix(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector) -> list[list[Fraction]]:
    """Matrix of |v|^2 = 2 (v_P, v_P) - (v, v) in the standard basis of N(X)."""
    n = cfg.lattice_rank
    G = cfg.mukai_gram()
    A, B, C = plane_gram(cfg, omega_vec)
    D = Fraction(A * C - B * B)
    ga = [sum(G[i][j] * omega_vec.re.coords[j] for j in range(n)) for i in range(n)]
    gb = [sum(G[i][j] * omega_vec.im.coords[j] for j in range(n)) for i in range(n)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            # (ga_i, gb_i) g^-1 (ga_j, gb_j)^T with g^-1 = [[C, -B], [-B, A]] / D
            proj = (C * ga[i] * ga[j] - B * (ga[i] * gb[j] + gb[i] * ga[j]) + A * gb[i] * gb[j]) / D
            M[i][j] = 2 * proj - G[i][j]
    return M


@dataclass(frozen=True)
class CertifiedBox:
    """|v|^2 <= radius_sq certifies completeness; ``radii`` bound each coordinate."""

    radius_sq: Fraction
    radii: tuple
    k_bound: Fraction

    @property
    def volume(self) -> int:
        out = 1
        for r in self.radii:
            out *= 2 * r + 1
        return out


def certified_box(cfg: SurfaceConfig, q: EnumerationQuery) -> tuple[CertifiedBox, list[list[Fraction]]]:
    if not in_positive_two_plane(cfg, q.omega_vec):
        raise DomainError("Omega must span a positive definite two-plane")
    A, B, C = plane_gram(cfg, q.omega_vec)
    kb = _k_bound(_plane_constant(A, B, C))
    floor = -2 if q.roots_only else q.norm_floor
    R = 2 * kb * q.bound_m**2 - floor
    M = majorant_matrix(cfg, q.omega_vec)
    Minv = _inverse(M)
    radii = tuple(_sqrt_floor(R * Minv[i][i]) for i in range(len(M)))
    return CertifiedBox(R, radii, kb), M


# ----------------------------------------------------------------------------
# Fincke-Pohst


def _fp_decompose(M: list[list[Fraction]]) -> list[list[Fraction]]:
    """q(v) = sum_i Q[i][i] (v_i + sum_{j>i} Q[i][j] v_j)^2."""
    n = len(M)
    Q = [row[:] for row in M]
    for i in range(n):
        for j in range(i + 1, n):
            Q[j][i] = Q[i][j]
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[k][i] * Q[i][l]
    return Q


def _int_range(c: Fraction, t: Fraction) -> list[int]:
    """Integers x with (x + c)^2 <= t."""
    if t < 0:
        return []
    s = _sqrt_upper(t)
    lo = (-c - s).__floor__()
    hi = _ceil(-c + s)
    return [x for x in range(lo, hi + 1) if (x + c) ** 2 <= t]


def _fp_walk(Q, R, last_values=None):
    n = len(Q)
    v = [0] * n

    def rec(i, remaining):
        c = sum((Q[i][j] * v[j] for j in range(i + 1, n)), Fraction(0))
        xs = _int_range(c, remaining / Q[i][i])
        if i == n - 1 and last_values is not None:
            xs = [x for x in xs if x in last_values]
        for x in xs:
            v[i] = x
            rest = remaining - Q[i][i] * (x + c) ** 2
            if i == 0:
                yield tuple(v)
            else:
                yield from rec(i - 1, rest)
        v[i] = 0

    yield from rec(n - 1, Fraction(R))


def _accepts(cfg: SurfaceConfig, q: EnumerationQuery, v: MukaiVector, m2) -> bool:
    if v.is_zero():
        return False
    if q.rank_positive_only and not v.r > 0:
        return False
    sq = mukai_pairing(cfg, v, v)
    if q.roots_only:
        if sq != -2:
            return False
    elif sq < q.norm_floor:
        return False
    return q.omega_vec.pair(cfg, v).abs2() <= m2


def _walk_chunk(cfg, q, Q, R, values):
    m2 = q.bound_m**2
    out = []
    for coords in _fp_walk(Q, R, set(values)):
        v = MukaiVector.from_coords(coords)
        if _accepts(cfg, q, v, m2):
            out.append(v)
    return out


def enumerate_bounded(cfg: SurfaceConfig, q: EnumerationQuery, cap: int = DEFAULT_CAP, jobs: int = 1) -> list[MukaiVector]:
    """All integral v != 0 with (v, v) >= floor and |(Omega, v)| <= m, sorted.

    ``roots_only`` restricts to (v, v) = -2 and ``rank_positive_only`` to
    r > 0.  In abelian mode root searches return nothing by policy.
    """
    if q.roots_only and cfg.is_abelian:
        return []
    box, M = certified_box(cfg, q)
    if box.volume > cap:
        raise EnumerationCapError(
            f"certified search box has volume {box.volume}, above the cap {cap}", required=box.volume, cap=cap
        )
    Q = _fp_decompose(M)
    last = range(-box.radii[-1], box.radii[-1] + 1)
    if jobs <= 1:
        found = _walk_chunk(cfg, q, Q, box.radius_sq, last)
    else:
        chunks = [list(last[i::jobs]) for i in range(jobs)]
        found = []
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_walk_chunk, [cfg] * jobs, [q] * jobs, [Q] * jobs, [box.radius_sq] * jobs, chunks):
                found.extend(part)
    return sorted(found)


def brute_force_enumerate(cfg: SurfaceConfig, q: EnumerationQuery, radii: Sequence[int] | None = None) -> list[MukaiVector]:
    """Reference scan of every integer point of a coordinate box."""
    if q.roots_only and cfg.is_abelian:
        return []
    if radii is None:
        radii = certified_box(cfg, q)[0].radii
    m2 = q.bound_m**2
    out = []
    for coords in itertools.product(*(range(-r, r + 1) for r in radii)):
        v = MukaiVector.from_coords(coords)
        if _accepts(cfg, q, v, m2):
            out.append(v)
    return sorted(out)


# ----------------------------------------------------------------------------
# wall candidates over a window


class _Quad:
    """a00 + a10 x + a01 y + a20 x^2 + a02 y^2 + a11 xy over mpq, for the hot pruning loop."""

    __slots__ = ("a00", "a10", "a01", "a20", "a02", "a11")

    def __init__(self, a00, a10, a01, a20, a02, a11):
        self.a00, self.a10, self.a01 = mpq(a00), mpq(a10), mpq(a01)
        self.a20, self.a02, self.a11 = mpq(a20), mpq(a02), mpq(a11)

    @classmethod
    def from_poly(cls, p: Poly2) -> "_Quad":
        g = p.terms.get
        return cls(*(g(m, 0) for m in ((0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1))))

    def __call__(self, x, y):
        return self.a00 + x * (self.a10 + self.a20 * x + self.a11 * y) + y * (self.a01 + self.a02 * y)

    def range(self, x0, x1, y0, y1):
        """Exact [min, max] on the box: corners, edge vertices, interior critical point."""
        a10, a01, a20, a02, a11 = self.a10, self.a01, self.a20, self.a02, self.a11
        vals = [self(x0, y0), self(x0, y1), self(x1, y0), self(x1, y1)]
        if a02:
            for x in (x0, x1):
                yv = -(a01 + a11 * x) / (2 * a02)
                if y0 < yv < y1:
                    vals.append(self(x, yv))
        if a20:
            for y in (y0, y1):
                xv = -(a10 + a11 * y) / (2 * a20)
                if x0 < xv < x1:
                    vals.append(self(xv, y))
        det = 4 * a20 * a02 - a11 * a11
        if det:
            xc = (-2 * a02 * a10 + a11 * a01) / det
            yc = (-2 * a20 * a01 + a11 * a10) / det
            if x0 < xc < x1 and y0 < yc < y1:
                vals.append(self(xc, yc))
        return min(vals), max(vals)


def _dist_sq(lo, hi):
    """min t^2 over t in [lo, hi]."""
    if lo > 0:
        return lo * lo
    if hi < 0:
        return hi * hi
    return 0


class _BoxSearch:
    """Branch and bound for: does |Z(w)| <= |Z(v)| hold somewhere on the box?

    ``w`` runs over (r, delta, s) with (r, delta) fixed, so Re Z(w) = re0 - s
    and per-box data (exact component ranges, centre values) are cached and
    shared by every s.  |Z(w)|^2 is bounded below by the squared distance
    from 0 to the range rectangle of (Re, Im); |Z(v)|^2 above by the far corner.
    """

    def __init__(self, re0: _Quad, im: _Quad, re_v: _Quad, im_v: _Quad, box, depth: int):
        self.re0, self.im = re0, im
        self.re_v, self.im_v = re_v, im_v
        self.box = tuple(mpq(c) for c in box)
        self.depth = depth
        self.cache: dict = {}

    def _data(self, key):
        d = self.cache.get(key)
        if d is None:
            level, i, j = key
            x0, x1, y0, y1 = self.box
            n = 2**level
            hx, hy = (x1 - x0) / n, (y1 - y0) / n
            a, b, c, e = x0 + i * hx, x0 + (i + 1) * hx, y0 + j * hy, y0 + (j + 1) * hy
            rlo, rhi = self.re0.range(a, b, c, e)
            ilo, ihi = self.im.range(a, b, c, e)
            vrl, vrh = self.re_v.range(a, b, c, e)
            vil, vih = self.im_v.range(a, b, c, e)
            vmax = max(vrl * vrl, vrh * vrh) + max(vil * vil, vih * vih)
            xm, ym = (a + b) / 2, (c + e) / 2
            zv = self.re_v(xm, ym) ** 2 + self.im_v(xm, ym) ** 2
            d = (rlo, rhi, _dist_sq(ilo, ihi), vmax, self.re0(xm, ym), self.im(xm, ym) ** 2, zv)
            self.cache[key] = d
        return d

    def excluded(self, s, key=(0, 0, 0)) -> bool:
        """True if |Z(w)| > |Z(v)| is proven on the box ``key`` for this s."""
        rlo, rhi, imd, vmax, rc, ic, zv = self._data(key)
        if _dist_sq(rlo - s, rhi - s) + imd > vmax:
            return True
        if (rc - s) ** 2 + ic <= zv:
            return False
        level, i, j = key
        if level == self.depth:
            return False
        return all(
            self.excluded(s, (level + 1, 2 * i + di, 2 * j + dj)) for di in (0, 1) for dj in (0, 1)
        )


def _charge_bound(F, window, splits=4) -> Fraction:
    """Upper bound for a non-negative polynomial over the window, by subdivided enclosures."""
    x0, x1, y0, y1 = window
    best = Fraction(0)
    for i in range(splits):
        for j in range(splits):
            a, b = x0 + (x1 - x0) * i / splits, x0 + (x1 - x0) * (i + 1) / splits
            c, d = y0 + (y1 - y0) * j / splits, y0 + (y1 - y0) * (j + 1) / splits
            best = max(best, F.range_bound(a, b, c, d)[1])
    return best


@dataclass(frozen=True)
class CandidateBounds:
    charge_bound: Fraction  # M >= |Z(v)| on the window
    omega_sq_min: Fraction
    rank_bound: int


def candidate_bounds(cfg: SurfaceConfig, slc, v: MukaiVector) -> CandidateBounds:
    re, im = slc.charge_polys(cfg, v)
    M = _sqrt_upper(_charge_bound(re * re + im * im, slc.window))
    w2 = slc.omega_square_min(cfg)
    rmax = (M + _sqrt_upper(2 * M * M + 2 * w2)) / w2
    return CandidateBounds(M, w2, rmax.__floor__())


def _y_range_for_rank(cfg: SurfaceConfig, slc, r: int, M: Fraction):
    """Rational hull of {y in window : r^2 w(y)^4 - (2 + 2|r|M) w(y)^2 - M^2 <= 0}."""
    _, _, y0, y1 = slc.window
    if r == 0:
        return y0, y1
    a = 2 + 2 * abs(r) * M
    t = (a + _sqrt_upper(a * a + 4 * r * r * M * M)) / (2 * r * r)  # upper bound for the admissible w^2
    q = slc.omega_square(cfg) - Poly1([t])
    pieces = solution_set([(q, "<=")], y0, y1)
    if not pieces:
        return None
    lo, hi = pieces[0].lo, pieces[-1].hi
    lo = lo if isinstance(lo, Fraction) else lo.lo
    hi = hi if isinstance(hi, Fraction) else hi.hi
    return max(lo, y0), min(hi, y1)


class _SliceCharges:
    """Re/Im Z(w) on a fixed slice as mpq quadratics, from precomputed dot products.

    Re Z = delta.beta - s - r (beta^2 - omega^2) / 2 and Im Z = delta.omega - r beta.omega
    with beta = b0 + x db, omega = w0 + y dw.
    """

    def __init__(self, cfg: SurfaceConfig, slc):
        self.cfg = cfg
        b0, db, w0, dw = slc.base_beta, slc.dir_beta, slc.base_omega, slc.dir_omega
        d = cfg.dot
        self.b0, self.db, self.w0, self.dw = b0, db, w0, dw
        h = mpq(1, 2)
        # coefficients of r in (a00, a10, a01, a20, a02, a11)
        self.re_r = (-h * (d(b0, b0) - d(w0, w0)), -d(b0, db), d(w0, dw), -h * d(db, db), h * d(dw, dw), 0)
        self.im_r = (-d(b0, w0), -d(db, w0), -d(b0, dw), 0, 0, -d(db, dw))

    def im(self, r, delta) -> _Quad:
        d = self.cfg.dot
        c = self.im_r
        return _Quad(r * c[0] + d(delta, self.w0), r * c[1], r * c[2] + d(delta, self.dw), 0, 0, r * c[5])

    def re_without_s(self, r, delta) -> _Quad:
        d = self.cfg.dot
        c = self.re_r
        return _Quad(r * c[0] + d(delta, self.b0), r * c[1] + d(delta, self.db), r * c[2], r * c[3], r * c[4], 0)


def wall_candidates(cfg: SurfaceConfig, slc, v: MukaiVector, cap: int = DEFAULT_CAP, depth: int = 6) -> list[MukaiVector]:
    """Integral w with (w, w) >= -2, (v-w, v-w) >= -2 and |Z(w)| <= |Z(v)| somewhere on the window.

    A certified superset: w is dropped only when |Z(w)|^2 > |Z(v)|^2 is proven
    on the whole window.  w = 0 and w = v are excluded.

    With M >= |Z(v)| on the window, u = delta - r beta and any admissible point:
      r^2 w^2 <= 2 + 2|r| M + M^2 / w^2,
      2 (u.w)^2 / w^2 - u^2 <= 2 M^2 / w^2 + 2 |r| M + 2 - r^2 w^2,
      delta^2 - 2 r s in [-2, 2 |r| M - r^2 w^2 + M^2 / w^2],
    which bound r, then delta, then s.
    """
    slc.validate(cfg)
    if v.is_zero():
        raise DomainError("wall candidates need a nonzero class")
    b = candidate_bounds(cfg, slc, v)
    M, w2 = b.charge_bound, b.omega_sq_min
    x0, x1, y0, y1 = slc.window
    rho = cfg.rank
    Ginv = _inverse(cfg.ns_gram)
    om0, om1 = slc.omega(y0), slc.omega(y1)
    weight = [2 * max(Fraction(om0[i]) ** 2, Fraction(om1[i]) ** 2) / w2 - Ginv[i][i] for i in range(rho)]
    be0, be1 = slc.beta(x0), slc.beta(x1)
    blo = [min(be0[i], be1[i]) for i in range(rho)]
    bhi = [max(be0[i], be1[i]) for i in range(rho)]

    plan = []
    volume = 0
    for r in range(-b.rank_bound, b.rank_bound + 1):
        if r * r * w2 > 2 + 2 * abs(r) * M + M * M / w2:
            continue
        yr = _y_range_for_rank(cfg, slc, r, M)
        if yr is None:
            continue
        K = 2 * M * M / w2 + 2 * abs(r) * M + 2 - r * r * w2
        if K < 0:
            continue
        ranges = []
        for i in range(rho):
            U = _sqrt_upper(K * weight[i])
            lo_i = min(r * blo[i], r * bhi[i]) - U
            hi_i = max(r * blo[i], r * bhi[i]) + U
            ranges.append(range(_ceil(lo_i), hi_i.__floor__() + 1))
        size = 1
        for rg in ranges:
            size *= len(rg)
        volume += size
        plan.append((r, yr, ranges))
    if volume > cap:
        raise EnumerationCapError(
            f"candidate search needs {volume} (r, delta) pairs, above the cap {cap}", required=volume, cap=cap
        )

    fast = _SliceCharges(cfg, slc)
    re_v, im_v = (_Quad.from_poly(p) for p in slc.charge_polys(cfg, v))
    mx0, mx1, mM = mpq(x0), mpq(x1), mpq(M)
    out = []
    for r, (ya, yb), ranges in plan:
        nmax = 2 * abs(r) * M - r * r * w2 + M * M / w2
        for delta in itertools.product(*ranges):
            d2 = cfg.square(delta)
            if r == 0 and d2 < -2:
                continue
            im = fast.im(r, delta)
            lo, hi = im.range(mx0, mx1, mpq(ya), mpq(yb))
            if lo > mM or hi < -mM:
                continue
            re0 = fast.re_without_s(r, delta)
            lo, hi = re0.range(mx0, mx1, mpq(ya), mpq(yb))
            s_lo, s_hi = _ceil(Fraction(lo - mM)), Fraction(hi + mM).__floor__()
            search = None
            if r != 0:
                a, c = Fraction(d2 - nmax, 2 * r), Fraction(d2 + 2, 2 * r)
                s_lo, s_hi = max(s_lo, _ceil(min(a, c))), min(s_hi, max(a, c).__floor__())
            for s in range(s_lo, s_hi + 1):
                w = MukaiVector(r, delta, s)
                if w.is_zero() or w == v:
                    continue
                if d2 - 2 * r * s < -2:
                    continue
                u = v - w
                if mukai_pairing(cfg, u, u) < -2:
                    continue
                if search is None:
                    search = _BoxSearch(re0, im, re_v, im_v, (x0, x1, ya, yb), depth)
                if search.excluded(s):
                    continue
                out.append(w)
    return sorted(out)
