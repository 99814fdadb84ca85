"""Walls on a two-dimensional slice of the tube domain.

Hole boundaries H(delta) are the loci where Z(delta) is real and <= 0 for a
spherical class delta of positive rank; they are found completely and decided
exactly.  Numerical walls W(v, w) are the loci where Z(w) and Z(v) have the
same phase with both |Z(w)| and |Z(v - w)| shorter than |Z(v)| along Z(v);
they come from the certified candidate set of :mod:`k3stab.roots`.

Wall polynomials are exact.  Polylines and chamber maps are sampled and meant
for pictures only.
"""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq, sign as mpq_sign

from .errors import DomainError, EnumerationCapError
from .lattice import MukaiVector, SurfaceConfig
from .poly import Poly1, Poly2, SolutionInterval, feasible_on_interval, solution_set
from .roots import DEFAULT_CAP, _ceil, _inverse, _sqrt_floor, wall_candidates
from .slices import Slice2D, default_slice

__all__ = [
    "WallKind",
    "Wall",
    "ChamberMap",
    "Slice2D",
    "default_slice",
    "hole_walls",
    "hole_meets_window",
    "numerical_walls",
    "chamber_sample",
    "trace_locus",
]

POLYLINE_GRID = 32
POLYLINE_BITS = 20

_REL = {
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
}


class WallKind(Enum):
    HOLE = "hole"
    NUMERICAL = "numerical"


@dataclass
class Wall:
    """An exact wall locus with the sign conditions cutting out its active part.

    The wall is {locus = 0} intersected with the union over ``side_sets`` of
    the sets where every ``(poly, rel)`` in the set holds.  ``segments`` are
    sampled polylines of that set; every vertex is either an exact zero of
    the locus or within ``tolerance`` of one along a grid edge.
    """

    kind: WallKind
    witness: MukaiVector
    partner: MukaiVector | None
    locus: Poly2
    side_sets: tuple
    segments: list = field(default_factory=list)
    tolerance: Fraction = Fraction(0)
    others: list = field(default_factory=list)  # further (witness, partner) pairs on the same locus

    @property
    def key(self) -> tuple:
        return tuple(self.locus.primitive().dense())

    def is_active_at(self, x, y) -> bool:
        """Exact test of a rational point."""
        if self.locus(x, y) != 0:
            return False
        return any(all(_REL[rel](p(x, y)) for p, rel in sides) for sides in self.side_sets)

    def restrict_x(self, x0, y_lo, y_hi) -> list[SolutionInterval]:
        """Exact {y in [y_lo, y_hi] : (x0, y) lies on the wall}.

        With several side sets the pieces of each are listed in turn.
        """
        out = []
        line = self.locus.restrict_x(x0)
        for sides in self.side_sets:
            cons = [(line, "==")] + [(p.restrict_x(x0), rel) for p, rel in sides]
            out.extend(solution_set(cons, y_lo, y_hi))
        return out

    def __str__(self):
        who = str(self.witness) if self.partner is None else f"{self.witness}+{self.partner}"
        return f"{self.kind.value} {who}: {self.locus.primitive().pretty()} = 0"


# ----------------------------------------------------------------------------
# hole boundaries


def _y_poly2(p: Poly1) -> Poly2:
    return Poly2({(0, j): c for j, c in enumerate(p.c)})


def _ample_constraints(cfg: SurfaceConfig, slc: Slice2D) -> list[tuple[Poly1, str]]:
    cons = [(slc.omega_square(cfg), ">"), (slc.omega_dot(cfg, cfg.ample_class), ">")]
    cons += [(slc.omega_dot(cfg, c), ">") for c in cfg.minus_two_curves]
    return cons


def hole_meets_window(re: Poly2, im: Poly2, extra: Sequence[tuple[Poly1, str]], window) -> bool:
    """Exact test: is there (x, y) in the window with im = 0, re <= 0 and every extra y-condition?

    ``im`` must be affine in x and ``re`` at most quadratic in x.  Writing
    im = A(y) + B(y) x, either B(y) != 0 and x = -A/B, so everything becomes a
    sign condition in y after clearing B^2, or B(y) = A(y) = 0 and re must
    dip to <= 0 somewhere on [x0, x1].
    """
    x0, x1, y0, y1 = (Fraction(c) for c in window)
    ci = im.coeffs_in_x() + [Poly1()]
    if any(not p.is_zero() for p in ci[2:]):
        raise DomainError("imaginary part must be affine in x")
    A, B = ci[0], ci[1]
    cr = re.coeffs_in_x() + [Poly1()] * 2
    if any(not p.is_zero() for p in cr[3:]):
        raise DomainError("real part must be at most quadratic in x")
    ga, be, al = cr[0], cr[1], cr[2]
    extra = list(extra)
    X0, X1 = Poly1([x0]), Poly1([x1])
    generic = extra + [
        (B, "!="),
        ((Poly1() - A - X0 * B) * B, ">="),
        ((A + X1 * B) * B, ">="),
        (al * A * A - be * A * B + ga * B * B, "<="),
    ]
    if feasible_on_interval(generic, y0, y1) is not None:
        return True
    flat = extra + [(B, "=="), (A, "==")]
    options = [
        [(re.restrict_x(x0), "<=")],
        [(re.restrict_x(x1), "<=")],
        [
            (al, ">"),
            (Poly1() - be - Poly1([2]) * al * X0, ">="),
            (Poly1([2]) * al * X1 + be, ">="),
            (Poly1([4]) * al * ga - be * be, "<="),
        ],
    ]
    return any(feasible_on_interval(flat + opt, y0, y1) is not None for opt in options)


def _hole_wall(cfg: SurfaceConfig, slc: Slice2D, delta: MukaiVector) -> Wall:
    re, im = slc.charge_polys(cfg, delta)
    sides = [(re, "<=")] + [(_y_poly2(p), rel) for p, rel in _ample_constraints(cfg, slc)]
    return Wall(WallKind.HOLE, delta, None, im, (tuple(sides),))


def hole_walls(cfg: SurfaceConfig, slc: Slice2D, search_depth=None, grid: int = POLYLINE_GRID,
               bits: int = POLYLINE_BITS) -> list[Wall]:
    """Every hole boundary H(delta) meeting the window, sorted by delta.

    On H(delta), u = delta - r beta is orthogonal to omega, so -u^2 >= 0 and
    Re Z(delta) <= 0 forces r^2 w^2 <= 2 - (-u^2) <= 2.  That bounds r, then
    u coordinatewise, and s = (delta^2 + 2) / 2r must be integral.  Each
    survivor is then decided exactly.  ``search_depth`` caps the rank searched;
    a cap below the certified bound raises :class:`EnumerationCapError`.
    """
    slc.validate(cfg)
    if cfg.is_abelian:
        return []
    x0, x1, y0, y1 = slc.window
    w2 = slc.omega_square_min(cfg)
    rmax = _sqrt_floor(Fraction(2) / w2)
    if search_depth is not None and rmax > Fraction(search_depth):
        raise EnumerationCapError(
            f"hole search needs rank up to {rmax}, above search_depth {search_depth}",
            required=rmax, cap=search_depth,
        )
    rho = cfg.rank
    Ginv = _inverse(cfg.ns_gram)
    om0, om1 = slc.omega(y0), slc.omega(y1)
    weight = [2 * max(Fraction(om0[i]) ** 2, Fraction(om1[i]) ** 2) / w2 - Ginv[i][i] for i in range(rho)]
    be0, be1 = slc.beta(x0), slc.beta(x1)
    amp = _ample_constraints(cfg, slc)
    out = []
    for r in range(1, rmax + 1):
        budget = 2 - r * r * w2
        if budget < 0:
            continue
        ranges = []
        for i in range(rho):
            U = _sqrt_floor(budget * weight[i]) + 1
            lo = min(r * be0[i], r * be1[i]) - U
            hi = max(r * be0[i], r * be1[i]) + U
            ranges.append(range(_ceil(Fraction(lo)), Fraction(hi).__floor__() + 1))
        for d in itertools.product(*ranges):
            num = cfg.square(d) + 2
            if num % (2 * r):
                continue
            delta = MukaiVector(r, d, num // (2 * r))
            re, im = slc.charge_polys(cfg, delta)
            if hole_meets_window(re, im, amp, slc.window):
                out.append(_hole_wall(cfg, slc, delta))
    out.sort(key=lambda w: w.witness)
    _attach_segments(out, slc.window, grid, bits, jobs=1)
    return out


# ----------------------------------------------------------------------------
# numerical walls


def _sign_is_constant(p: Poly2, window, depth: int = 2) -> bool:
    """Certified: p has a constant nonzero sign on the closed window."""
    sgn = None
    stack = [(tuple(window), 0)]
    while stack:
        (a, b, c, d), level = stack.pop()
        lo, hi = p.range_bound(a, b, c, d)
        if lo > 0 or hi < 0:
            s = 1 if lo > 0 else -1
            if sgn is None:
                sgn = s
            elif s != sgn:
                return False
            continue
        if level == depth:
            return False
        xm, ym = (a + b) / 2, (c + d) / 2
        stack += [((a, xm, c, ym), level + 1), ((xm, b, c, ym), level + 1),
                  ((a, xm, ym, d), level + 1), ((xm, b, ym, d), level + 1)]
    return sgn is not None


def _pow_range(lo, hi, k):
    if k == 0:
        return mpq(1), mpq(1)
    a, b = lo**k, hi**k
    if k % 2 == 0 and lo < 0 < hi:
        return mpq(0), max(a, b)
    return min(a, b), max(a, b)


def _binomials(n):
    rows = [[1]]
    for _ in range(n):
        prev = rows[-1]
        rows.append([1] + [prev[k] + prev[k + 1] for k in range(len(prev) - 1)] + [1])
    return rows


_BINOM = _binomials(8)


class _IntervalPoly:
    """Rigorous enclosures of a Poly2 over mpq boxes.

    The natural interval extension is intersected with the centred form
    (expansion about the box centre); both have exact rational endpoints.
    """

    def __init__(self, p: Poly2):
        self.terms = [(i, j, mpq(c)) for (i, j), c in p.terms.items()]

    def _natural(self, x0, x1, y0, y1):
        lo = hi = mpq(0)
        for i, j, c in self.terms:
            xa, xb = _pow_range(x0, x1, i)
            ya, yb = _pow_range(y0, y1, j)
            prods = (xa * ya, xa * yb, xb * ya, xb * yb)
            a, b = min(prods) * c, max(prods) * c
            if c < 0:
                a, b = b, a
            lo += a
            hi += b
        return lo, hi

    def _centred(self, x0, x1, y0, y1):
        cx, hx = (x0 + x1) / 2, (x1 - x0) / 2
        cy, hy = (y0 + y1) / 2, (y1 - y0) / 2
        q: dict = {}
        for i, j, c in self.terms:
            for k in range(i + 1):
                ak = c * _BINOM[i][k] * cx ** (i - k) * hx**k
                for l in range(j + 1):
                    key = (k, l)
                    q[key] = q.get(key, 0) + ak * _BINOM[j][l] * cy ** (j - l) * hy**l
        lo = hi = mpq(q.pop((0, 0), 0))
        for (k, l), a in q.items():
            if k % 2 == 0 and l % 2 == 0:
                if a > 0:
                    hi += a
                else:
                    lo += a
            else:
                lo -= abs(a)
                hi += abs(a)
        return lo, hi

    def range(self, x0, x1, y0, y1):
        a, b = self._natural(x0, x1, y0, y1)
        c, d = self._centred(x0, x1, y0, y1)
        return max(a, c), min(b, d)


_MAYBE = {
    "<": lambda lo, hi: lo < 0,
    "<=": lambda lo, hi: lo <= 0,
    ">": lambda lo, hi: hi > 0,
    ">=": lambda lo, hi: hi >= 0,
}


def _maybe_active(locus: Poly2, side_sets, window, depth: int = 6) -> bool:
    """False only when the wall is proven empty on the window: on every box of a
    subdivision either the locus keeps a strict sign or each side set has a
    condition that fails throughout the box."""
    f = _IntervalPoly(locus)
    sides = [[(_IntervalPoly(p), rel) for p, rel in ss] for ss in side_sets]
    stack = [(tuple(mpq(Fraction(c)) for c in window), 0)]
    while stack:
        (a, b, c, d), level = stack.pop()
        lo, hi = f.range(a, b, c, d)
        if lo > 0 or hi < 0:
            continue
        live = [ss for ss in sides if all(_MAYBE[rel](*g.range(a, b, c, d)) for g, rel in ss)]
        if not live:
            continue
        if level == depth:
            return True
        xm, ym = (a + b) / 2, (c + d) / 2
        nxt = level + 1
        stack += [((a, xm, c, ym), nxt), ((xm, b, c, ym), nxt), ((a, xm, ym, d), nxt), ((xm, b, ym, d), nxt)]
    return False


def numerical_walls(cfg: SurfaceConfig, slc: Slice2D, v: MukaiVector, cap: int = DEFAULT_CAP, depth: int = 6,
                    grid: int = POLYLINE_GRID, bits: int = POLYLINE_BITS, jobs: int = 1) -> list[Wall]:
    """Numerical walls for v on the window, one per locus, sorted by witness.

    Locus: Im(Z(v) conj Z(w)) = 0.  Active where Re(Z(w) conj Z(v)) > 0 and
    Re(Z(v - w) conj Z(v)) > 0.  The pair {w, v - w} is reported once with
    witness max(w, v - w).  Loci proven to keep one sign on the window,
    pairs proven inactive on it, and classes with Z(w) parallel to Z(v)
    everywhere are dropped.
    """
    cands = wall_candidates(cfg, slc, v, cap=cap, depth=depth)
    re_v, im_v = slc.charge_polys(cfg, v)
    norm_v = re_v * re_v + im_v * im_v
    seen = set()
    groups: dict = {}
    for w in cands:
        u = v - w
        witness, partner = max(w, u), min(w, u)
        if witness in seen:
            continue
        seen.add(witness)
        re_w, im_w = slc.charge_polys(cfg, witness)
        locus = im_v * re_w - re_v * im_w
        if locus.is_zero():
            continue
        along = re_w * re_v + im_w * im_v
        sides = ((along, ">"), (norm_v - along, ">"))
        key = tuple(locus.primitive().dense())
        groups.setdefault(key, []).append((witness, partner, locus, sides))
    walls = []
    for key in sorted(groups):
        members = groups[key]
        if _sign_is_constant(members[0][2], slc.window):
            continue
        members = [m for m in members if _maybe_active(m[2], (m[3],), slc.window)]
        if not members:
            continue
        members.sort(key=lambda m: m[0])
        w, p, locus, sides = members[0]
        wall = Wall(WallKind.NUMERICAL, w, p, locus, tuple(m[3] for m in members))
        wall.others = [(m[0], m[1]) for m in members[1:]]
        walls.append(wall)
    walls.sort(key=lambda wl: (wl.witness, wl.partner))
    _attach_segments(walls, slc.window, grid, bits, jobs)
    return walls


# ----------------------------------------------------------------------------
# sampled polylines


def _bisect(f, p, q, sp, bits):
    """Shrink [p, q] around a sign change of f to width 2^-bits of the edge; return the midpoint."""
    for _ in range(bits):
        m = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        sm = mpq_sign(f(*m))
        if sm == 0:
            return m
        if sm == sp:
            p = m
        else:
            q = m
    return ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)


def trace_locus(locus: Poly2, side_sets, window, grid: int = POLYLINE_GRID, bits: int = POLYLINE_BITS):
    """Marching squares on a grid x grid partition of the window.

    Returns (polylines, tolerance); polylines are lists of rational points.
    Segments whose midpoint fails every side set are discarded.
    """
    f = locus.compiled()
    x0, x1, y0, y1 = (mpq(Fraction(c)) for c in window)
    xs = [x0 + (x1 - x0) * i / grid for i in range(grid + 1)]
    ys = [y0 + (y1 - y0) * j / grid for j in range(grid + 1)]
    sg = [[mpq_sign(f(x, y)) for y in ys] for x in xs]
    segs = []
    for i in range(grid + 1):
        for j in range(grid + 1):
            for di, dj in ((1, 0), (0, 1)):
                a, b = i + di, j + dj
                if a > grid or b > grid:
                    continue
                if sg[i][j] == 0 and sg[a][b] == 0:
                    m = ((xs[i] + xs[a]) / 2, (ys[j] + ys[b]) / 2)
                    if mpq_sign(f(*m)) == 0:
                        segs.append(((xs[i], ys[j]), (xs[a], ys[b])))
    for i in range(grid):
        for j in range(grid):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            pts = []
            for k in range(4):
                (ai, aj), (bi, bj) = corners[k], corners[(k + 1) % 4]
                sa, sb = sg[ai][aj], sg[bi][bj]
                if sa == 0 and sb == 0:
                    continue
                pa, pb = (xs[ai], ys[aj]), (xs[bi], ys[bj])
                if sa == 0:
                    pt = pa
                elif sb != 0 and sa != sb:
                    pt = _bisect(f, pa, pb, sa, bits)
                else:
                    continue
                if pt not in pts:
                    pts.append(pt)
            for k in range(0, len(pts) - 1, 2):
                segs.append((pts[k], pts[k + 1]))
    checks = [[(p.compiled(), rel) for p, rel in sides] for sides in side_sets]

    def active(seg):
        m = ((seg[0][0] + seg[1][0]) / 2, (seg[0][1] + seg[1][1]) / 2)
        return any(all(_REL[rel](mpq_sign(g(*m))) for g, rel in cs) for cs in checks)

    segs = sorted({tuple(sorted(s)) for s in segs if s[0] != s[1] and active(s)})
    tol = Fraction(max(x1 - x0, y1 - y0)) / grid / 2**bits
    polylines = [[(Fraction(p[0]), Fraction(p[1])) for p in line] for line in _chain(segs)]
    return polylines, tol


def _chain(segs):
    adj: dict = {}
    for k, (p, q) in enumerate(segs):
        adj.setdefault(p, []).append(k)
        adj.setdefault(q, []).append(k)
    used = [False] * len(segs)
    lines = []

    def walk(start):
        line = [start]
        cur = start
        while True:
            nxt = next((k for k in adj[cur] if not used[k]), None)
            if nxt is None:
                return line
            used[nxt] = True
            p, q = segs[nxt]
            cur = q if p == cur else p
            line.append(cur)

    for p in sorted(adj, key=lambda p: (len(adj[p]) == 2, p)):
        if any(not used[k] for k in adj[p]):
            lines.append(walk(p))
    return lines


def _trace_job(args):
    locus, side_sets, window, grid, bits = args
    return trace_locus(locus, side_sets, window, grid, bits)


def _attach_segments(walls: list[Wall], window, grid: int, bits: int, jobs: int):
    if not walls or grid <= 0:
        return
    args = [(w.locus, w.side_sets, window, grid, bits) for w in walls]
    if jobs > 1 and len(walls) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_trace_job, args, chunksize=max(1, len(args) // (4 * jobs))))
    else:
        results = [_trace_job(a) for a in args]
    for w, (lines, tol) in zip(walls, results):
        w.segments, w.tolerance = lines, tol


# ----------------------------------------------------------------------------
# chambers


@dataclass
class ChamberMap:
    """Cell labels on a grid x grid partition; -1 marks cells a wall passes through.

    ``labels[j][i]`` is the cell with x index i and y index j.  Chambers are
    numbered in scan order (y rows upwards, x left to right).
    """

    window: tuple
    grid: int
    labels: list
    fingerprints: list

    @property
    def n_chambers(self) -> int:
        return len(self.fingerprints)

    def label_at(self, x, y) -> int:
        x0, x1, y0, y1 = self.window
        i = min(int((Fraction(x) - x0) / (x1 - x0) * self.grid), self.grid - 1)
        j = min(int((Fraction(y) - y0) / (y1 - y0) * self.grid), self.grid - 1)
        return self.labels[j][i]


def chamber_sample(walls: Sequence[Wall], window, grid: int = 16) -> ChamberMap:
    """Label grid cells by the sign vector of every distinct wall polynomial.

    A cell whose corners disagree in strict sign with its centre is split once;
    it keeps a label only if its four quarters agree, else it is a boundary
    cell.  Equal adjacent cells are merged into chambers.
    """
    window = tuple(Fraction(c) for c in window)
    x0, x1, y0, y1 = window
    polys = {}
    for w in walls:
        polys.setdefault(w.key, w.locus.compiled())
    fs = [polys[k] for k in sorted(polys)]
    mx0, mx1, my0, my1 = (mpq(c) for c in window)

    def signs(x, y):
        return tuple(mpq_sign(f(x, y)) for f in fs)

    def classify(a, b, c, d):
        centre = signs((a + b) / 2, (c + d) / 2)
        if 0 in centre:
            return None
        for x, y in ((a, c), (b, c), (a, d), (b, d)):
            corner = signs(x, y)
            if any(s * t < 0 for s, t in zip(corner, centre)):
                return None
        return centre

    hx, hy = (mx1 - mx0) / grid, (my1 - my0) / grid
    prints = [[None] * grid for _ in range(grid)]
    for j in range(grid):
        for i in range(grid):
            a, b = mx0 + i * hx, mx0 + (i + 1) * hx
            c, d = my0 + j * hy, my0 + (j + 1) * hy
            fp = classify(a, b, c, d)
            if fp is None:
                xm, ym = (a + b) / 2, (c + d) / 2
                quarters = [classify(*q) for q in ((a, xm, c, ym), (xm, b, c, ym), (a, xm, ym, d), (xm, b, ym, d))]
                if quarters[0] is not None and all(q == quarters[0] for q in quarters):
                    fp = quarters[0]
            prints[j][i] = fp
    labels = [[-1] * grid for _ in range(grid)]
    fingerprints = []
    for j in range(grid):
        for i in range(grid):
            if prints[j][i] is None or labels[j][i] != -1:
                continue
            cid = len(fingerprints)
            fingerprints.append(prints[j][i])
            labels[j][i] = cid
            queue = deque([(i, j)])
            while queue:
                ci, cj = queue.popleft()
                for ni, nj in ((ci + 1, cj), (ci - 1, cj), (ci, cj + 1), (ci, cj - 1)):
                    if 0 <= ni < grid and 0 <= nj < grid and labels[nj][ni] == -1 and prints[nj][ni] == prints[j][i]:
                        labels[nj][ni] = cid
                        queue.append((ni, nj))
    return ChamberMap(window, grid, labels, fingerprints)
