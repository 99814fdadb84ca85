from fractions import Fraction

import pytest
from conftest import DEG2, RANK2
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from k3stab.charge import charge_star
from k3stab.errors import EnumerationCapError
from k3stab.lattice import MukaiVector, degree_2n_k3
from k3stab.poly import MONOMIALS_DEG4, Poly2
from k3stab.walls import (
    WallKind,
    _IntervalPoly,
    _maybe_active,
    chamber_sample,
    default_slice,
    hole_walls,
    numerical_walls,
)

DEFAULT = (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(2))


def _hole_oracle(n, window):
    """Degree-2n K3 on beta = xH, omega = yH.

    A root (r, d, s) with r > 0 has s = (n d^2 + 1) / r; Im Z vanishes on x = d/r,
    where Re Z = (n r^2 y^2 - 1) / r, so the hole is x = d/r, n r^2 y^2 <= 1.
    """
    x0, x1, y0, _ = window
    out = set()
    r = 1
    while n * r * r * y0 * y0 <= 1:
        for d in range((r * x0).__floor__() - 1, (r * x1).__ceil__() + 2):
            if x0 <= Fraction(d, r) <= x1 and (n * d * d + 1) % r == 0:
                out.add(MukaiVector(r, (d,), (n * d * d + 1) // r))
        r += 1
    return out


@pytest.mark.parametrize("n, window", [
    (1, DEFAULT),
    (1, (Fraction(-1), Fraction(2), Fraction(1, 10), Fraction(3))),
    (2, (Fraction(-1, 3), Fraction(1, 2), Fraction(1, 12), Fraction(1))),
    (3, (0, Fraction(1, 4), Fraction(1, 9), Fraction(1))),
])
def test_hole_walls_match_analytic_oracle(n, window):
    cfg = degree_2n_k3(n)
    walls = hole_walls(cfg, default_slice(cfg, window))
    assert {w.witness for w in walls} == _hole_oracle(n, window)
    assert all(w.kind is WallKind.HOLE and w.partner is None for w in walls)


def test_hole_restriction_is_exact():
    walls = {w.witness: w for w in hole_walls(DEG2, default_slice(DEG2, (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 10), 3)))}
    (iv,) = walls[MukaiVector(2, (1,), 1)].restrict_x(Fraction(1, 2), 0, 3)
    assert (iv.lo, iv.lo_closed, iv.hi, iv.hi_closed) == (0, False, Fraction(1, 2), True)
    w = walls[MukaiVector(1, (0,), 1)]
    assert w.is_active_at(0, Fraction(1, 2)) and w.is_active_at(0, 1)
    assert not w.is_active_at(0, Fraction(3, 2)) and not w.is_active_at(Fraction(1, 10), Fraction(1, 2))
    assert w.restrict_x(Fraction(1, 3), 0, 3) == []


def test_hole_search_depth_cap():
    slc = default_slice(DEG2, (0, 1, Fraction(1, 10), 1))
    with pytest.raises(EnumerationCapError):
        hole_walls(DEG2, slc, search_depth=3)
    assert hole_walls(DEG2, slc, search_depth=20)


def _near_zero(locus, x, y, tol):
    lo, hi = locus.range_bound(x - tol, x + tol, y - tol, y + tol)
    return lo <= 0 <= hi


def test_polyline_vertices_lie_on_wall():
    slc = default_slice(DEG2, DEFAULT)
    walls = hole_walls(DEG2, slc) + numerical_walls(DEG2, slc, MukaiVector(0, (0,), 1))
    x0, x1, y0, y1 = DEFAULT
    for w in walls:
        for line in w.segments:
            for x, y in line:
                assert x0 <= x <= x1 and y0 <= y <= y1
                assert _near_zero(w.locus, x, y, w.tolerance)


def test_numerical_walls_for_skyscraper():
    slc = default_slice(DEG2, DEFAULT)
    holes = hole_walls(DEG2, slc)
    num = numerical_walls(DEG2, slc, MukaiVector(0, (0,), 1))
    # Z(0,0,1) = -1, so the numerical locus of w is Im Z(w) = 0: every hole locus reappears
    assert {w.key for w in holes} <= {w.key for w in num}
    for w in num:
        assert w.witness + w.partner == MukaiVector(0, (0,), 1)
        assert w.witness > w.partner
    (w,) = [w for w in num if w.witness == MukaiVector(1, (0,), 1)]
    assert w.partner == MukaiVector(-1, (0,), 0)
    # on x = 0 the pieces are aligned: Z(1,0,1) = y^2 - 1 and Z(-1,0,0) = -y^2 have the phase of -1 for y < 1
    p = slc.point(0, Fraction(1, 2))
    zw, zv = charge_star(DEG2, p, w.witness), charge_star(DEG2, p, MukaiVector(0, (0,), 1))
    assert zw.im == 0 and zw.re * zv.re > 0
    assert w.is_active_at(0, Fraction(1, 2)) and not w.is_active_at(0, Fraction(3, 2))


def test_numerical_walls_jobs_agree():
    slc = default_slice(DEG2, DEFAULT)
    a = numerical_walls(DEG2, slc, MukaiVector(0, (0,), 1), jobs=1)
    b = numerical_walls(DEG2, slc, MukaiVector(0, (0,), 1), jobs=2)
    assert [(w.witness, w.partner, w.locus, w.segments) for w in a] == [(w.witness, w.partner, w.locus, w.segments) for w in b]


def test_rank2_slice_walls():
    slc = default_slice(RANK2, (0, Fraction(1, 4), Fraction(1, 2), 1))
    for w in numerical_walls(RANK2, slc, MukaiVector(1, (0, 0), 0)):
        assert w.witness + w.partner == MukaiVector(1, (0, 0), 0)
        for wit, par in w.others:
            assert wit + par == MukaiVector(1, (0, 0), 0)


def test_chambers_on_default_window():
    slc = default_slice(DEG2, DEFAULT)
    walls = hole_walls(DEG2, slc) + numerical_walls(DEG2, slc, MukaiVector(0, (0,), 1))
    ch = chamber_sample(walls, DEFAULT, grid=16)
    assert ch.n_chambers == 2
    assert ch.label_at(Fraction(-1, 4), 1) != ch.label_at(Fraction(1, 4), 1)
    assert ch.label_at(Fraction(-1, 4), 1) >= 0 and ch.label_at(Fraction(1, 4), Fraction(3, 2)) >= 0
    # x = 0 runs along a grid line, so the columns beside it carry the two labels
    assert all(ch.labels[j][7] != ch.labels[j][8] for j in range(16))
    shifted = chamber_sample(walls, (Fraction(-1, 3), Fraction(1, 2), Fraction(1, 2), 2), grid=16)
    assert shifted.n_chambers == 2
    assert any(lab == -1 for row in shifted.labels for lab in row)
    assert chamber_sample([], DEFAULT, grid=4).n_chambers == 1


small = st.fractions(min_value=-3, max_value=3, max_denominator=4)
poly2 = st.dictionaries(st.sampled_from(MONOMIALS_DEG4), small, max_size=7).map(Poly2)


@given(poly2, small, small, st.fractions(min_value=0, max_value=1, max_denominator=8),
       st.fractions(min_value=0, max_value=1, max_denominator=8))
def test_interval_poly_encloses(p, x0, y0, wx, wy):
    box = tuple(mpq(c) for c in (x0, x0 + wx, y0, y0 + wy))
    lo, hi = _IntervalPoly(p).range(*box)
    for i in range(4):
        for j in range(4):
            assert lo <= p(x0 + wx * i / 3, y0 + wy * j / 3) <= hi


def test_maybe_active_keeps_a_real_wall_and_drops_an_empty_one():
    x, y = Poly2.x(), Poly2.y()
    assert _maybe_active(x, (((y - Poly2.const(1), "<="),),), (-1, 1, 0, 2))
    # the line x = 0 with the side condition x > 1/2 is empty
    assert not _maybe_active(x, (((x - Poly2.const(Fraction(1, 2)), ">"),),), (-1, 1, 0, 2))
    # x^2 + y^2 + 1 never vanishes
    assert not _maybe_active(x * x + y * y + Poly2.const(1), ((),), (-1, 1, -1, 1))
