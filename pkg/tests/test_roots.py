import itertools
from fractions import Fraction

import pytest
from conftest import ABELIAN, DEG2, RANK2, rand_point

from k3stab.charge import charge_star
from k3stab.errors import DomainError, EnumerationCapError
from k3stab.lattice import MukaiVector, exp_class, mukai_pairing
from k3stab.roots import (
    EnumerationQuery,
    brute_force_enumerate,
    certified_box,
    enumerate_bounded,
    majorant_matrix,
    wall_candidates,
)
from k3stab.walls import default_slice


def test_majorant_positive_definite(rng):
    # the majorant is positive definite on small integer vectors
    for cfg in (DEG2, RANK2):
        for _ in range(20):
            om = rand_point(rng, cfg).exp(cfg)
            M = majorant_matrix(cfg, om)
            n = len(M)
            for coords in itertools.product(range(-2, 3), repeat=n):
                if any(coords):
                    assert sum(coords[i] * M[i][j] * coords[j] for i in range(n) for j in range(n)) > 0


def test_exp_2ih_roots_golden():
    q = EnumerationQuery(exp_class(DEG2, (0,), (2,)), 5, -2, True, roots_only=True)
    got = enumerate_bounded(DEG2, q)
    assert got == [MukaiVector(1, (-1,), 2), MukaiVector(1, (0,), 1), MukaiVector(1, (1,), 2)]
    p = exp_class(DEG2, (0,), (2,))
    for v in got:
        z = p.pair(DEG2, v)
        assert z.abs2() <= 25 and mukai_pairing(DEG2, v, v) == -2


def test_enlarged_box_finds_nothing_new(rng):
    for cfg in (DEG2, RANK2):
        for m in (0, 1, 2):
            q = EnumerationQuery(rand_point(rng, cfg).exp(cfg), m, -2, False, roots_only=False)
            box, _ = certified_box(cfg, q)
            vol = 1
            for r in box.radii:
                vol *= 2 * r + 3
            if vol > 50000:
                continue
            assert enumerate_bounded(cfg, q) == brute_force_enumerate(cfg, q, radii=[r + 1 for r in box.radii])


def test_jobs_do_not_change_result():
    q = EnumerationQuery(exp_class(RANK2, (0, 0), (1, 3)), 3, -2, False)
    assert enumerate_bounded(RANK2, q, jobs=1) == enumerate_bounded(RANK2, q, jobs=3)


def test_cap_refuses_large_searches():
    q = EnumerationQuery(exp_class(DEG2, (0,), (Fraction(1, 20),)), 50, -2, False)
    with pytest.raises(EnumerationCapError) as exc:
        enumerate_bounded(DEG2, q, cap=1000)
    assert exc.value.required > 1000


def test_query_validation():
    om = exp_class(DEG2, (0,), (1,))
    with pytest.raises(DomainError):
        EnumerationQuery(om, -1)
    with pytest.raises(DomainError):
        EnumerationQuery(om, 1, norm_floor=-4)
    assert enumerate_bounded(ABELIAN, EnumerationQuery(exp_class(ABELIAN, (0,), (1,)), 5, roots_only=True)) == []


def _sampled_candidates(cfg, slc, v, radii, n=4):
    """Every w in a box with both squares >= -2 and |Z(w)| <= |Z(v)| at some grid point."""
    x0, x1, y0, y1 = slc.window
    pts = [slc.point(x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n) for i in range(n + 1) for j in range(n + 1)]
    zv = [charge_star(cfg, p, v).abs2() for p in pts]
    out = set()
    for coords in itertools.product(*(range(-r, r + 1) for r in radii)):
        w = MukaiVector.from_coords(coords)
        if w.is_zero() or w == v:
            continue
        if mukai_pairing(cfg, w, w) < -2 or mukai_pairing(cfg, v - w, v - w) < -2:
            continue
        if any(charge_star(cfg, p, w).abs2() <= z for p, z in zip(pts, zv)):
            out.add(w)
    return out


@pytest.mark.parametrize("cfg, window, v, radii", [
    (DEG2, (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), 2), MukaiVector(0, (0,), 1), (6, 8, 8)),
    (DEG2, (0, 1, Fraction(1, 3), 1), MukaiVector(1, (0,), 0), (6, 8, 8)),
    (RANK2, (0, Fraction(1, 4), Fraction(1, 2), 1), MukaiVector(1, (0, 0), 0), (4, 5, 5, 5)),
])
def test_wall_candidates_contain_sampled_oracle(cfg, window, v, radii):
    slc = default_slice(cfg, window)
    cands = set(wall_candidates(cfg, slc, v))
    oracle = _sampled_candidates(cfg, slc, v, radii)
    assert oracle <= cands
    assert v not in cands and MukaiVector.from_coords([0] * cfg.lattice_rank) not in cands


def test_wall_candidates_reject_zero_class():
    slc = default_slice(DEG2, (0, 1, 1, 2))
    with pytest.raises(DomainError):
        wall_candidates(DEG2, slc, MukaiVector(0, (0,), 0))
