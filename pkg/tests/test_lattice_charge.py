import cmath
import random
from fractions import Fraction

import pytest
from conftest import DEG2, RANK2, rand_point, rand_vector
from hypothesis import given
from hypothesis import strategies as st

from k3stab.charge import (
    GaussianRational,
    Order,
    PhaseToken,
    arg_compare,
    central_charge,
    charge_star,
    phase_compare,
    tube_point,
)
from k3stab.errors import ConfigError, DegenerateChargeError, DomainError
from k3stab.lattice import (
    MukaiVector,
    SurfaceConfig,
    SurfaceType,
    exp_class,
    is_primitive,
    is_spherical,
    mukai_pairing,
    principally_polarized_abelian,
    twist_by_exp,
)

ints = st.integers(-20, 20)


def vectors(cfg):
    return st.builds(lambda r, d, s: MukaiVector(r, tuple(d), s), ints, st.lists(ints, min_size=cfg.rank,
                                                                                  max_size=cfg.rank), ints)


@pytest.mark.parametrize("gram, ample", [
    (((1,),), (1,)),             # odd diagonal
    (((-2,),), (1,)),            # wrong signature
    (((2, 1), (0, 2)), (1, 0)),  # not symmetric
    (((2, 0), (0, 2)), (1, 0)),  # signature (2, 0)
    (((-2, 1), (1, 0)), (1, 0)),  # H^2 < 0
])
def test_bad_configs_rejected(gram, ample):
    with pytest.raises(ConfigError):
        SurfaceConfig(SurfaceType.K3, gram, ample)


def test_mukai_gram_and_spherical():
    assert DEG2.mukai_gram() == ((0, 0, -1), (0, 2, 0), (-1, 0, 0))
    assert is_spherical(DEG2, MukaiVector(1, (0,), 1))
    assert is_spherical(RANK2, MukaiVector(0, (1, 0), 0))
    assert not is_spherical(principally_polarized_abelian(), MukaiVector(1, (0,), 1))
    assert is_primitive(MukaiVector(2, (1,), 4)) and not is_primitive(MukaiVector(2, (2,), 4))
    with pytest.raises(DomainError):
        is_primitive(MukaiVector(0, (0,), 0))


@given(vectors(RANK2), vectors(RANK2), st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_twist_is_isometry(v, w, ell):
    assert mukai_pairing(RANK2, twist_by_exp(RANK2, v, ell), twist_by_exp(RANK2, w, ell)) == mukai_pairing(RANK2, v, w)
    back = tuple(-c for c in ell)
    assert twist_by_exp(RANK2, twist_by_exp(RANK2, v, ell), back) == v


def test_exp_class_is_isotropic(rng):
    for cfg in (DEG2, RANK2):
        for _ in range(50):
            p = rand_point(rng, cfg)
            om = p.exp(cfg)
            assert om.self_pairing(cfg).is_zero()
            assert om.hermitian(cfg) > 0
            assert om.re.r == 1 and om.im.r == 0


def test_charge_examples():
    p = tube_point(DEG2, (0,), (1,))
    assert charge_star(DEG2, p, MukaiVector(1, (0,), 1)) == GaussianRational(0, 0)
    assert charge_star(DEG2, p, MukaiVector(1, (0,), 0)) == GaussianRational(1, 0)
    assert charge_star(DEG2, p, MukaiVector(0, (1,), 0)) == GaussianRational(0, 2)
    assert charge_star(DEG2, p, MukaiVector(0, (0,), 1)) == GaussianRational(-1, 0)
    with pytest.raises(DomainError):
        tube_point(RANK2, (0, 0), (0, 1))


def _arg(z):
    return cmath.phase(complex(float(z.re), float(z.im)))


def test_phase_comparisons_against_floats():
    rng = random.Random(4)
    for _ in range(2000):
        z1 = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 3)), Fraction(rng.randint(-9, 9), 2))
        z2 = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 3)), Fraction(rng.randint(-9, 9), 2))
        if z1.is_zero() or z2.is_zero():
            with pytest.raises(DegenerateChargeError):
                arg_compare(z1, z2)
            continue
        a1, a2 = _arg(z1), _arg(z2)
        got = arg_compare(z1, z2)
        if abs(a1 - a2) > 1e-12:
            assert got == (Order.LESS if a1 < a2 else Order.GREATER)
        else:
            assert got == Order.EQUAL
        half = [z for z in (z1, z2) if z.im > 0 or (z.im == 0 and z.re < 0)]
        if len(half) == 2:
            assert phase_compare(z1, z2) == got


def test_phase_tokens():
    assert PhaseToken(GaussianRational(-3, 0)).value == 1
    assert PhaseToken(GaussianRational(0, 2)).value == Fraction(1, 2)
    assert PhaseToken(GaussianRational(1, 1)) < PhaseToken(GaussianRational(0, 1)) < PhaseToken(GaussianRational(-1, 0))
    with pytest.raises(DomainError):
        PhaseToken(GaussianRational(1, -1))


def test_charge_star_on_random_classes(rng):
    for _ in range(300):
        cfg = rng.choice([DEG2, RANK2])
        p = rand_point(rng, cfg)
        v = rand_vector(rng, cfg, 30)
        assert charge_star(cfg, p, v) == central_charge(cfg, exp_class(cfg, p.beta, p.omega), v)
