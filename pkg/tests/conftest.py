import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from k3stab.charge import tube_point
from k3stab.lattice import MukaiVector, degree_2n_k3, elliptic_k3_with_section, principally_polarized_abelian

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DEG2 = degree_2n_k3(1)
RANK2 = elliptic_k3_with_section()
ABELIAN = principally_polarized_abelian()

ACCEPTANCE: dict = {}


def rand_q(rng, num=6, den=4):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_vector(rng, cfg, bound=5):
    return MukaiVector(rng.randint(-bound, bound), tuple(rng.randint(-bound, bound) for _ in range(cfg.rank)),
                       rng.randint(-bound, bound))


def rand_ample(rng, cfg, min_square=None):
    """Random rational ample class; ample means positive square, positive on H and the listed curves."""
    while True:
        w = tuple(Fraction(rng.randint(-6, 12), rng.randint(1, 4)) for _ in range(cfg.rank))
        if cfg.square(w) <= 0 or cfg.dot(w, cfg.ample_class) <= 0:
            continue
        if any(cfg.dot(w, c) <= 0 for c in cfg.minus_two_curves):
            continue
        if min_square is not None and not cfg.square(w) > min_square:
            continue
        return w


def rand_point(rng, cfg, min_square=None):
    beta = tuple(rand_q(rng) for _ in range(cfg.rank))
    return tube_point(cfg, beta, rand_ample(rng, cfg, min_square))


@pytest.fixture
def rng():
    return random.Random(20261019)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, secs, limit, label = ACCEPTANCE[key]
        lim = f" (limit {limit} s)" if limit else ""
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key:2d}. {label}: {secs:.2f} s{lim}")
