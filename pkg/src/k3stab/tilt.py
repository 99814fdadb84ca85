"""Numerical side of the tilted heart A(beta, omega).

A mock sheaf is a list of Harder-Narasimhan factors (torsion first, then
torsion-free factors of strictly decreasing slope).  The torsion pair is cut
at slope beta.omega; F-factors sit in the heart shifted by one, so their
charge is negated.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .charge import GaussianRational, PhaseToken, TubeDomainPoint, charge_star
from .errors import DegenerateChargeError, DomainError
from .lattice import MukaiVector, SurfaceConfig
from .regions import L_WITNESS_BOUND, is_ample

__all__ = [
    "FactorKind",
    "HeartPosition",
    "MockSheaf",
    "StabilityCheck",
    "slope",
    "torsion_pair_split",
    "heart_phase",
    "check_stability_function",
]


class FactorKind(Enum):
    TORSION_DIM0 = "dim0"
    TORSION_DIM1 = "dim1"
    TORSION_FREE = "free"


class HeartPosition(Enum):
    IN_T = "T"
    IN_F_SHIFTED = "F[1]"


def slope(cfg: SurfaceConfig, v: MukaiVector, omega) -> Fraction:
    """mu_omega = c1.omega / r."""
    if v.r == 0:
        raise DomainError("slope needs positive rank")
    return Fraction(cfg.dot(v.delta, omega)) / v.r


@dataclass(frozen=True)
class MockSheaf:
    factors: tuple  # ((MukaiVector, FactorKind), ...)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((v, FactorKind(k)) for v, k in self.factors))

    def validate(self, cfg: SurfaceConfig, omega) -> None:
        seen_free = False
        last = None
        for v, kind in self.factors:
            if kind is FactorKind.TORSION_FREE:
                if v.r <= 0:
                    raise DomainError(f"torsion-free factor {v} needs r > 0")
                mu = slope(cfg, v, omega)
                if last is not None and not mu < last:
                    raise DomainError("torsion-free factors must have strictly decreasing slope")
                last, seen_free = mu, True
                continue
            if seen_free:
                raise DomainError("torsion factors must come before torsion-free ones")
            if kind is FactorKind.TORSION_DIM1:
                if v.r != 0 or all(c == 0 for c in v.delta) or not cfg.dot(v.delta, omega) > 0:
                    raise DomainError(f"dimension-one factor {v} needs r = 0 and c1.omega > 0")
            elif v.r != 0 or any(c != 0 for c in v.delta) or not v.s > 0:
                raise DomainError(f"dimension-zero factor {v} needs r = 0, c1 = 0, s > 0")

    def __len__(self):
        return len(self.factors)


def torsion_pair_split(cfg: SurfaceConfig, m: MockSheaf, p: TubeDomainPoint) -> tuple[MockSheaf, MockSheaf]:
    """(T-part, F-part): torsion and slopes > beta.omega go to T, the rest to F."""
    m.validate(cfg, p.omega)
    cut = cfg.dot(p.beta, p.omega)
    t, f = [], []
    for v, kind in m.factors:
        if kind is not FactorKind.TORSION_FREE or slope(cfg, v, p.omega) > cut:
            t.append((v, kind))
        else:
            f.append((v, kind))
    return MockSheaf(tuple(t)), MockSheaf(tuple(f))


def heart_phase(cfg: SurfaceConfig, v: MukaiVector, p: TubeDomainPoint, position: HeartPosition) -> PhaseToken:
    z = charge_star(cfg, p, v)
    if z.is_zero():
        raise DegenerateChargeError(f"Z({v}) = 0 at {p}; the heart has no phase for it")
    if HeartPosition(position) is HeartPosition.IN_F_SHIFTED:
        z = GaussianRational(-z.re, -z.im)
    return PhaseToken(z)


@dataclass(frozen=True)
class StabilityCheck:
    ok: bool
    witness: MukaiVector | None
    fast_path: bool
    checked: tuple  # roots with Im Z = 0 that were examined


def check_stability_function(cfg: SurfaceConfig, p: TubeDomainPoint, search_depth=None,
                             cap: int | None = None) -> StabilityCheck:
    """Is Z(delta) outside R_{<=0} for every delta in Delta+ ?

    A failing delta has Im Z = 0 and -1 <= Re Z <= 0, so the roots with
    |Z| <= max(1, search_depth) decide it.  With omega^2 > 2 the answer is
    yes outright; the enumerated roots are still checked and must agree.
    """
    from .roots import DEFAULT_CAP, EnumerationQuery, enumerate_bounded

    if not is_ample(cfg, p.omega):
        raise DomainError("stability check needs omega ample")
    fast = cfg.square(p.omega) > 2
    if cfg.is_abelian:
        return StabilityCheck(True, None, fast, ())
    bound = L_WITNESS_BOUND if search_depth is None else max(L_WITNESS_BOUND, Fraction(search_depth))
    omega_vec = p.exp(cfg)
    near = enumerate_bounded(
        cfg, EnumerationQuery(omega_vec, bound, -2, True, roots_only=True),
        cap=DEFAULT_CAP if cap is None else cap,
    )
    real = []
    witness = None
    for delta in near:
        z = charge_star(cfg, p, delta)
        if z.im == 0:
            real.append(delta)
            if z.re <= 0 and witness is None:
                witness = delta
    if fast and witness is not None:
        raise AssertionError(f"omega^2 > 2 yet Z({witness}) is real and <= 0")
    return StabilityCheck(witness is None, witness, fast, tuple(real))
