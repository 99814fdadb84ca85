"""Twisted slopes and the large volume limit omega -> n omega.

For r > 0:  mu = (c1 - r beta).omega / r,  nu = (s - c1.beta) / r, and

    Z_n(E)/r(E) - Z_n(A)/r(A) = -(nu(E) - nu(A)) + i n (mu(E) - mu(A)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .charge import GaussianRational, Order, TubeDomainPoint, arg_compare, charge_star
from .errors import DegenerateChargeError, DomainError
from .lattice import MukaiVector, SurfaceConfig

__all__ = [
    "PLUS_INFINITY",
    "TwistedSlopes",
    "twisted_slopes",
    "twisted_leq",
    "asymptotic_phase_class",
    "large_volume_gap",
    "phase_order_threshold",
]


class _PlusInfinity:
    """Slope marker for torsion classes."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "+inf"

    __str__ = __repr__


PLUS_INFINITY = _PlusInfinity()


@dataclass(frozen=True)
class TwistedSlopes:
    mu: object  # Fraction, or PLUS_INFINITY when r = 0
    nu: object  # Fraction, or None when r = 0

    @property
    def finite(self) -> bool:
        return self.mu is not PLUS_INFINITY


def _require_rational(p: TubeDomainPoint):
    for c in (*p.beta, *p.omega):
        if not isinstance(c, (int, Fraction)):
            raise DomainError("twisted slopes need rational beta and omega")


def twisted_slopes(cfg: SurfaceConfig, v: MukaiVector, p: TubeDomainPoint) -> TwistedSlopes:
    _require_rational(p)
    if v.r == 0:
        return TwistedSlopes(PLUS_INFINITY, None)
    u = tuple(d - v.r * b for d, b in zip(v.delta, p.beta))
    mu = Fraction(cfg.dot(u, p.omega)) / v.r
    nu = Fraction(v.s - cfg.dot(v.delta, p.beta)) / v.r
    return TwistedSlopes(mu, nu)


def twisted_leq(a: TwistedSlopes, e: TwistedSlopes) -> bool:
    """mu(A) < mu(E), or mu equal and nu(A) <= nu(E)."""
    if not (a.finite and e.finite):
        raise DomainError("twisted comparison is only defined for positive rank")
    return a.mu < e.mu or (a.mu == e.mu and a.nu <= e.nu)


def asymptotic_phase_class(cfg: SurfaceConfig, v: MukaiVector, p: TubeDomainPoint) -> Fraction:
    """lim (1/pi) arg Z_n: 0 for full support, 1/2 for curves, 1 for points."""
    if v.r > 0:
        return Fraction(0)
    if v.r == 0 and any(c != 0 for c in v.delta):
        if cfg.dot(v.delta, p.omega) > 0:
            return Fraction(1, 2)
        raise DomainError(f"{v}: a dimension-one class needs c1.omega > 0")
    if v.r == 0 and v.s > 0:
        return Fraction(1)
    raise DomainError(f"{v} is not the class of a sheaf: need r > 0, or r = 0 with c1.omega > 0, or r = c1 = 0 < s")


def _gap_from_charges(cfg, vE, vA, p, n) -> GaussianRational:
    q = p.scaled(n)
    zE, zA = charge_star(cfg, q, vE), charge_star(cfg, q, vA)
    return GaussianRational(
        Fraction(zE.re) / vE.r - Fraction(zA.re) / vA.r, Fraction(zE.im) / vE.r - Fraction(zA.im) / vA.r
    )


def large_volume_gap(cfg: SurfaceConfig, vE: MukaiVector, vA: MukaiVector, p: TubeDomainPoint, n) -> GaussianRational:
    """Z_n(E)/r(E) - Z_n(A)/r(A), computed from the charges and from the slopes; both must agree."""
    if vE.r <= 0 or vA.r <= 0:
        raise DomainError("the large volume gap needs two classes of positive rank")
    n = Fraction(n)
    if not n > 0:
        raise DomainError("n must be positive")
    sE, sA = twisted_slopes(cfg, vE, p), twisted_slopes(cfg, vA, p)
    by_slopes = GaussianRational(-(sE.nu - sA.nu), n * (sE.mu - sA.mu))
    by_charges = _gap_from_charges(cfg, vE, vA, p, n)
    if by_slopes != by_charges:
        raise AssertionError(f"gap mismatch: {by_slopes} vs {by_charges}")
    return by_slopes


def phase_order_threshold(cfg: SurfaceConfig, vE: MukaiVector, vA: MukaiVector, p: TubeDomainPoint,
                          n_max: int) -> int | None:
    """Least integer n0 <= n_max with arg Z_n(A) <= arg Z_n(E) for every integer n in [n0, n_max]."""
    if vE.r <= 0 or vA.r <= 0:
        raise DomainError("thresholds need two classes of positive rank")
    if not twisted_slopes(cfg, vE, p).mu > 0:
        raise DomainError("thresholds need mu(E) > 0")
    if n_max < 1:
        raise DomainError("n_max must be at least 1")

    def ok(n):
        q = p.scaled(n)
        try:
            return arg_compare(charge_star(cfg, q, vA), charge_star(cfg, q, vE)) <= Order.EQUAL
        except DegenerateChargeError:
            return False

    n0 = None
    for n in range(n_max, 0, -1):
        if not ok(n):
            break
        n0 = n
    return n0
