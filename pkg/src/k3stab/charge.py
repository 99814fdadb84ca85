"""Central charges Z(E) = (Omega, v(E)) and exact phase comparison.

Phases are never turned into real numbers.  Two charges in the upper
half-plane or on the negative real axis are ordered by the sign of
Im(z1 * conj(z2)), which is the sign of phi(z1) - phi(z2).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateChargeError, DomainError
from .lattice import MukaiVector, SurfaceConfig, mukai_pairing

__all__ = [
    "GaussianRational",
    "ComplexMukaiVector",
    "TubeDomainPoint",
    "Order",
    "PhaseToken",
    "central_charge",
    "charge_star",
    "phase_compare",
    "arg_compare",
    "tube_point",
]


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _div(a, b):
    """Exact quotient; keeps rationals rational and defers to Q(sqrt d) otherwise."""
    if isinstance(a, int) and isinstance(b, int):
        return _norm(Fraction(a, b))
    return _norm(a / b)


@dataclass(frozen=True)
class GaussianRational:
    re: object = 0
    im: object = 0

    def __add__(self, o):
        o = _as_gauss(o)
        return GaussianRational(_norm(self.re + o.re), _norm(self.im + o.im))

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_gauss(o)
        return GaussianRational(_norm(self.re - o.re), _norm(self.im - o.im))

    def __rsub__(self, o):
        return _as_gauss(o) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, o):
        o = _as_gauss(o)
        return GaussianRational(
            _norm(self.re * o.re - self.im * o.im), _norm(self.re * o.im + self.im * o.re)
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _as_gauss(o)
        n = o.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero charge")
        num = self * o.conjugate()
        return GaussianRational(_div(num.re, n), _div(num.im, n))

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = GaussianRational(o, 0)
        if not isinstance(o, GaussianRational):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __str__(self):
        if self.im == 0:
            return f"{self.re}"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


def _as_gauss(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x, 0)


@dataclass(frozen=True)
class ComplexMukaiVector:
    """Omega = re + i im in N(X) tensor C, with exact coordinates."""

    re: MukaiVector
    im: MukaiVector

    def pair(self, cfg: SurfaceConfig, v: MukaiVector) -> GaussianRational:
        return GaussianRational(_norm(mukai_pairing(cfg, self.re, v)), _norm(mukai_pairing(cfg, self.im, v)))

    def self_pairing(self, cfg: SurfaceConfig) -> GaussianRational:
        """(Omega, Omega), complex bilinear."""
        rr = mukai_pairing(cfg, self.re, self.re)
        ii = mukai_pairing(cfg, self.im, self.im)
        ri = mukai_pairing(cfg, self.re, self.im)
        return GaussianRational(_norm(rr - ii), _norm(2 * ri))

    def hermitian(self, cfg: SurfaceConfig):
        """(Omega, conj Omega) = (re, re) + (im, im)."""
        return mukai_pairing(cfg, self.re, self.re) + mukai_pairing(cfg, self.im, self.im)

    def scale(self, z) -> "ComplexMukaiVector":
        z = _as_gauss(z)
        re = self.re.scale(z.re) - self.im.scale(z.im)
        im = self.re.scale(z.im) + self.im.scale(z.re)
        return ComplexMukaiVector(re.normalized(), im.normalized())

    def conjugate(self) -> "ComplexMukaiVector":
        return ComplexMukaiVector(self.re, -self.im)

    @property
    def rank_component(self) -> GaussianRational:
        return GaussianRational(self.re.r, self.im.r)

    def __str__(self):
        return f"{self.re} + i{self.im}"


@dataclass(frozen=True)
class TubeDomainPoint:
    """beta + i omega with omega^2 > 0; build through :func:`tube_point` to validate."""

    beta: tuple
    omega: tuple

    def exp(self, cfg: SurfaceConfig) -> ComplexMukaiVector:
        from .lattice import exp_class

        return exp_class(cfg, self.beta, self.omega)

    def scaled(self, t) -> "TubeDomainPoint":
        """beta + i t omega."""
        return TubeDomainPoint(self.beta, tuple(_norm(t * w) for w in self.omega))

    def __str__(self):
        b = ",".join(str(c) for c in self.beta)
        w = ",".join(str(c) for c in self.omega)
        return f"beta=({b}); omega=({w})"


def tube_point(cfg: SurfaceConfig, beta: Sequence, omega: Sequence) -> TubeDomainPoint:
    beta = tuple(_norm(Fraction(b)) if isinstance(b, (int, Fraction, str)) else b for b in beta)
    omega = tuple(_norm(Fraction(w)) if isinstance(w, (int, Fraction, str)) else w for w in omega)
    if len(beta) != cfg.rank or len(omega) != cfg.rank:
        raise DomainError(f"tube domain point needs {cfg.rank} coordinates for beta and omega")
    if not cfg.square(omega) > 0:
        raise DomainError("tube domain requires omega^2 > 0")
    return TubeDomainPoint(beta, omega)


def central_charge(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector, v: MukaiVector) -> GaussianRational:
    """Z(v) = (Omega, v), extended complex-bilinearly."""
    return omega_vec.pair(cfg, v)


def charge_star(cfg: SurfaceConfig, p: TubeDomainPoint, v: MukaiVector) -> GaussianRational:
    """Z(v) at exp(beta + i omega), via the rank-split closed form.

    For r != 0:
        Z = ((D^2 - 2rs) + r^2 w^2 - (D - r b)^2) / 2r + i (D - r b).w
    and for r = 0:  Z = (D.b - s) + i D.w.
    """
    r, d, s = v.r, v.delta, v.s
    b, w = p.beta, p.omega
    if r == 0:
        return GaussianRational(_norm(cfg.dot(d, b) - s), _norm(cfg.dot(d, w)))
    u = tuple(di - r * bi for di, bi in zip(d, b))
    num = (cfg.square(d) - 2 * r * s) + r * r * cfg.square(w) - cfg.square(u)
    return GaussianRational(_div(num, 2 * r), _norm(cfg.dot(u, w)))


class Order(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _check_half_plane(z: GaussianRational, name: str):
    if z.is_zero():
        raise DegenerateChargeError(f"{name} is zero; phases need a nonzero charge")
    if z.im < 0 or (z.im == 0 and z.re > 0):
        raise DomainError(f"{name} = {z} is outside the upper half-plane and negative real axis")


def phase_compare(z1: GaussianRational, z2: GaussianRational) -> Order:
    """Compare phases in (0, 1] of two charges in {Im > 0} or {Im = 0, Re < 0}."""
    _check_half_plane(z1, "z1")
    _check_half_plane(z2, "z2")
    cross = z1.im * z2.re - z1.re * z2.im
    return Order(_sgn(cross))


def arg_compare(z1: GaussianRational, z2: GaussianRational) -> Order:
    """Compare arguments in (-pi, pi] of two nonzero charges."""
    if z1.is_zero() or z2.is_zero():
        raise DegenerateChargeError("arguments need nonzero charges")

    def upper(z):
        return z.im > 0 or (z.im == 0 and z.re < 0)

    u1, u2 = upper(z1), upper(z2)
    if u1 != u2:
        return Order.GREATER if u1 else Order.LESS
    cross = z1.im * z2.re - z1.re * z2.im
    return Order(_sgn(cross))


@dataclass(frozen=True)
class PhaseToken:
    """Exact stand-in for the phase of a charge in the upper half-plane or negative real axis.

    Tokens compare like the phases they represent.  ``value`` is the exact
    phase when the charge lies on an axis or diagonal, else None.
    """

    charge: GaussianRational

    def __post_init__(self):
        _check_half_plane(self.charge, "charge")

    def _c(self, o):
        return phase_compare(self.charge, o.charge)

    def __lt__(self, o):
        return self._c(o) < 0

    def __le__(self, o):
        return self._c(o) <= 0

    def __gt__(self, o):
        return self._c(o) > 0

    def __ge__(self, o):
        return self._c(o) >= 0

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.value == o
        if not isinstance(o, PhaseToken):
            return NotImplemented
        return self._c(o) == 0

    def __hash__(self):
        return hash(self.value)

    @property
    def value(self):
        re, im = self.charge.re, self.charge.im
        if im == 0:
            return Fraction(1)
        if re == 0:
            return Fraction(1, 2)
        if re == im:
            return Fraction(1, 4)
        if re == -im:
            return Fraction(3, 4)
        return None

    def __str__(self):
        v = self.value
        return f"phase={v}" if v is not None else f"phase(arg {self.charge})"
