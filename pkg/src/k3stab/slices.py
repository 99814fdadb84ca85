"""Two-dimensional slices of the tube domain.

A slice is (x, y) -> (beta, omega) = (b0 + x db, w0 + y dw) over a closed
rational window.  Central charges restricted to a slice are polynomials of
degree at most two in (x, y); they are built here exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .charge import TubeDomainPoint, _norm
from .errors import DomainError
from .lattice import MukaiVector, SurfaceConfig
from .poly import Poly1, Poly2, feasible_on_interval

__all__ = ["Slice2D", "default_slice"]


def _tup(v) -> tuple:
    return tuple(_norm(Fraction(c)) for c in v)


@dataclass(frozen=True)
class Slice2D:
    base_beta: tuple
    base_omega: tuple
    dir_beta: tuple
    dir_omega: tuple
    window: tuple  # (x0, x1, y0, y1)

    def __post_init__(self):
        for name in ("base_beta", "base_omega", "dir_beta", "dir_omega"):
            object.__setattr__(self, name, _tup(getattr(self, name)))
        w = tuple(Fraction(c) for c in self.window)
        if len(w) != 4 or w[0] > w[1] or w[2] > w[3]:
            raise DomainError("window must be x0,x1,y0,y1 with x0 <= x1 and y0 <= y1")
        object.__setattr__(self, "window", w)

    def beta(self, x) -> tuple:
        return tuple(_norm(b + x * d) for b, d in zip(self.base_beta, self.dir_beta))

    def omega(self, y) -> tuple:
        return tuple(_norm(b + y * d) for b, d in zip(self.base_omega, self.dir_omega))

    def point(self, x, y) -> TubeDomainPoint:
        return TubeDomainPoint(self.beta(x), self.omega(y))

    def with_window(self, window: Sequence) -> "Slice2D":
        return Slice2D(self.base_beta, self.base_omega, self.dir_beta, self.dir_omega, tuple(window))

    # -- exact polynomial data --------------------------------------------
    def omega_square(self, cfg: SurfaceConfig) -> Poly1:
        w0, dw = self.base_omega, self.dir_omega
        return Poly1([cfg.square(w0), 2 * cfg.dot(w0, dw), cfg.square(dw)])

    def omega_dot(self, cfg: SurfaceConfig, c: Sequence) -> Poly1:
        """omega(y) . c as a polynomial in y."""
        return Poly1([cfg.dot(self.base_omega, c), cfg.dot(self.dir_omega, c)])

    def validate(self, cfg: SurfaceConfig) -> None:
        if len(self.base_beta) != cfg.rank or len(self.dir_omega) != cfg.rank:
            raise DomainError(f"slice classes need {cfg.rank} coordinates")
        if len(self.dir_beta) != cfg.rank or len(self.base_omega) != cfg.rank:
            raise DomainError(f"slice classes need {cfg.rank} coordinates")
        _, _, y0, y1 = self.window
        if feasible_on_interval([(self.omega_square(cfg), "<=")], y0, y1) is not None:
            raise DomainError("window touches omega^2 <= 0; the tube domain needs omega^2 > 0 throughout")

    def omega_square_min(self, cfg: SurfaceConfig) -> Fraction:
        q = self.omega_square(cfg)
        _, _, y0, y1 = self.window
        vals = [q(y0), q(y1)]
        if q.degree == 2:
            v = -q.c[1] / (2 * q.c[2])
            if y0 < v < y1:
                vals.append(q(v))
        return min(vals)

    def charge_polys(self, cfg: SurfaceConfig, v: MukaiVector) -> tuple[Poly2, Poly2]:
        """(Re Z(v), Im Z(v)) at exp(beta(x) + i omega(y)) as polynomials in (x, y)."""
        X, Y = Poly2.x(), Poly2.y()
        b0, db, w0, dw = self.base_beta, self.dir_beta, self.base_omega, self.dir_omega
        r, d, s = v.r, v.delta, v.s
        beta_d = Poly2.const(cfg.dot(b0, d)) + X * cfg.dot(db, d)
        omega_d = Poly2.const(cfg.dot(w0, d)) + Y * cfg.dot(dw, d)
        beta_sq = Poly2.const(cfg.square(b0)) + X * (2 * cfg.dot(b0, db)) + X * X * cfg.square(db)
        omega_sq = Poly2.const(cfg.square(w0)) + Y * (2 * cfg.dot(w0, dw)) + Y * Y * cfg.square(dw)
        beta_omega = (
            Poly2.const(cfg.dot(b0, w0))
            + X * cfg.dot(db, w0)
            + Y * cfg.dot(b0, dw)
            + X * Y * cfg.dot(db, dw)
        )
        re = beta_d - Poly2.const(s) - (beta_sq - omega_sq) * Fraction(r, 2)
        im = omega_d - beta_omega * r
        return re, im

    def __str__(self):
        x0, x1, y0, y1 = self.window
        return (
            f"beta = {self.base_beta} + x {self.dir_beta}, omega = {self.base_omega} + y {self.dir_omega}, "
            f"x in [{x0}, {x1}], y in [{y0}, {y1}]"
        )


def default_slice(cfg: SurfaceConfig, window: Sequence) -> Slice2D:
    """beta = x H, omega = y H for the configured ample class H."""
    h = cfg.ample_class
    return Slice2D(cfg.zero_ns(), cfg.zero_ns(), h, h, tuple(window))
