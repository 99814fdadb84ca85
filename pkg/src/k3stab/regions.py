"""Membership in P(X), P+(X), Q(X), K(X), L(X), P0(X) and normalisation onto Q(X).

GL+(2,R) acts on a vector Omega through its real frame (Re Omega, Im Omega);
a matrix g = [[a, b], [c, d]] sends the frame to (a Re + b Im, c Re + d Im).
Only GL+ is modelled: the winding number of the universal cover is invisible
on N(X).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .charge import ComplexMukaiVector, GaussianRational, TubeDomainPoint, _div, _norm
from .errors import DomainError, EnumerationCapError, NoQRepresentativeError
from .lattice import MukaiVector, SurfaceConfig, exp_class, mukai_pairing
from .qfield import QuadraticNumber, sqrt_rational

__all__ = [
    "GLPlusElement",
    "QNormalization",
    "RegionReport",
    "plane_gram",
    "is_degenerate_plane",
    "in_positive_two_plane",
    "in_positive_component",
    "is_in_Q",
    "q_normalize",
    "is_ample",
    "region_report",
]


def _is_rational(x) -> bool:
    return not isinstance(x, QuadraticNumber)


@dataclass(frozen=True)
class GLPlusElement:
    """2x2 real matrix with positive determinant; entries rational or in Q(sqrt d)."""

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        if not self.det > 0:
            raise DomainError(f"GL+ element needs positive determinant, got {self.det}")

    @classmethod
    def identity(cls) -> "GLPlusElement":
        return cls(1, 0, 0, 1)

    @classmethod
    def scaling(cls, t) -> "GLPlusElement":
        return cls(t, 0, 0, t)

    @classmethod
    def from_complex(cls, z: GaussianRational) -> "GLPlusElement":
        """Multiplication of Omega by the complex number z."""
        return cls(z.re, -z.im, z.im, z.re)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    @property
    def is_rational(self) -> bool:
        return all(_is_rational(e) for e in (self.a, self.b, self.c, self.d))

    def __matmul__(self, o: "GLPlusElement") -> "GLPlusElement":
        return GLPlusElement(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "GLPlusElement":
        det = self.det
        return GLPlusElement(_div(self.d, det), _div(-self.b, det), _div(-self.c, det), _div(self.a, det))

    def apply(self, omega_vec: ComplexMukaiVector) -> ComplexMukaiVector:
        re, im = omega_vec.re, omega_vec.im
        new_re = re.scale(self.a) + im.scale(self.b)
        new_im = re.scale(self.c) + im.scale(self.d)
        return ComplexMukaiVector(new_re.normalized(), new_im.normalized())

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def plane_gram(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector):
    """(A, B, C) = ((Re,Re), (Re,Im), (Im,Im))."""
    re, im = omega_vec.re, omega_vec.im
    return mukai_pairing(cfg, re, re), mukai_pairing(cfg, re, im), mukai_pairing(cfg, im, im)


def is_degenerate_plane(omega_vec: ComplexMukaiVector) -> bool:
    """True when Re Omega and Im Omega are linearly dependent."""
    x, y = omega_vec.re.coords, omega_vec.im.coords
    n = len(x)
    return all(x[i] * y[j] - x[j] * y[i] == 0 for i in range(n) for j in range(i + 1, n))


def in_positive_two_plane(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector) -> bool:
    if is_degenerate_plane(omega_vec):
        return False
    A, B, C = plane_gram(cfg, omega_vec)
    return A > 0 and A * C - B * B > 0


def _orientation(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector) -> int:
    """Sign of the frame's projection onto the reference plane of exp(iH)."""
    ref = exp_class(cfg, cfg.zero_ns(), cfg.ample_class)
    re, im = omega_vec.re, omega_vec.im
    m11 = mukai_pairing(cfg, re, ref.re)
    m12 = mukai_pairing(cfg, re, ref.im)
    m21 = mukai_pairing(cfg, im, ref.re)
    m22 = mukai_pairing(cfg, im, ref.im)
    det = m11 * m22 - m12 * m21
    return (det > 0) - (det < 0)


def is_in_Q(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector) -> bool:
    """(Omega, Omega) = 0, (Omega, conj Omega) > 0 and r(Omega) = 1."""
    return (
        omega_vec.re.r == 1
        and omega_vec.im.r == 0
        and omega_vec.self_pairing(cfg).is_zero()
        and omega_vec.hermitian(cfg) > 0
    )


class QNormalization(NamedTuple):
    point: TubeDomainPoint
    g: GLPlusElement

    @property
    def irrational(self) -> bool:
        coords = (*self.point.beta, *self.point.omega)
        return not (self.g.is_rational and all(_is_rational(c) for c in coords))


def q_normalize(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector) -> QNormalization:
    """The unique point exp(beta + i omega) of Q(X) in the GL+ orbit of Omega.

    The null line of the complexified plane is spanned by Re + tau Im with
    tau = (-B + i sqrt(AC - B^2)) / C; the root with Im tau > 0 keeps the
    frame orientation.  Dividing by its rank component lands in Q(X).
    """
    if not in_positive_two_plane(cfg, omega_vec):
        raise DomainError("q_normalize needs Re and Im to span a positive definite two-plane")
    A, B, C = plane_gram(cfg, omega_vec)
    D = A * C - B * B
    tau = GaussianRational(_div(-B, C), _div(sqrt_rational(Fraction(D)), C))
    rank = GaussianRational(omega_vec.re.r, 0) + tau * GaussianRational(omega_vec.im.r, 0)
    if rank.is_zero():
        raise NoQRepresentativeError(
            "the null line of the plane has rank component 0, so there is no representative in Q(X)"
        )
    mu = GaussianRational(1, 0) / rank
    mutau = mu * tau
    g = GLPlusElement(_norm(mu.re), _norm(mutau.re), _norm(mu.im), _norm(mutau.im))
    image = g.apply(omega_vec)
    beta = tuple(_norm(c) for c in image.re.delta)
    omega = tuple(_norm(c) for c in image.im.delta)
    return QNormalization(TubeDomainPoint(beta, omega), g)


def in_positive_component(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector) -> bool:
    """Membership in P+(X): the component containing exp(beta + i omega) with omega ample.

    Decided through the Q-chart (omega . H > 0) when a representative exists,
    and cross-checked against the orientation of the frame relative to exp(iH).
    """
    if not in_positive_two_plane(cfg, omega_vec):
        return False
    orient = _orientation(cfg, omega_vec) > 0
    try:
        qn = q_normalize(cfg, omega_vec)
    except NoQRepresentativeError:
        return orient
    chart = cfg.dot(qn.point.omega, cfg.ample_class) > 0
    if chart != orient:
        raise AssertionError("P+ tests disagree: Q-chart orientation vs frame orientation")
    return chart


def is_ample(cfg: SurfaceConfig, omega) -> bool:
    """omega^2 > 0, omega.H > 0 and omega.C > 0 for every declared (-2)-curve."""
    omega = tuple(omega)
    if not cfg.square(omega) > 0:
        return False
    if not cfg.dot(omega, cfg.ample_class) > 0:
        return False
    return all(cfg.dot(omega, c) > 0 for c in cfg.minus_two_curves)


@dataclass
class RegionReport:
    in_P: bool = False
    in_P_plus: bool = False
    in_P0: bool = False
    in_Q: bool = False
    in_K: bool = False
    in_L: bool = False
    witnesses: list = field(default_factory=list)
    q_normalization: QNormalization | None = None
    complete: bool = True
    notes: list = field(default_factory=list)

    def flags(self) -> dict:
        return {
            "in_P": self.in_P,
            "in_P_plus": self.in_P_plus,
            "in_P0": self.in_P0,
            "in_Q": self.in_Q,
            "in_K": self.in_K,
            "in_L": self.in_L,
        }


# |(Omega, delta)| <= 1 for every delta in Delta+ with (Omega, delta) real and <= 0
# at an ample exponential: Re = (-2 + r^2 w^2 - u^2) / 2r >= -1/r when u.w = 0.
L_WITNESS_BOUND = Fraction(1)


def region_report(cfg: SurfaceConfig, omega_vec: ComplexMukaiVector, search_bound=L_WITNESS_BOUND,
                  cap: int | None = None) -> RegionReport:
    """All region flags for Omega, with root witnesses for failed P0 / L membership.

    ``search_bound`` is the charge radius searched for L witnesses; values below
    1 cannot certify membership and mark the report incomplete.
    """
    from .roots import DEFAULT_CAP, EnumerationQuery, enumerate_bounded

    cap = DEFAULT_CAP if cap is None else cap
    search_bound = Fraction(search_bound)
    rep = RegionReport()
    rep.in_P = in_positive_two_plane(cfg, omega_vec)
    if not rep.in_P:
        rep.notes.append("Re and Im do not span a positive definite two-plane")
        return rep
    rep.in_P_plus = in_positive_component(cfg, omega_vec)
    try:
        rep.q_normalization = q_normalize(cfg, omega_vec)
        if rep.q_normalization.irrational:
            rep.notes.append("irrational normalization: coordinates lie in a real quadratic field")
    except NoQRepresentativeError as exc:
        rep.notes.append(str(exc))
    rep.in_Q = is_in_Q(cfg, omega_vec)
    if rep.in_Q:
        rep.in_K = is_ample(cfg, omega_vec.im.delta)
    if cfg.rank > 1:
        rep.notes.append("ampleness is relative to the declared (-2)-curves")

    if cfg.is_abelian:
        rep.in_P0 = True
        rep.in_L = rep.in_K
        rep.notes.append("abelian surface: no spherical classes, so P0 = P and L = K")
        return rep

    # P0: no root orthogonal to the plane.  Those roots live in the negative
    # definite complement, so the m = 0 search is exhaustive.
    try:
        ortho = enumerate_bounded(cfg, EnumerationQuery(omega_vec, 0, -2, False, roots_only=True), cap=cap)
    except EnumerationCapError as exc:
        rep.complete = False
        rep.notes.append(f"P0 search refused: {exc}")
        ortho = None
    if ortho is not None:
        rep.in_P0 = not ortho
        rep.witnesses.extend(ortho)

    if rep.in_K:
        try:
            near = enumerate_bounded(
                cfg, EnumerationQuery(omega_vec, search_bound, -2, True, roots_only=True), cap=cap
            )
        except EnumerationCapError as exc:
            rep.complete = False
            rep.notes.append(f"L search refused: {exc}")
            near = None
        if near is not None:
            bad = []
            for delta in near:
                z = omega_vec.pair(cfg, delta)
                if z.im == 0 and z.re <= 0:
                    bad.append(delta)
            rep.in_L = not bad
            for delta in bad:
                if delta not in rep.witnesses:
                    rep.witnesses.append(delta)
            if search_bound < L_WITNESS_BOUND:
                rep.complete = False
                rep.notes.append("search_bound below 1 does not certify L membership")
        rep.witnesses.sort()
    return rep
