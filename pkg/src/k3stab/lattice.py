"""Surface configurations, the Mukai lattice and its pairing.

A configuration fixes a basis of NS(X) through its intersection matrix.
Mukai vectors are stored as ``(r, delta, s)`` with ``delta`` the coordinate
tuple of c1 in that basis.  For K3 surfaces s = ch2 + r; for abelian
surfaces the Todd class is trivial and s = ch2.  Neither is ever computed
here: vectors are taken as given.

Abelian surfaces have no spherical objects, so in abelian mode
:func:`is_spherical` is always false and every root enumeration in the
package returns nothing, even where the lattice has (-2)-vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import ConfigError, DomainError

__all__ = [
    "SurfaceType",
    "SurfaceConfig",
    "MukaiVector",
    "mukai_pairing",
    "euler_form",
    "is_spherical",
    "is_primitive",
    "exp_class",
    "twist_by_exp",
    "signature",
    "degree_2n_k3",
    "elliptic_k3_with_section",
    "principally_polarized_abelian",
]


class SurfaceType(Enum):
    K3 = "K3"
    ABELIAN = "Abelian"

    @classmethod
    def parse(cls, text: str) -> "SurfaceType":
        key = text.strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ConfigError(f"surface_type must be K3 or Abelian, got {text!r}")


def signature(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric rational matrix.

    Exact congruence diagonalisation (Sylvester's law of inertia).
    """
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    pos = neg = 0
    k = 0
    while k < n:
        # find a nonzero diagonal pivot among the remaining indices
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if off is None:
                break
            i, j = off
            # e_i <- e_i + e_j makes the (i,i) entry 2 a_ij != 0
            for m in range(n):
                a[i][m] += a[j][m]
            for m in range(n):
                a[m][i] += a[m][j]
            piv = i
        a[k], a[piv] = a[piv], a[k]
        for row in a:
            row[k], row[piv] = row[piv], row[k]
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        for j in range(k + 1, n):
            a[k][j] = a[j][k] = Fraction(0)
        k += 1
    return pos, neg, n - pos - neg


@dataclass(frozen=True)
class SurfaceConfig:
    """An algebraic K3 or abelian surface, seen through NS(X).

    ``ns_gram`` is the intersection form in the chosen NS basis, ``ample_class``
    a reference ample class H, and ``minus_two_curves`` the declared effective
    (-2)-curve classes.  Ampleness tests elsewhere are relative to that list.
    """

    surface_type: SurfaceType
    ns_gram: tuple[tuple[int, ...], ...]
    ample_class: tuple[int, ...]
    minus_two_curves: tuple[tuple[int, ...], ...] = ()
    basis_names: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.ns_gram)
        object.__setattr__(self, "ns_gram", gram)
        object.__setattr__(self, "ample_class", tuple(int(x) for x in self.ample_class))
        object.__setattr__(self, "minus_two_curves", tuple(tuple(int(x) for x in c) for c in self.minus_two_curves))
        rho = len(gram)
        if rho < 1:
            raise ConfigError("picard rank must be positive")
        if any(len(row) != rho for row in gram):
            raise ConfigError("gram matrix must be square")
        if any(gram[i][j] != gram[j][i] for i in range(rho) for j in range(rho)):
            raise ConfigError("gram matrix must be symmetric")
        if any(gram[i][i] % 2 for i in range(rho)):
            raise ConfigError("gram matrix must have even diagonal (NS(X) is an even lattice)")
        if signature(gram) != (1, rho - 1, 0):
            raise ConfigError(f"gram matrix must have signature (1, {rho - 1}), got {signature(gram)[:2]}")
        if len(self.ample_class) != rho:
            raise ConfigError("ample class has the wrong number of coordinates")
        if self.dot(self.ample_class, self.ample_class) <= 0:
            raise ConfigError("ample class must have positive square")
        for c in self.minus_two_curves:
            if len(c) != rho:
                raise ConfigError(f"curve {c} has the wrong number of coordinates")
            if self.dot(c, c) != -2:
                raise ConfigError(f"curve {c} must have square -2")
            if self.dot(c, self.ample_class) <= 0:
                raise ConfigError(f"curve {c} must have positive degree with respect to the ample class")
        if not self.basis_names:
            names = ("H",) if rho == 1 else tuple(f"e{i + 1}" for i in range(rho))
            object.__setattr__(self, "basis_names", names)
        elif len(self.basis_names) != rho:
            raise ConfigError("basis_names has the wrong length")

    @property
    def rank(self) -> int:
        return len(self.ns_gram)

    @property
    def is_abelian(self) -> bool:
        return self.surface_type is SurfaceType.ABELIAN

    @property
    def lattice_rank(self) -> int:
        return self.rank + 2

    def dot(self, d1: Sequence, d2: Sequence):
        """Intersection product of two NS coordinate vectors."""
        if len(d1) != self.rank or len(d2) != self.rank:
            raise ConfigError(f"NS class dimension mismatch: expected {self.rank} coordinates")
        g = self.ns_gram
        total = 0
        for i, a in enumerate(d1):
            if a:
                row = g[i]
                for j, b in enumerate(d2):
                    if row[j]:
                        total = total + a * row[j] * b
        return total

    def square(self, d: Sequence):
        return self.dot(d, d)

    def mukai_gram(self) -> tuple[tuple[int, ...], ...]:
        """Gram matrix of N(X) in the basis (1,0,0), NS basis, (0,0,1)."""
        n = self.lattice_rank
        m = [[0] * n for _ in range(n)]
        m[0][n - 1] = m[n - 1][0] = -1
        for i in range(self.rank):
            for j in range(self.rank):
                m[i + 1][j + 1] = self.ns_gram[i][j]
        return tuple(tuple(r) for r in m)

    def zero_ns(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def vector(self, r, delta, s) -> "MukaiVector":
        delta = tuple(delta)
        if len(delta) != self.rank:
            raise ConfigError(f"NS class dimension mismatch: expected {self.rank} coordinates")
        return MukaiVector(r, delta, s)


@dataclass(frozen=True, order=True)
class MukaiVector:
    """(r, delta, s) in Z + NS(X) + Z, or its rational extension.

    Ordering is lexicographic on (r, delta coordinates, s), the canonical
    order used for every listing the package produces.
    """

    r: object
    delta: tuple = field(default=())
    s: object = 0

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(self.delta))

    @classmethod
    def from_coords(cls, coords: Sequence) -> "MukaiVector":
        coords = tuple(coords)
        return cls(coords[0], coords[1:-1], coords[-1])

    @property
    def coords(self) -> tuple:
        return (self.r, *self.delta, self.s)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1) for c in self.coords)

    def normalized(self) -> "MukaiVector":
        """Same vector with integral Fractions turned into ints."""
        return MukaiVector.from_coords(
            int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in self.coords
        )

    def __add__(self, o: "MukaiVector") -> "MukaiVector":
        return MukaiVector.from_coords(a + b for a, b in zip(self.coords, o.coords))

    def __sub__(self, o: "MukaiVector") -> "MukaiVector":
        return MukaiVector.from_coords(a - b for a, b in zip(self.coords, o.coords))

    def __neg__(self) -> "MukaiVector":
        return MukaiVector.from_coords(-a for a in self.coords)

    def scale(self, k) -> "MukaiVector":
        return MukaiVector.from_coords(k * a for a in self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __str__(self) -> str:
        d = ",".join(str(c) for c in self.delta)
        return f"({self.r},{d},{self.s})" if d else f"({self.r},{self.s})"


def mukai_pairing(cfg: SurfaceConfig, v1: MukaiVector, v2: MukaiVector):
    """(v1, v2) = D1.D2 - r1 s2 - r2 s1."""
    if len(v1.delta) != cfg.rank or len(v2.delta) != cfg.rank:
        raise ConfigError(f"Mukai vector dimension mismatch: expected NS rank {cfg.rank}")
    return cfg.dot(v1.delta, v2.delta) - v1.r * v2.s - v2.r * v1.s


def euler_form(cfg: SurfaceConfig, v1: MukaiVector, v2: MukaiVector):
    """chi(E, F) = -(v(E), v(F))."""
    return -mukai_pairing(cfg, v1, v2)


def is_spherical(cfg: SurfaceConfig, v: MukaiVector) -> bool:
    if cfg.is_abelian:
        return False
    return mukai_pairing(cfg, v, v) == -2


def is_primitive(v: MukaiVector) -> bool:
    if not v.is_integral:
        raise DomainError("primitivity is only defined for integral vectors")
    if v.is_zero():
        raise DomainError("the zero vector is neither primitive nor imprimitive")
    g = 0
    for c in v.coords:
        g = gcd(g, int(c))
    return g == 1


def exp_class(cfg: SurfaceConfig, beta: Sequence, omega: Sequence):
    """exp(beta + i omega) = (1, beta + i omega, (beta^2 - omega^2)/2 + i beta.omega)."""
    from .charge import ComplexMukaiVector

    beta, omega = tuple(beta), tuple(omega)
    half = Fraction(1, 2)
    re = MukaiVector(1, beta, (cfg.square(beta) - cfg.square(omega)) * half)
    im = MukaiVector(0, omega, cfg.dot(beta, omega))
    return ComplexMukaiVector(re.normalized(), im.normalized())


def twist_by_exp(cfg: SurfaceConfig, v: MukaiVector, ell: Sequence) -> MukaiVector:
    """v . exp(ell) = (r, delta + r ell, s + delta.ell + r ell^2 / 2); the line bundle twist."""
    ell = tuple(ell)
    if len(ell) != cfg.rank:
        raise ConfigError(f"line bundle class needs {cfg.rank} coordinates")
    half_sq = Fraction(cfg.square(ell), 2)
    if half_sq.denominator == 1:
        half_sq = int(half_sq)
    delta = tuple(d + v.r * l for d, l in zip(v.delta, ell))
    return MukaiVector(v.r, delta, v.s + cfg.dot(v.delta, ell) + v.r * half_sq)


# ----------------------------------------------------------------------------
# canonical configurations


def degree_2n_k3(n: int = 1) -> SurfaceConfig:
    """Picard rank one K3 surface with NS(X) = Z H and H^2 = 2n."""
    if n < 1:
        raise ConfigError("degree 2n needs n >= 1")
    return SurfaceConfig(SurfaceType.K3, ((2 * n,),), (1,), (), ("H",), f"degree-{2 * n} K3")


def elliptic_k3_with_section() -> SurfaceConfig:
    """Elliptic K3 with a section: NS = U, basis (S, F), S^2 = -2, F^2 = 0, S.F = 1.

    H = S + 3F is ample and S is the only (-2)-curve class up to sign.
    """
    return SurfaceConfig(
        SurfaceType.K3, ((-2, 1), (1, 0)), (1, 3), ((1, 0),), ("S", "F"), "elliptic K3 with section"
    )


def principally_polarized_abelian() -> SurfaceConfig:
    """Abelian surface of Picard rank one with a principal polarisation (H^2 = 2)."""
    return SurfaceConfig(SurfaceType.ABELIAN, ((2,),), (1,), (), ("H",), "principally polarized abelian surface")
