"""Lattice shadows of autoequivalences: shifts, line bundle twists, spherical reflections.

Words act on N(X) left to right: the first generator listed is applied first.
All maps are real-linear, so complex vectors are acted on componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .charge import ComplexMukaiVector, TubeDomainPoint, _norm, charge_star
from .errors import DomainError, NonTerminationError
from .lattice import MukaiVector, SurfaceConfig, mukai_pairing, twist_by_exp

__all__ = [
    "GeneratorKind",
    "IsometryGenerator",
    "IsometryWord",
    "BoundaryType",
    "BoundaryDiagnosis",
    "apply_word",
    "apply_word_complex",
    "word_matrix",
    "check_isometry_matrix",
    "verify_hodge_isometry",
    "classify_boundary",
    "reduce_to_ample_chamber",
    "nearest_int",
]


class GeneratorKind(Enum):
    SHIFT = "shift"
    TWIST = "twist"
    REFLECTION = "refl"


@dataclass(frozen=True)
class IsometryGenerator:
    kind: GeneratorKind
    ell: tuple | None = None
    delta: MukaiVector | None = None

    @classmethod
    def shift(cls) -> "IsometryGenerator":
        return cls(GeneratorKind.SHIFT)

    @classmethod
    def twist(cls, ell: Sequence) -> "IsometryGenerator":
        ell = tuple(ell)
        if not all(isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1) for c in ell):
            raise DomainError(f"line bundle twists need an integral class, got {ell}")
        return cls(GeneratorKind.TWIST, ell=tuple(int(c) for c in ell))

    @classmethod
    def reflection(cls, delta: MukaiVector) -> "IsometryGenerator":
        return cls(GeneratorKind.REFLECTION, delta=delta)

    def check(self, cfg: SurfaceConfig) -> None:
        if self.kind is GeneratorKind.TWIST and len(self.ell) != cfg.rank:
            raise DomainError(f"twist class needs {cfg.rank} coordinates")
        if self.kind is GeneratorKind.REFLECTION:
            if not self.delta.is_integral:
                raise DomainError(f"reflection vector {self.delta} must be integral")
            n = mukai_pairing(cfg, self.delta, self.delta)
            if n != -2:
                raise DomainError(f"reflection needs (delta, delta) = -2, got {n} for {self.delta}")

    def apply(self, cfg: SurfaceConfig, v: MukaiVector) -> MukaiVector:
        if self.kind is GeneratorKind.SHIFT:
            return -v
        if self.kind is GeneratorKind.TWIST:
            return twist_by_exp(cfg, v, self.ell)
        k = mukai_pairing(cfg, self.delta, v)
        return (v + self.delta.scale(k)).normalized()

    def __str__(self):
        if self.kind is GeneratorKind.SHIFT:
            return "shift"
        if self.kind is GeneratorKind.TWIST:
            return "twist:" + ",".join(str(c) for c in self.ell)
        return "refl:" + ",".join(str(c) for c in self.delta.coords)


@dataclass(frozen=True)
class IsometryWord:
    cfg: SurfaceConfig
    generators: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            g.check(self.cfg)

    def __add__(self, o: "IsometryWord") -> "IsometryWord":
        return IsometryWord(self.cfg, self.generators + o.generators)

    def __len__(self):
        return len(self.generators)

    def __str__(self):
        return ",".join(str(g) for g in self.generators) or "id"


def apply_word(word: IsometryWord, v: MukaiVector) -> MukaiVector:
    for g in word.generators:
        v = g.apply(word.cfg, v)
    return v.normalized()


def apply_word_complex(word: IsometryWord, omega_vec: ComplexMukaiVector) -> ComplexMukaiVector:
    return ComplexMukaiVector(apply_word(word, omega_vec.re), apply_word(word, omega_vec.im))


def _basis(cfg: SurfaceConfig) -> list[MukaiVector]:
    n = cfg.lattice_rank
    return [MukaiVector.from_coords(1 if j == i else 0 for j in range(n)) for i in range(n)]


def word_matrix(word: IsometryWord) -> tuple:
    """Matrix of the induced map; column i is the image of the i-th basis vector."""
    cols = [apply_word(word, e).coords for e in _basis(word.cfg)]
    n = len(cols)
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _gram_conjugate(M, G):
    n = len(G)
    MtG = [[sum(M[k][i] * G[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return tuple(tuple(sum(MtG[i][k] * M[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class IsometryCertificate:
    matrix: tuple
    gram: tuple
    conjugated: tuple  # M^T G M, equal to ``gram`` for an isometry

    @property
    def ok(self) -> bool:
        return self.conjugated == self.gram


def check_isometry_matrix(cfg: SurfaceConfig, M) -> tuple[bool, IsometryCertificate]:
    """Exact test of M^T G M = G on the Mukai lattice."""
    G = cfg.mukai_gram()
    M = tuple(tuple(_norm(Fraction(c)) for c in row) for row in M)
    cert = IsometryCertificate(M, G, _gram_conjugate(M, G))
    return cert.ok, cert


def verify_hodge_isometry(word: IsometryWord) -> tuple[bool, IsometryCertificate]:
    return check_isometry_matrix(word.cfg, word_matrix(word))


def _is_identity(M) -> bool:
    return all(M[i][j] == (1 if i == j else 0) for i in range(len(M)) for j in range(len(M)))


# ----------------------------------------------------------------------------
# boundary diagnosis


class BoundaryType(Enum):
    A_PLUS = "A+"
    A_MINUS = "A-"
    C_K = "Ck"


@dataclass(frozen=True)
class BoundaryDiagnosis:
    wall_witness: MukaiVector
    wall_type: tuple  # (A_PLUS, A_MINUS) when the two sides cannot be told apart, else (C_K,)
    deck_move: IsometryWord
    acts_trivially_on_lattice: bool
    curve: tuple | None = None
    n: int | None = None
    k: int | None = None
    notes: tuple = field(default=())


def nearest_int(q) -> int:
    """Nearest integer, ties going down."""
    q = Fraction(q)
    f = q.__floor__()
    return f + 1 if q - f > Fraction(1, 2) else f


def classify_boundary(cfg: SurfaceConfig, p: TubeDomainPoint, delta: MukaiVector) -> BoundaryDiagnosis:
    """Type of the wall H(delta) through exp(beta + i omega).

    r(delta) > 0 gives type A; both A+ and A- are reported since the lattice
    point does not see which side the wall is approached from.  r(delta) = 0
    gives type C_k with delta = +-(0, C, n), C.H > 0.
    """
    if not delta.is_integral or mukai_pairing(cfg, delta, delta) != -2:
        raise DomainError(f"{delta} is not a root: (delta, delta) must be -2")
    z = charge_star(cfg, p, delta)
    if z.im != 0 or z.re > 0:
        raise DomainError(f"exp(beta + i omega) is not on H({delta}): Z(delta) = {z} is not real and <= 0")
    if delta.r < 0:
        raise DomainError(f"{delta} has negative rank; walls H(delta) are indexed by positive roots")
    if delta.r > 0:
        refl = IsometryGenerator.reflection(delta)
        word = IsometryWord(cfg, (refl, refl))
        return BoundaryDiagnosis(
            delta,
            (BoundaryType.A_PLUS, BoundaryType.A_MINUS),
            word,
            _is_identity(word_matrix(word)),
            notes=("A+ and A- have the same lattice image; telling them apart needs the stable factors",),
        )
    sign = 1 if cfg.dot(delta.delta, cfg.ample_class) > 0 else -1
    curve = tuple(sign * c for c in delta.delta)
    n = sign * delta.s
    k = nearest_int(cfg.dot(p.beta, curve))
    word = IsometryWord(cfg, (IsometryGenerator.reflection(MukaiVector(0, curve, k)),))
    notes = []
    if curve not in cfg.minus_two_curves:
        notes.append(f"C = {curve} is not among the configured (-2)-curves")
    return BoundaryDiagnosis(
        delta, (BoundaryType.C_K,), word, _is_identity(word_matrix(word)), curve, n, k, tuple(notes)
    )


# ----------------------------------------------------------------------------
# reduction into the ample chamber


def reduce_to_ample_chamber(cfg: SurfaceConfig, p: TubeDomainPoint, max_steps: int = 100):
    """Reflect in configured (-2)-curves until omega.C >= 0 for all of them.

    Each step picks the first configured C with omega.C < 0 and reflects in
    (0, C, k), k the nearest integer to beta.C.  Returns (point, word) and
    checks that the word carries exp(beta + i omega) to the output exactly.
    """
    if not cfg.square(p.omega) > 0 or not cfg.dot(p.omega, cfg.ample_class) > 0:
        raise DomainError("reduction needs omega^2 > 0 and omega.H > 0")
    start = p.exp(cfg)
    word = IsometryWord(cfg, ())
    trace = [p]
    cur = p
    for _ in range(max_steps + 1):
        bad = next((c for c in cfg.minus_two_curves if cfg.dot(cur.omega, c) < 0), None)
        if bad is None:
            image = apply_word_complex(word, start)
            if image != cur.exp(cfg):
                raise AssertionError("reduction word does not reproduce the reduced point")
            return cur, word
        if len(word) == max_steps:
            break
        k = nearest_int(cfg.dot(cur.beta, bad))
        step = IsometryWord(cfg, (IsometryGenerator.reflection(MukaiVector(0, bad, k)),))
        img = apply_word_complex(step, cur.exp(cfg))
        if img.re.r != 1 or img.im.r != 0:
            raise AssertionError("reflection left the exponential chart")
        cur = TubeDomainPoint(tuple(_norm(c) for c in img.re.delta), tuple(_norm(c) for c in img.im.delta))
        word = word + step
        trace.append(cur)
    raise NonTerminationError(
        f"no ample chamber reached after {max_steps} reflections; the curve list may be incomplete", trace
    )
