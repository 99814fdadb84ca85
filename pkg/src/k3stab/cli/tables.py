"""CSV emission and the matching readers.

Every table is UTF-8 with a header row; exact numbers are written as
integers or ``p/q``; trailing ``#`` lines carry notes and are skipped by the
readers.  Output is canonical so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction

from ..lattice import MukaiVector, SurfaceConfig
from ..poly import MONOMIALS_DEG4, Poly2
from ..walls import Wall, WallKind
from .parsing import fmt

__all__ = [
    "roots_csv",
    "read_roots_csv",
    "walls_csv",
    "read_walls_csv",
    "read_mock_csv",
    "split_comments",
]


def _write(header, rows, notes) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    for n in notes:
        buf.write(f"# {n}\n")
    return buf.getvalue()


def split_comments(text: str) -> tuple[list[list[str]], list[str]]:
    lines = text.splitlines()
    notes = [ln[1:].strip() for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if ln.strip() and not ln.startswith("#")]
    return list(csv.reader(body)), notes


# ----------------------------------------------------------------------------
# roots


def roots_csv(cfg: SurfaceConfig, vectors, charges, squares, notes=()) -> str:
    header = ["r", *cfg.basis_names, "s", "square", "Z_re", "Z_im"]
    rows = [[*map(fmt, v.coords), fmt(n), fmt(z.re), fmt(z.im)] for v, z, n in zip(vectors, charges, squares)]
    return _write(header, rows, notes)


def read_roots_csv(text: str):
    """-> (vectors, [(square, Z_re, Z_im)], notes)."""
    rows, notes = split_comments(text)
    if not rows:
        return [], [], notes
    vecs, data = [], []
    for row in rows[1:]:
        vals = [Fraction(c) for c in row]
        vecs.append(MukaiVector.from_coords(int(c) for c in vals[:-3]))
        data.append(tuple(vals[-3:]))
    return vecs, data, notes


# ----------------------------------------------------------------------------
# walls

WALL_HEADER = ["kind", "witness", "partner", "locus", "sides", "segments"]


def _vec(v) -> str:
    return "" if v is None else " ".join(fmt(c) for c in v.coords)


def _poly(p: Poly2) -> str:
    return " ".join(fmt(c) for c in p.dense(MONOMIALS_DEG4))


def _sides(side_sets) -> str:
    return "|".join(";".join(f"{rel} {_poly(p)}" for p, rel in sides) for sides in side_sets)


def _segments(lines) -> str:
    return "|".join(" ".join(f"{fmt(x)}:{fmt(y)}" for x, y in line) for line in lines)


def walls_csv(walls, notes=()) -> str:
    """One row per wall; locus and side polynomials as the dense degree-4 coefficient list.

    Monomial order: 1, x, y, x^2, xy, y^2, x^3, ... (total degree, then falling x power).
    """
    rows = [
        [w.kind.value, _vec(w.witness), _vec(w.partner), _poly(w.locus), _sides(w.side_sets), _segments(w.segments)]
        for w in walls
    ]
    return _write(WALL_HEADER, rows, notes)


def _read_poly(text: str) -> Poly2:
    return Poly2.from_dense([Fraction(c) for c in text.split()], MONOMIALS_DEG4)


def read_walls_csv(text: str):
    """-> (walls, notes); polylines come back as exact rational points."""
    rows, notes = split_comments(text)
    if not rows:
        return [], notes
    if rows[0] != WALL_HEADER:
        raise ValueError(f"unexpected walls header {rows[0]}")
    walls = []
    for kind, witness, partner, locus, sides, segs in rows[1:]:
        side_sets = []
        for block in sides.split("|") if sides else []:
            conds = []
            for item in block.split(";"):
                rel, rest = item.split(" ", 1)
                conds.append((_read_poly(rest), rel))
            side_sets.append(tuple(conds))
        lines = []
        for chunk in segs.split("|") if segs else []:
            lines.append([tuple(Fraction(c) for c in pt.split(":")) for pt in chunk.split()])
        w = Wall(
            WallKind(kind),
            MukaiVector.from_coords(int(c) for c in witness.split()),
            MukaiVector.from_coords(int(c) for c in partner.split()) if partner else None,
            _read_poly(locus),
            tuple(side_sets),
            lines,
        )
        walls.append(w)
    return walls, notes


# ----------------------------------------------------------------------------
# mock sheaves


def read_mock_csv(cfg: SurfaceConfig, text: str):
    """Rows ``kind, r, delta..., s`` with kind in dim0 / dim1 / free; a header row is optional."""
    from ..tilt import FactorKind, MockSheaf

    rows, _ = split_comments(text)
    factors = []
    for row in rows:
        row = [c.strip() for c in row]
        if not row or row[0].lower() == "kind":
            continue
        if len(row) != cfg.lattice_rank + 1:
            raise ValueError(f"mock sheaf row needs kind and {cfg.lattice_rank} coordinates: {row}")
        v = MukaiVector.from_coords(int(Fraction(c)) for c in row[1:])
        factors.append((v, FactorKind(row[0].lower())))
    return MockSheaf(tuple(factors))
