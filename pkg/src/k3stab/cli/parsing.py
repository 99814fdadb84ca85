"""Config files and command-line literals.

Config files are INI-style with one ``[surface]`` section::

    [surface]
    surface_type = K3
    rank = 2
    basis = S, F
    gram =
        -2 1
        1 0
    ample = 1, 3
    curves =
        1, 0

Rationals are written ``p/q`` (decimals are accepted too).  NS classes are
either comma-separated coordinates or linear combinations of basis names
such as ``2H`` or ``S+3F``; ``H`` always names the ample class.
"""

from __future__ import annotations

import configparser
import re
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ..charge import ComplexMukaiVector, TubeDomainPoint, _norm, tube_point
from ..errors import ConfigError, DomainError
from ..lattice import MukaiVector, SurfaceConfig, SurfaceType

__all__ = [
    "load_config",
    "parse_config_text",
    "bundled_configs",
    "parse_rational",
    "parse_rationals",
    "parse_class",
    "parse_vector",
    "parse_point",
    "parse_complex_vector",
    "fmt",
]


def fmt(q) -> str:
    """Exact text form: integers, p/q, or a + b*sqrt(d)."""
    if isinstance(q, Fraction):
        q = _norm(q)
    return str(q)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not a rational literal: {text!r}") from None


def parse_rationals(text: str, n: int | None = None, what: str = "value") -> list:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    vals = [_norm(parse_rational(p)) for p in parts]
    if n is not None and len(vals) != n:
        raise DomainError(f"{what} needs {n} entries, got {len(vals)}: {text!r}")
    return vals


def bundled_configs() -> list[str]:
    return sorted(p.name for p in resources.files("k3stab.configs").iterdir() if p.name.endswith(".cfg"))


def load_config(path: str) -> SurfaceConfig:
    """Read a config file; bare names of bundled configs (deg2.cfg, rank2.cfg, abelian.cfg) also work."""
    p = Path(path)
    if p.is_file():
        text = p.read_text(encoding="utf-8")
    else:
        ref = resources.files("k3stab.configs").joinpath(p.name)
        if p.parent != Path(".") or not ref.is_file():
            raise ConfigError(f"config file not found: {path}")
        text = ref.read_text(encoding="utf-8")
    return parse_config_text(text)


def _int_rows(text: str, what: str) -> list[list[int]]:
    rows = []
    for line in re.split(r"[\n;]", text):
        line = line.strip()
        if not line:
            continue
        try:
            rows.append([int(x) for x in re.split(r"[,\s]+", line) if x])
        except ValueError:
            raise ConfigError(f"{what} must contain integers, got {line!r}") from None
    return rows


def parse_config_text(text: str) -> SurfaceConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from None
    if "surface" not in cp:
        raise ConfigError("config needs a [surface] section")
    s = cp["surface"]
    for key in ("surface_type", "rank", "gram", "ample"):
        if key not in s:
            raise ConfigError(f"config is missing {key!r}")
    kind = SurfaceType.parse(s["surface_type"])
    try:
        rank = int(s["rank"])
    except ValueError:
        raise ConfigError(f"rank must be an integer, got {s['rank']!r}") from None
    gram = _int_rows(s["gram"], "gram")
    if len(gram) != rank:
        raise ConfigError(f"gram must have {rank} rows, got {len(gram)}")
    ample = _int_rows(s["ample"], "ample")
    if len(ample) != 1:
        raise ConfigError("ample must be a single vector")
    curves = _int_rows(s.get("curves", ""), "curves")
    names = tuple(n.strip() for n in s.get("basis", "").split(",") if n.strip())
    return SurfaceConfig(kind, tuple(map(tuple, gram)), tuple(ample[0]), tuple(map(tuple, curves)), names,
                         s.get("name", "").strip())


_TERM = re.compile(r"\s*([+-])?\s*([0-9]+(?:/[0-9]+|\.[0-9]+)?)?\s*\*?\s*([A-Za-z_][A-Za-z_0-9]*)?\s*")


def parse_class(cfg: SurfaceConfig, text: str) -> tuple:
    """An NS(X) tensor Q class from coordinates or a combination of basis names."""
    text = text.strip()
    if not text:
        raise DomainError("empty class")
    if "," in text or (cfg.rank == 1 and not re.search(r"[A-Za-z]", text)):
        return tuple(parse_rationals(text, cfg.rank, "class"))
    if re.fullmatch(r"[+-]?0+", text):
        return cfg.zero_ns()
    names = {n: tuple(1 if j == i else 0 for j in range(cfg.rank)) for i, n in enumerate(cfg.basis_names)}
    names.setdefault("H", cfg.ample_class)
    out = [Fraction(0)] * cfg.rank
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise DomainError(f"cannot parse class {text!r} near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if pos > 0 and m.group(1) is None:
            raise DomainError(f"cannot parse class {text!r}: missing + or - before {text[pos:]!r}")
        coef = parse_rational(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3) is None:
            raise DomainError(f"bare number in class {text!r}; use coordinates or basis names")
        if m.group(3) not in names:
            raise DomainError(f"unknown basis name {m.group(3)!r}; known: {', '.join(names)}")
        for i, c in enumerate(names[m.group(3)]):
            out[i] += sign * coef * c
        pos = m.end()
    return tuple(_norm(c) for c in out)


def parse_vector(cfg: SurfaceConfig, text: str, integral: bool = True) -> MukaiVector:
    """``r,delta_1,..,delta_rho,s``."""
    vals = parse_rationals(text, cfg.lattice_rank, "Mukai vector")
    v = MukaiVector.from_coords(vals)
    if integral and not v.is_integral:
        raise DomainError(f"Mukai vector {text!r} must be integral")
    return v


def _fields(text: str) -> dict:
    out = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        if "=" not in part:
            raise DomainError(f"expected key=value in {text!r}, got {part.strip()!r}")
        k, v = part.split("=", 1)
        out[k.strip().lower()] = v.strip()
    return out


def parse_point(cfg: SurfaceConfig, text: str) -> TubeDomainPoint:
    """``beta=<class>; omega=<class>``."""
    f = _fields(text)
    if set(f) != {"beta", "omega"}:
        raise DomainError(f"a point needs exactly beta=... and omega=..., got {text!r}")
    return tube_point(cfg, parse_class(cfg, f["beta"]), parse_class(cfg, f["omega"]))


def parse_complex_vector(cfg: SurfaceConfig, text: str) -> ComplexMukaiVector:
    """``re=r,delta,s; im=r,delta,s``."""
    f = _fields(text)
    if set(f) != {"re", "im"}:
        raise DomainError(f"a complex vector needs exactly re=... and im=..., got {text!r}")
    return ComplexMukaiVector(parse_vector(cfg, f["re"], False), parse_vector(cfg, f["im"], False))
