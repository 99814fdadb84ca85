"""``k3stab`` command-line front end.

Exit codes: 0 success, 2 configuration error, 3 precondition or domain
error, 4 enumeration cap refusal.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import re
import sys
from datetime import datetime, timezone
from pathlib import Path

from .. import __version__
from ..errors import ConfigError, DomainError, EnumerationCapError, StabError
from ..isometries import (
    IsometryGenerator,
    IsometryWord,
    apply_word,
    apply_word_complex,
    reduce_to_ample_chamber,
    verify_hodge_isometry,
)
from ..largevolume import asymptotic_phase_class, large_volume_gap, phase_order_threshold, twisted_leq, twisted_slopes
from ..lattice import mukai_pairing
from ..regions import region_report
from ..roots import DEFAULT_CAP, EnumerationQuery, enumerate_bounded
from ..slices import Slice2D
from ..tilt import HeartPosition, check_stability_function, heart_phase, torsion_pair_split
from ..walls import POLYLINE_GRID, chamber_sample, hole_walls, numerical_walls
from .parsing import (
    fmt,
    load_config,
    parse_class,
    parse_complex_vector,
    parse_point,
    parse_rational,
    parse_rationals,
    parse_vector,
)
from .svg import render_slice
from .tables import read_mock_csv, roots_csv, walls_csv

DEFAULT_WINDOW = "-1/2,1/2,1/2,2"


class _Run:
    """Collects written artifacts for the manifest."""

    def __init__(self, args):
        self.args = args
        self.outputs: dict[str, str] = {}

    def write(self, path, text: str):
        data = text.encode("utf-8")
        Path(path).write_bytes(data)
        self.outputs[str(path)] = hashlib.sha256(data).hexdigest()

    def finish(self):
        if not self.outputs:
            return
        target = self.args.manifest or (str(Path(next(iter(self.outputs))).with_suffix("")) + ".manifest.json")
        params = {k: v for k, v in vars(self.args).items() if k not in ("func", "manifest")}
        manifest = {
            "config_path": params.get("config"),
            "command": self.args.command,
            "parameters": params,
            "library_version": __version__,
            "outputs": self.outputs,
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        Path(target).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _emit(run: _Run, text: str, path):
    if path:
        run.write(path, text)
    else:
        sys.stdout.write(text)


def _omega_vec(cfg, args):
    if args.vector:
        return parse_complex_vector(cfg, args.vector)
    return parse_point(cfg, args.point).exp(cfg)


# ----------------------------------------------------------------------------
# subcommands


def cmd_roots(args, run):
    cfg = load_config(args.config)
    omega_vec = _omega_vec(cfg, args)
    q = EnumerationQuery(omega_vec, parse_rational(args.bound), args.norm_floor, args.positive,
                         roots_only=args.spherical)
    found = enumerate_bounded(cfg, q, cap=args.cap, jobs=args.jobs)
    notes = [f"config: {cfg.name or args.config}", f"Omega: {omega_vec}", f"|Z| <= {fmt(q.bound_m)}"]
    if args.spherical and cfg.is_abelian:
        notes.append("abelian surface: no spherical classes by policy, so the root list is empty")
    notes.append(f"{len(found)} vectors; the zero vector is never listed")
    text = roots_csv(
        cfg, found, [omega_vec.pair(cfg, v) for v in found], [mukai_pairing(cfg, v, v) for v in found], notes
    )
    _emit(run, text, args.out_csv)


def cmd_region(args, run):
    cfg = load_config(args.config)
    omega_vec = _omega_vec(cfg, args)
    rep = region_report(cfg, omega_vec, parse_rational(args.search_bound), cap=args.cap)
    lines = [f"Omega: {omega_vec}"]
    lines += [f"{k}: {str(v).lower()}" for k, v in rep.flags().items()]
    lines.append("witnesses: " + (" ".join(str(w) for w in rep.witnesses) or "none"))
    if rep.q_normalization is not None:
        qn = rep.q_normalization
        lines.append(f"q_normalization: {qn.point}; g={qn.g}; irrational={str(qn.irrational).lower()}")
    lines.append(f"complete: {str(rep.complete).lower()}")
    lines += [f"note: {n}" for n in rep.notes]
    _emit(run, "\n".join(lines) + "\n", args.out)


def _slice(cfg, args) -> Slice2D:
    window = parse_rationals(args.window, 4, "window")
    return Slice2D(
        parse_class(cfg, args.base_beta),
        parse_class(cfg, args.base_omega),
        parse_class(cfg, args.dir_beta),
        parse_class(cfg, args.dir_omega),
        tuple(window),
    )


def cmd_walls(args, run):
    cfg = load_config(args.config)
    v = parse_vector(cfg, args.klass)
    slc = _slice(cfg, args)
    holes = hole_walls(cfg, slc, grid=args.resolution)
    nums = numerical_walls(cfg, slc, v, cap=args.cap, depth=args.depth, grid=args.resolution, jobs=args.jobs)
    walls = holes + nums
    chambers = chamber_sample(walls, slc.window, args.grid)
    tol = max((w.tolerance for w in walls), default=0)
    notes = [
        "potential walls: a certified superset of the numerical walls; realisation by semistable objects is not decided",
        f"config: {cfg.name or args.config}",
        f"slice: {slc}",
        f"class: {v}",
        f"hole walls: {len(holes)}; numerical walls: {len(nums)}",
        f"chambers on a {args.grid}x{args.grid} grid: {chambers.n_chambers}",
        f"polyline tolerance: {fmt(tol)}",
        "monomials: 1 x y x^2 xy y^2 x^3 x^2y xy^2 y^3 x^4 x^3y x^2y^2 xy^3 y^4",
    ]
    _emit(run, walls_csv(walls, notes), args.out_csv)
    if args.out_svg:
        run.write(args.out_svg, render_slice(slc.window, walls, chambers, title=f"walls for {v} on {cfg.name}"))


def parse_word(cfg, text: str) -> IsometryWord:
    """``shift``, ``twist:l1,..``, ``refl:r,delta,s`` separated by commas."""
    gens = []
    cur = None
    args: list[str] = []

    def close():
        if cur is None:
            return
        if cur == "shift":
            if args:
                raise DomainError("shift takes no arguments")
            gens.append(IsometryGenerator.shift())
        elif cur == "twist":
            gens.append(IsometryGenerator.twist(parse_class(cfg, ",".join(args) if len(args) > 1 else args[0])))
        else:
            gens.append(IsometryGenerator.reflection(parse_vector(cfg, ",".join(args))))

    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        head, _, rest = tok.partition(":")
        if head in ("shift", "twist", "refl"):
            close()
            cur, args = head, ([rest] if rest else [])
        elif cur in ("twist", "refl"):
            args.append(tok)
        else:
            raise DomainError(f"cannot parse generator {tok!r}; use shift, twist:<class> or refl:<r,delta,s>")
    close()
    if cur is None:
        raise DomainError("empty word")
    return IsometryWord(cfg, tuple(gens))


def cmd_act(args, run):
    cfg = load_config(args.config)
    word = parse_word(cfg, args.word)
    ok, cert = verify_hodge_isometry(word)
    lines = [f"word: {word}", f"isometry: {str(ok).lower()}"]
    lines += ["matrix: " + " ".join(fmt(c) for c in row) for row in cert.matrix]
    if args.klass:
        v = parse_vector(cfg, args.klass)
        lines.append(f"image of {v}: {apply_word(word, v)}")
    if args.point:
        p = parse_point(cfg, args.point)
        lines.append(f"image of exp({p}): {apply_word_complex(word, p.exp(cfg))}")
    _emit(run, "\n".join(lines) + "\n", args.out)


def cmd_reduce(args, run):
    cfg = load_config(args.config)
    p = parse_point(cfg, args.point)
    q, word = reduce_to_ample_chamber(cfg, p, args.max_steps)
    lines = [f"before: {p}", f"after: {q}", f"word: {word}", f"steps: {len(word)}", "exact: true"]
    _emit(run, "\n".join(lines) + "\n", args.out)


def cmd_heart(args, run):
    cfg = load_config(args.config)
    p = parse_point(cfg, args.point)
    m = read_mock_csv(cfg, Path(args.mock).read_text(encoding="utf-8"))
    t, f = torsion_pair_split(cfg, m, p)
    lines = [f"point: {p}", f"cut: beta.omega = {fmt(cfg.dot(p.beta, p.omega))}"]
    for part, pos in ((t, HeartPosition.IN_T), (f, HeartPosition.IN_F_SHIFTED)):
        for v, kind in part.factors:
            tok = heart_phase(cfg, v, p, pos)
            z = tok.charge
            lines.append(f"{pos.value}: {v} {kind.value} Z={fmt(z.re)}+{fmt(z.im)}i {tok}")
    chk = check_stability_function(cfg, p)
    lines.append(f"stability function: {str(chk.ok).lower()}" + (f" witness {chk.witness}" if chk.witness else ""))
    _emit(run, "\n".join(lines) + "\n", args.out)


def cmd_large_volume(args, run):
    cfg = load_config(args.config)
    p = parse_point(cfg, args.point)
    vE, vA = parse_vector(cfg, args.vE), parse_vector(cfg, args.vA)
    sE, sA = twisted_slopes(cfg, vE, p), twisted_slopes(cfg, vA, p)
    lines = [
        f"E: {vE} mu={fmt(sE.mu)} nu={fmt(sE.nu)} limit phase={asymptotic_phase_class(cfg, vE, p)}",
        f"A: {vA} mu={fmt(sA.mu)} nu={fmt(sA.nu)} limit phase={asymptotic_phase_class(cfg, vA, p)}",
    ]
    if sE.finite and sA.finite:
        lines.append(f"twisted A <= E: {str(twisted_leq(sA, sE)).lower()}")
        for n in parse_rationals(args.n, None, "n"):
            g = large_volume_gap(cfg, vE, vA, p, n)
            lines.append(f"gap at n={fmt(n)}: {fmt(g.re)} + {fmt(g.im)}i")
        n0 = phase_order_threshold(cfg, vE, vA, p, args.n_max)
        lines.append(f"threshold: {n0 if n0 is not None else 'none'} (n_max {args.n_max})")
    _emit(run, "\n".join(lines) + "\n", args.out)


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k3stab", description="Exact numerics for stability conditions on K3 surfaces.")
    ap.add_argument("--version", action="version", version=f"k3stab {__version__}")
    ap.add_argument("--manifest", help="where to write the run manifest (default: next to the first output file)")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, point=True):
        p.add_argument("--config", required=True, help="config file, or the name of a bundled one")
        if point:
            p.add_argument("--point", default="beta=0; omega=H", help='"beta=<class>; omega=<class>"')

    p = sub.add_parser("roots", help="integral vectors with bounded central charge")
    common(p)
    p.add_argument("--vector", help='complex vector "re=r,delta,s; im=r,delta,s" instead of --point')
    p.add_argument("--bound", default="1", help="charge radius m (p/q)")
    p.add_argument("--spherical", action="store_true", help="only (v, v) = -2")
    p.add_argument("--positive", action="store_true", help="only r > 0")
    p.add_argument("--norm-floor", type=int, default=-2)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-csv")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("region", help="region flags of a vector of N(X) tensor C")
    common(p)
    p.add_argument("--vector", help='complex vector "re=r,delta,s; im=r,delta,s" instead of --point')
    p.add_argument("--search-bound", default="1")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("walls", help="hole and numerical walls on a slice")
    common(p, point=False)
    p.add_argument("--class", dest="klass", default="0,0,1", help="Mukai vector r,delta,s")
    p.add_argument("--window", default=DEFAULT_WINDOW, help="x0,x1,y0,y1")
    p.add_argument("--base-beta", default="0")
    p.add_argument("--dir-beta", default="H")
    p.add_argument("--base-omega", default="0")
    p.add_argument("--dir-omega", default="H")
    p.add_argument("--grid", type=int, default=16, help="chamber grid size")
    p.add_argument("--resolution", type=int, default=POLYLINE_GRID, help="polyline sampling grid")
    p.add_argument("--depth", type=int, default=6, help="candidate pruning depth")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-csv")
    p.add_argument("--out-svg")
    p.set_defaults(func=cmd_walls)

    p = sub.add_parser("act", help="apply a word in shift / twist / reflection generators")
    p.add_argument("--config", required=True)
    p.add_argument("--word", required=True, help="e.g. shift,twist:1,refl:1,0,1")
    p.add_argument("--class", dest="klass")
    p.add_argument("--point")
    p.add_argument("--out")
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("reduce", help="reflect a point into the ample chamber")
    common(p)
    p.add_argument("--max-steps", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("heart", help="torsion pair split and heart phases of a mock sheaf")
    common(p)
    p.add_argument("--mock", required=True, help="CSV rows kind,r,delta,s with kind dim0/dim1/free")
    p.add_argument("--out")
    p.set_defaults(func=cmd_heart)

    p = sub.add_parser("large-volume", help="twisted slopes, gap and phase-order threshold")
    common(p)
    p.add_argument("--vE", required=True)
    p.add_argument("--vA", required=True)
    p.add_argument("--n", default="1", help="values of n for the gap, comma separated")
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_large_volume)
    return ap


def _attach_negatives(argv):
    """``--window -1/4,...`` -> ``--window=-1/4,...``; argparse would read the value as a flag."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and re.match(r"^-[0-9./]", tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(_attach_negatives(sys.argv[1:] if argv is None else list(argv)))
    run = _Run(args)
    try:
        args.func(args, run)
    except EnumerationCapError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return exc.exit_code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (DomainError, StabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    run.finish()
    return 0


if __name__ == "__main__":
    sys.exit(main())
