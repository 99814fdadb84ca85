import json
import subprocess
import sys
from fractions import Fraction
from xml.etree import ElementTree

import pytest
from conftest import DEG2, RANK2

from k3stab.cli import main, parse_word
from k3stab.cli.parsing import load_config, parse_class, parse_config_text, parse_point, parse_rational
from k3stab.cli.tables import read_mock_csv, read_roots_csv, read_walls_csv, walls_csv
from k3stab.errors import ConfigError, DomainError
from k3stab.lattice import MukaiVector
from k3stab.walls import default_slice, hole_walls


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_bundled_configs_load():
    assert load_config("deg2.cfg") == DEG2
    assert load_config("rank2.cfg").ns_gram == RANK2.ns_gram
    assert load_config("abelian.cfg").is_abelian


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        parse_config_text("[surface]\nsurface_type = K3\nrank = 1\ngram = 1\nample = 1\n")
    with pytest.raises(ConfigError):
        parse_config_text("[other]\n")
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.cfg"))


def test_literals():
    assert parse_rational("3/4") == Fraction(3, 4) and parse_rational("0.25") == Fraction(1, 4)
    assert parse_class(RANK2, "S+3F") == (1, 3)
    assert parse_class(RANK2, "2H") == (2, 6)
    assert parse_class(RANK2, "1/2,-1") == (Fraction(1, 2), -1)
    assert parse_class(DEG2, "-1/2") == (Fraction(-1, 2),)
    p = parse_point(DEG2, "beta=0; omega=2H")
    assert (p.beta, p.omega) == ((0,), (2,))
    for bad in ("S+Q", "3", "S 3F"):
        with pytest.raises(DomainError):
            parse_class(RANK2, bad)
    with pytest.raises(DomainError):
        parse_point(DEG2, "omega=H")


def test_parse_word():
    w = parse_word(DEG2, "shift,twist:1,refl:1,0,1")
    assert [str(g) for g in w.generators] == ["shift", "twist:1", "refl:1,0,1"]
    assert [str(g) for g in parse_word(RANK2, "twist:1,2,refl:0,1,0,-1").generators] == ["twist:1,2", "refl:0,1,0,-1"]
    with pytest.raises(DomainError):
        parse_word(DEG2, "rotate")


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "region", "--config", "deg2.cfg", "--point", "beta=0; omega=2H")[0] == 0
    assert run(capsys, "region", "--config", str(tmp_path / "nope.cfg"))[0] == 2
    assert run(capsys, "region", "--config", "deg2.cfg", "--point", "beta=0; omega=0")[0] == 3
    rc, _, err = run(capsys, "roots", "--config", "deg2.cfg", "--point", "beta=0; omega=1/20", "--bound", "40",
                     "--cap", "100")
    assert rc == 4 and "refused" in err
    assert run(capsys, "heart", "--config", "deg2.cfg", "--mock", str(tmp_path / "none.csv"))[0] == 2


def test_region_output(capsys):
    rc, out, _ = run(capsys, "region", "--config", "deg2.cfg", "--point", "beta=0; omega=2H")
    assert rc == 0 and "in_L: true" in out and "in_P0: true" in out
    rc, out, _ = run(capsys, "region", "--config", "deg2.cfg", "--point", "beta=0; omega=H")
    assert "in_L: false" in out and "(1,0,1)" in out.replace(" ", "")


def test_roots_csv_round_trip(capsys, tmp_path):
    out = tmp_path / "roots.csv"
    rc, _, _ = run(capsys, "--manifest", str(tmp_path / "m.json"), "roots", "--config", "deg2.cfg",
                   "--point", "beta=0; omega=2H", "--bound", "5", "--spherical", "--positive", "--out-csv", str(out))
    assert rc == 0
    vecs, data, notes = read_roots_csv(out.read_text())
    assert vecs == [MukaiVector(1, (-1,), 2), MukaiVector(1, (0,), 1), MukaiVector(1, (1,), 2)]
    assert all(sq == -2 for sq, _, _ in data)
    manifest = json.loads((tmp_path / "m.json").read_text())
    assert manifest["command"] == "roots" and str(out) in manifest["outputs"]
    rc, _, _ = run(capsys, "--manifest", str(tmp_path / "a.json"), "roots", "--config", "abelian.cfg",
                   "--spherical", "--bound", "3", "--out-csv", str(tmp_path / "ab.csv"))
    vecs, _, notes = read_roots_csv((tmp_path / "ab.csv").read_text())
    assert vecs == [] and any("abelian" in n for n in notes)


def test_walls_csv_round_trip():
    slc = default_slice(DEG2, (Fraction(-1, 2), Fraction(1, 2), Fraction(1, 2), 2))
    walls = hole_walls(DEG2, slc)
    back, notes = read_walls_csv(walls_csv(walls, ["n"]))
    assert notes == ["n"]
    for a, b in zip(walls, back):
        assert (a.kind, a.witness, a.locus, a.side_sets, a.segments) == (b.kind, b.witness, b.locus, b.side_sets, b.segments)


def test_walls_command_writes_svg_and_manifest(capsys, tmp_path):
    csv_path, svg_path = tmp_path / "w.csv", tmp_path / "w.svg"
    rc, _, _ = run(capsys, "walls", "--config", "deg2.cfg", "--window", "-0.5,0.5,0.5,2",
                   "--out-csv", str(csv_path), "--out-svg", str(svg_path))
    assert rc == 0
    root = ElementTree.fromstring(svg_path.read_text())
    groups = {g.get("id") for g in root.iter("{http://www.w3.org/2000/svg}g")}
    assert groups == {"chambers", "walls", "axes"}
    assert len(list(root.iter("{http://www.w3.org/2000/svg}path"))) >= 1
    manifest = json.loads((tmp_path / "w.manifest.json").read_text())
    assert set(manifest["outputs"]) == {str(csv_path), str(svg_path)}
    assert manifest["parameters"]["window"] == "-0.5,0.5,0.5,2"
    walls, notes = read_walls_csv(csv_path.read_text())
    assert any(n.startswith("potential walls") for n in notes)
    assert {w.witness for w in walls} >= {MukaiVector(1, (0,), 1)}


def test_negative_window_is_accepted(capsys, tmp_path):
    rc, out, _ = run(capsys, "walls", "--config", "deg2.cfg", "--window", "-1/4,1/4,1,2")
    assert rc == 0 and out.startswith("kind,witness")


def test_act_reduce_heart_large_volume(capsys, tmp_path):
    rc, out, _ = run(capsys, "act", "--config", "deg2.cfg", "--word", "refl:1,0,1", "--class", "0,0,1")
    assert rc == 0 and "isometry: true" in out and "(-1,0,0)" in out.replace(" ", "")
    rc, out, _ = run(capsys, "reduce", "--config", "rank2.cfg", "--point", "beta=1/3,0; omega=2,3")
    assert rc == 0 and "steps: 1" in out
    mock = tmp_path / "mock.csv"
    mock.write_text("kind,r,H,s\ndim0,0,0,1\nfree,1,1,0\nfree,1,-1,0\n")
    assert len(read_mock_csv(DEG2, mock.read_text())) == 3
    rc, out, _ = run(capsys, "heart", "--config", "deg2.cfg", "--point", "beta=0; omega=2H", "--mock", str(mock))
    assert rc == 0 and "F[1]:" in out and "stability function: true" in out
    rc, out, _ = run(capsys, "large-volume", "--config", "deg2.cfg", "--vE", "1,1,0", "--vA", "1,0,0", "--n", "3")
    assert rc == 0 and "gap at n=3: 0 + 6i" in out and "threshold: 1" in out


def test_console_script_module_entry():
    proc = subprocess.run([sys.executable, "-m", "k3stab.cli.main", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "k3stab" in proc.stdout
