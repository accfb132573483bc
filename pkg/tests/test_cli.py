import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from lmcomplex import __version__
from lmcomplex.cli import main
from lmcomplex.io import (ParseError, format_complex, load_forbidden_list, parse_complex_text,
                          save_forbidden_list, write_complex)
from lmcomplex.patterns import build_forbidden_list
from lmcomplex.surfaces import catalog

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    payload = json.loads(out)
    jsonschema.validate(payload, schema(argv[0]))
    return payload


@pytest.fixture
def files(tmp_path):
    out = {}
    for name in ("sigma1", "bipyramid5", "tetrahedron", "octahedron"):
        p = tmp_path / f"{name}.txt"
        write_complex(catalog(name), p)
        out[name] = p
    return out


@pytest.fixture(scope="module")
def list_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("flist") / "L"
    fl = build_forbidden_list(17, 47, {"count": 6, "max_vertices": 8, "seed": 0}, max_merges=1)
    save_forbidden_list(fl, d)
    return d


class TestParse:
    def test_tetrahedron(self):
        S = parse_complex_text("1 2 3\n1 2 4\n1 3 4\n2 3 4\n")
        assert (S.v, S.f) == (4, 4)

    def test_degenerate_line(self):
        with pytest.raises(ParseError) as exc:
            parse_complex_text("1 2 3\n\n1 2 2\n")
        assert exc.value.line == 3

    def test_comments_and_blanks(self):
        S = parse_complex_text("# header\n\n1 2 3   # first\n  \n2 3 4\n")
        assert S.faces == ((1, 2, 3), (2, 3, 4))

    def test_bad_token_column(self):
        with pytest.raises(ParseError) as exc:
            parse_complex_text("1 2 3\n4 x 6\n")
        assert (exc.value.line, exc.value.column) == (2, 3)

    def test_other_errors(self):
        for text in ("1 2\n", "1 2 3\n3 2 1\n", "0 1 2\n", "1 2 3 4\n", "edge 1 1\n"):
            with pytest.raises(ParseError):
                parse_complex_text(text)

    def test_bare_edges(self):
        S = parse_complex_text("1 2 3\nedge 3 4\n")
        assert S.bare_edges() == ((3, 4),)

    def test_round_trip(self):
        for name in ("sigma2", "icosahedron", "rp2_six"):
            text = format_complex(catalog(name))
            assert format_complex(parse_complex_text(text)) == text
        text = "1 2 3\n2 3 4\nedge 4 5\n"
        assert format_complex(parse_complex_text(text)) == text

    def test_list_round_trip(self, list_dir):
        fl = load_forbidden_list(list_dir)
        assert fl.labels_L2 and len(fl.members_L2) == len(fl.labels_L2)
        assert (fl.degree_bound, fl.face_cap, fl.complete) == (17, 47, False)
        manifest = json.loads((list_dir / "manifest.json").read_text())
        assert manifest["parameters"]["face_cap"] == 47


class TestCommands:
    def test_inv_sigma1(self, capsys, files):
        out = run_json(capsys, "inv", files["sigma1"])
        assert out["mu"] == "7/8" and out["version"] == __version__

    def test_mutilde(self, capsys, files):
        out = run_json(capsys, "mutilde", files["bipyramid5"], "--mode", "brute")
        assert out["value"] == "5/6"

    def test_betti(self, capsys, files):
        out = run_json(capsys, "betti", files["tetrahedron"])
        assert (out["b0"], out["b1"], out["b2"]) == (1, 0, 1)

    def test_collapse(self, capsys, files):
        assert run_json(capsys, "collapse", files["tetrahedron"])["outcome"] == "closed_core"

    def test_contains(self, capsys, files):
        assert run_json(capsys, "contains", "tetrahedron", files["bipyramid5"])["found"] is False
        out = run_json(capsys, "contains", files["tetrahedron"], files["tetrahedron"], "--count")
        assert out["count"] == 24

    def test_config(self, capsys, files):
        out = run_json(capsys, "config", files["octahedron"], "--bound", "17")
        assert out["configuration"]["kind"] == "a"

    def test_quotients(self, capsys, files):
        assert run_json(capsys, "quotients", files["tetrahedron"])["count"] == 1

    def test_list_and_certify(self, capsys, files, tmp_path):
        d = tmp_path / "L"
        out = run_json(capsys, "list", "build", "--degree", 17, "--faces", 47, "--spheres", 5,
                       "--max-vertices", 7, "--max-merges", 1, "--seed", 0, "--out", d)
        assert out["counts"]["L1"] == 1 and not out["complete"]
        cert = run_json(capsys, "certify", files["bipyramid5"], "--list", d)
        assert cert["verdict"] == "not_certified"
        assert cert["witness"]["pattern"]["f"] == 6

    def test_certify_two_tetrahedra(self, capsys, tmp_path, list_dir):
        p = tmp_path / "two.txt"
        p.write_text("1 2 3\n1 2 4\n1 3 4\n2 3 4\n5 6 7\n5 6 8\n5 7 8\n6 7 8\n")
        cert = run_json(capsys, "certify", p, "--list", list_dir)
        assert cert["verdict"] == "certified_asphericable" and cert["witness"] is None

    def test_experiments(self, capsys, tmp_path):
        for argv in (["threshold", "--n", 10, "--alpha", 1.0, 0.5, "--trials", 4],
                     ["betti", "--n", 9, "--c", 3, "--trials", 3],
                     ["collapse", "--n", 12, "--c", 0.5, "--trials", 3]):
            out = run_json(capsys, "experiment", *argv, "--seed", 5)
            assert out["seed"] == 5 and out["kind"] == argv[0]

    def test_experiment_csv(self, capsys, tmp_path):
        csv_path = tmp_path / "cells.csv"
        run_json(capsys, "experiment", "threshold", "--n", 8, 10, "--alpha", 1.0, 0.8,
                 "--trials", 2, "--seed", 1, "--csv", csv_path)
        lines = csv_path.read_text().splitlines()
        assert len(lines) == 1 + 4 and "probability" in lines[0]

    def test_csv_format(self, capsys, files):
        code, out, _ = run(capsys, "betti", files["tetrahedron"], "--format", "csv")
        assert code == 0
        header, row = out.strip().splitlines()
        assert header.split(",")[:2] == ["command", "version"] and "b2" in header

    def test_default_seed_echoed(self, capsys):
        code, out, err = run(capsys, "experiment", "collapse", "--n", 8, "--trials", 2)
        assert code == 0
        seed = int(err.split("seed:")[1].split()[0])
        assert json.loads(out)["seed"] == seed

    def test_same_seed_same_bytes(self, capsys):
        argv = ["experiment", "betti", "--n", 10, "--c", 4, "--trials", 4, "--seed", 3]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]

    def test_gen(self, capsys, tmp_path):
        code, out, _ = run(capsys, "gen", "sphere", "--vertices", 12, "--seed", 2)
        S = parse_complex_text(out)
        assert code == 0 and (S.v, S.f) == (12, 20)
        code, out, _ = run(capsys, "gen", "torus", "--m", 3, "--k", 4)
        assert parse_complex_text(out).f == 24

    def test_pipeline(self):
        gen = subprocess.run([sys.executable, "-m", "lmcomplex", "gen", "catalog", "octahedron"],
                             capture_output=True, text=True, check=True)
        inv = subprocess.run([sys.executable, "-m", "lmcomplex", "inv", "-"], input=gen.stdout,
                             capture_output=True, text=True, check=True)
        assert json.loads(inv.stdout)["chi"] == 2


class TestExitCodes:
    def test_domain_error(self, capsys, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("1 2 3\n1 2 2\n")
        code, _, err = run(capsys, "inv", p)
        assert code == 1 and ":2:" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "inv", tmp_path / "nope.txt")[0] == 1

    def test_unknown_flag(self, capsys, files):
        assert run(capsys, "inv", files["sigma1"], "--frobnicate")[0] == 2

    def test_missing_subcommand(self, capsys):
        assert run(capsys)[0] == 2

    def test_usage_error_inside_handler(self, capsys):
        assert run(capsys, "experiment", "threshold", "--n", 8, "--seed", 1)[0] == 2

    def test_out_of_range_experiment(self, capsys):
        assert run(capsys, "experiment", "betti", "--n", 5, "--c", 6, "--trials", 1, "--seed", 1)[0] == 1

    def test_brute_cap(self, capsys, tmp_path):
        p = tmp_path / "ico.txt"
        write_complex(catalog("icosahedron"), p)
        assert run(capsys, "mutilde", p, "--mode", "brute", "--cap", 10)[0] == 1
