"""End-to-end tests that run the installed command."""
import json
import shutil
import subprocess
import sys

import pytest

from covlab import conetomo as ct
from covlab.exactgeom import box, convex_hull, polytope_to_json, simplex

_EXE = shutil.which("covlab")
BASE = [_EXE] if _EXE else [sys.executable, "-m", "covlab"]


def run(*args, check_code=0):
    proc = subprocess.run(BASE + [str(a) for a in args], capture_output=True, text=True)
    if check_code is not None:
        assert proc.returncode == check_code, proc.stderr
    return proc


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("bodies")

    def put(name, obj):
        path = d / name
        path.write_text(json.dumps(obj))
        return path

    return {
        "dir": d,
        "cube": put("cube.json", polytope_to_json(box((0, 0, 0), (1, 1, 1)))),
        "tetra": put("tetra.json", polytope_to_json(simplex(3))),
        "sq": put("sq.json", polytope_to_json(box((0, 0), (1, 1)))),
        "tri": put("tri.json", polytope_to_json(convex_hull([(0, 0), (1, 0), (0, 1)]))),
        "oct": put("oct.json", ct.cone_to_json(ct.cone_from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))),
        "lid": put("lid.json", polytope_to_json(box((-5, -5, -5), (5, 5, 1)))),
        "bad": put("bad.json", {"nothing": []}),
    }


def test_cov_eval(files):
    assert run("cov", "eval", "--k", files["cube"], "--x", "1/4,1/4,1/4").stdout.strip() == "27/64"
    assert run("cov", "eval", "--k", files["cube"], "--l", files["cube"], "--x", "1/2,0,0").stdout.strip() == "1/2"
    out = run("cov", "eval", "--k", files["cube"], "--x", "1/4,1/4,1/4", "--float").stdout.strip()
    assert float(out) == 27 / 64


def test_cov_grid(files, tmp_path):
    out = tmp_path / "g.csv"
    run("cov", "grid", "--k", files["cube"], "--res", 9, "--out", out)
    lines = out.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,value" and len(lines) == 1 + 729
    cross = tmp_path / "c.csv"
    run("cov", "grid", "--k", files["sq"], "--l", files["tri"], "--res", 5, "--out", cross)
    assert len(cross.read_text().splitlines()) == 26


def test_cov_usage_errors(files):
    assert "error" in run("cov", "eval", "--k", files["cube"], check_code=2).stderr
    run("cov", "eval", "--k", files["cube"], "--x", "1,2", check_code=2)
    run("cov", "eval", "--k", files["bad"], "--x", "0,0,0", check_code=2)
    run("cov", "eval", "--k", files["dir"] / "missing.json", "--x", "0,0,0", check_code=2)
    run("cov", "eval", "--k", files["cube"], "--x", "a,b,c", check_code=2)
    run("cov", "grid", "--k", files["cube"], check_code=2)


def test_faces_classify(files):
    out = json.loads(run("faces", "classify", "--polytope", files["cube"], "--w", "0,0,-1").stdout)
    assert out == {"case": 1, "exponent": 1, "dim_DPw": 2, "sum_vanishes": False}
    out = json.loads(run("faces", "classify", "--polytope", files["tetra"], "--w", "1,1,1").stdout)
    assert out["case"] == 3
    run("faces", "classify", "--polytope", files["cube"], check_code=2)


def test_faces_recover_and_lattice(files):
    out = json.loads(run("faces", "recover", "--polytope", files["cube"], "--w", "0,0,1",
                         "--x", "1/2,0,0").stdout)
    assert out["width"] == "1" and out["sum_field"] == "1" and out["cross_field"] == "1/2"
    assert len(out["face"]) == 4
    lattice = json.loads(run("faces", "lattice", "--polytope", files["cube"]).stdout)
    assert len(lattice) == 26
    assert sorted({f["dim"] for f in lattice}) == [0, 1, 2]


def test_syniso_check(files, tmp_path):
    out = json.loads(run("syniso", "check", "--p", files["cube"], "--q", files["cube"]).stdout)
    assert out["synisothetic"] is True and out["witness"]
    out = json.loads(run("syniso", "check", "--p", files["cube"], "--q", files["tetra"]).stdout)
    assert out["synisothetic"] is False


def test_xray(files):
    assert run("xray", "--cone", files["oct"], "--d", "0,0,1", "--y", "1,1").stdout.strip() == "InfiniteChord"
    out = run("xray", "--cone", files["oct"], "--d", "0,0,1", "--y", "1,1", "--clip", files["lid"])
    assert out.stdout.strip() == "1"
    run("xray", "--cone", files["bad"], "--d", "0,0,1", "--y", "1,1", check_code=2)


def test_chord(files):
    assert run("chord", "--polygon", files["sq"], "--p", "2,1/2", "--d", "-1,0").stdout.strip() == "1/2"
    proc = run("chord", "--polygon", files["sq"], "--p", "1/2,1/2", "--d", "1,0", check_code=1)
    assert proc.stdout.strip() == "PInsideBody"


@pytest.mark.parametrize("family", ["parall", "parall-due", "cones", "product", "reflected-face"])
def test_gallery_build_then_verify(family, tmp_path):
    out = tmp_path / family
    run("gallery", "build", family, "--out", out)
    manifest = json.loads((out / "expectations.json").read_text())
    assert manifest["family"] == family
    assert all((out / b["file"]).exists() for b in manifest["bodies"].values())
    proc = run("verify", "--manifest", out / "expectations.json")
    assert "FAIL" not in proc.stdout


def test_gallery_parameters(tmp_path):
    run("gallery", "build", "parall", "--params", "alpha=2;y=-1,1/2", "--out", tmp_path / "a")
    run("gallery", "build", "parall-due", "--params", "gamma=1", "--out", tmp_path / "b", check_code=2)
    run("gallery", "build", "product", "--params", "L=0,0|1,0|1,1|0,1", "--out", tmp_path / "c",
        check_code=2)
    run("gallery", "build", "parall", "--params", "zeta=1", "--out", tmp_path / "d", check_code=2)
    run("gallery", "build", "nope", "--out", tmp_path / "e", check_code=2)


def test_verify_suites():
    proc = run("verify", "--suite", "gallery")
    assert "FAIL" not in proc.stdout
    run("verify", "--suite", "syniso", "--seed", 3)
    run("verify", "--suite", "bogus", check_code=2)


def test_verify_is_deterministic():
    a = run("verify", "--suite", "identities", "--seed", 7).stdout
    b = run("verify", "--suite", "identities", "--seed", 7).stdout
    assert a == b and a


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "covlab", "cov", "eval", "--k", str(files["cube"]),
                           "--x", "0,0,0"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1"
