import json
import subprocess
import sys

import numpy as np
import pytest

from moyal.cli import main, write_ppm
from moyal.phasegrid import load_grid
from moyal.seqspace import read_coeff_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_basis_then_analyze_roundtrip(tmp_path, capsys):
    f = tmp_path / "f23.csv"
    assert run(capsys, "basis", "--emit", "f[2,3]", "--out", str(f))[0] == 0
    code, out, _ = run(capsys, "analyze", str(f), "--out", str(tmp_path / "c.csv"))
    assert code == 0
    summary = json.loads(out)
    assert summary["dominant"] == [2, 3]
    assert abs(summary["dominant_abs"] - 1) < 1e-8
    assert summary["off_target_l2"] < 1e-8
    c = read_coeff_csv(tmp_path / "c.csv")
    assert c.order == 16 and abs(c.entries[2, 3] - 1) < 1e-8
    side = json.loads((tmp_path / "c.json").read_text())
    assert side["order"] == 16


def test_grid_star_of_vacuum(tmp_path, capsys):
    f0 = tmp_path / "f0.csv"
    run(capsys, "basis", "--emit", "f[0,0]", "--out", str(f0))
    code, _, _ = run(capsys, "star", "--backend", "grid", "--a", str(f0), "--b", str(f0),
                     "--out", str(tmp_path / "p.bin"), "--report", str(tmp_path / "r.json"))
    assert code == 0
    report = json.loads((tmp_path / "r.json").read_text())
    assert report["backend"] == "grid" and report["M"] == 256 and report["L"] == 8.0
    assert report["residual"]["sup_vs_matrix"] < 1e-6
    prod = load_grid(tmp_path / "p.bin")
    assert np.abs(prod.values - load_grid(f0).values).max() < 1e-6


def test_matrix_and_poly_backends(capsys):
    code, out, _ = run(capsys, "star", "--backend", "matrix", "--a", "f[0,1]", "--b", "f[1,0]")
    assert code == 0
    assert out.splitlines() == ["m,n,re,im", "0,0,1.0,0.0"]
    code, out, _ = run(capsys, "star", "--backend", "poly", "--a", "q", "--b", "p")
    assert code == 0 and out.strip() == "q*p + 1i"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["star", "--backend", "poly", "--a", "q+", "--b", "p"], 2),
        (["star", "--backend", "matrix", "--a", "q", "--b", "p"], 3),
        (["star", "--backend", "poly", "--a", "f[0,0]", "--b", "p"], 3),
        (["star", "--backend", "grid", "--a", "q", "--b", "f[0,0]"], 3),
        (["star", "--backend", "matrix", "--a", "f[20,0]", "--b", "f[0,0]"], 3),
        (["star", "--a", "missing/nothing.csv", "--b", "f[0,0]"], 4),
        (["basis", "--emit", "gauss(-1)"], 2),
        (["verify", "--only", "no-such-check"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("moyal:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["star", "--backend", "tensor", "--a", "q", "--b", "p"])
    assert exc.value.code == 2


def test_defaults_profile(tmp_path, capsys, monkeypatch):
    prof = tmp_path / "prof.json"
    prof.write_text(json.dumps({"L": 6.0, "M": 64, "order": 8}))
    monkeypatch.setenv("MOYAL_DEFAULTS", str(prof))
    code, out, _ = run(capsys, "star", "--a", "f[1,0]", "--b", "f[0,1]", "--path", "kernel")
    assert code == 0
    rep = json.loads(out)
    assert (rep["L"], rep["M"], rep["M_b"]) == (6.0, 64, 8)
    prof.write_text(json.dumps({"colour": 1}))
    assert run(capsys, "star", "--a", "q", "--b", "p")[0] == 2


def test_heatmap(tmp_path, capsys):
    img = tmp_path / "h.ppm"
    code, _, _ = run(capsys, "star", "--a", "f[0,0]", "--b", "gauss(1)", "-M", "64",
                     "--path", "kernel", "--heatmap", str(img), "--report", str(tmp_path / "r.json"))
    assert code == 0
    raw = img.read_bytes()
    assert raw.startswith(b"P6\n64 64\n255\n")
    assert len(raw) == len(b"P6\n64 64\n255\n") + 64 * 64 * 3
    side = json.loads((tmp_path / "h.ppm.json").read_text())
    assert side["max_abs"] > 0 and side["scale"] == "linear"


def test_write_ppm_orientation(tmp_path):
    mag = np.zeros((4, 4))
    mag[3, 3] = 2.0  # largest q and p: top-right pixel
    top = write_ppm(mag, tmp_path / "x.ppm")
    body = (tmp_path / "x.ppm").read_bytes()[len(b"P6\n4 4\n255\n"):]
    pix = np.frombuffer(body, np.uint8).reshape(4, 4, 3)
    assert top == 2.0 and pix[0, 3, 0] == 255 and pix.sum() == 3 * 255


def test_norms(tmp_path, capsys):
    run(capsys, "analyze", "f[1,2]", "--out", str(tmp_path / "c.csv"))
    code, out, _ = run(capsys, "norms", str(tmp_path / "c.csv"), "--rk", "1", "--st", "1,0")
    assert code == 0
    res = json.loads(out)
    assert abs(res["rk"]["1"] - 15) < 1e-8
    assert abs(res["st"]["1,0"] - 3 ** 0.5) < 1e-8
    assert abs(res["l2"] - 1) < 1e-8


def test_verify_subset(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--only", "ccr", "howe", "--json", str(tmp_path / "v.json"))
    assert code == 0
    assert "2/2 checks passed" in out
    rep = json.loads((tmp_path / "v.json").read_text())
    assert rep["passed"] and [c["name"] for c in rep["checks"]] == ["ccr", "howe"]


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--sweep-M", "32,64", "--sweep-order", "4,8", "--repeat", "1", "-L", "6")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "backend,param,seconds,l2_error"
    backends = [ln.split(",")[0] for ln in lines[1:]]
    assert backends.count("matrix") == 2 and "grid-switch" in backends


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "moyal", "star", "--a", "f[2,1]", "--b", "gauss(1.3)", "-M", "64", "--path", "kernel"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["backend"] == "grid"
