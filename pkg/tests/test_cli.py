import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from symres.cli import (
    CSV_HEADER,
    ConfigError,
    exit_code_for,
    main,
    parse_complex,
    parse_range,
)
from symres.errors import NearPole, NoConvergence, OffSurface, SymresError, UnknownSpace
from symres.oracles import h3_gaussian_resolvent


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_info_h3(capsys):
    code, out, _ = run(capsys, "info", "H3")
    assert code == 0
    fields = dict(line.split("=", 1) for line in out.splitlines() if "=" in line and not line.startswith(" "))
    assert fields["rank"] == "1"
    assert float(fields["rho_norm_sq"]) == 1.0
    assert float(fields["branch_radius"]) == 2.0
    assert fields["surface"] == "Odd+entire"
    assert fields["weyl_order"] == "2"


def test_info_sl3r(capsys):
    code, out, _ = run(capsys, "info", "--space", "SL3R")
    assert code == 0
    assert "parity=Even" in out and "entire=false" in out
    assert "excluded half-lines: i*pi*(n+1/2) + [log r, inf)" in out
    assert "weyl_order=6" in out


def test_info_unknown(capsys):
    code, _, err = run(capsys, "info", "nosuch")
    assert code == 2
    assert "nosuch" in err


def test_csv_header_is_stable(capsys):
    assert list(CSV_HEADER) == "w_re,w_im,z_re,z_im,G_re,G_im,err,status".split(",")
    code, out, _ = run(capsys, "eval", "--space", "H3", "--w", "0.5-0.3j")
    assert code == 0
    assert out.splitlines()[0] == "w_re,w_im,z_re,z_im,G_re,G_im,err,status"


def test_eval_h3_physical(capsys):
    code, out, _ = run(capsys, "eval", "--space", "H3", "--w", "0.5-0.3j", "--tol", "1e-10")
    (rec,) = rows(out)
    assert code == 0 and rec["status"] == "ok"
    w = complex(float(rec["w_re"]), float(rec["w_im"]))
    val = complex(float(rec["G_re"]), float(rec["G_im"]))
    assert w == 0.5 - 0.3j
    assert complex(float(rec["z_re"]), float(rec["z_im"])) == pytest.approx(1 + w * w, abs=1e-15)
    assert abs(val - h3_gaussian_resolvent(w)) < 1e-9
    assert float(rec["err"]) <= 1e-10
    # 17 significant digits round-trip
    assert repr(float(rec["G_re"])) == repr(val.real)


def test_eval_sl3r_on_half_line(capsys):
    x = math.log(math.sqrt(2) / 2) + 1.0
    code, _, err = run(capsys, "eval", "--space", "SL3R", "--w", f"{x},{math.pi / 2}")
    assert code == 3
    assert "half-line" in err


def test_eval_h2_pole(capsys):
    code, _, _ = run(capsys, "eval", "--space", "H2", "--mode", "rank1", "--w", "0.5i")
    assert code == 4
    code, _, _ = run(capsys, "eval", "--space", "H2", "--w", "0.5i")
    assert code == 3


def test_eval_json_with_profile(capsys, tmp_path):
    spec = {"terms": [{"exponents": [0], "coeff_re": 2.0, "width": 1.0}]}
    path = tmp_path / "p.json"
    path.write_text(json.dumps(spec))
    out_file = tmp_path / "out.json"
    code, _, _ = run(capsys, "eval", "--space", "H3", "--profile", str(path), "--w=-1j",
                     "--format", "json", "--out", str(out_file))
    assert code == 0
    (rec,) = json.loads(out_file.read_text())
    assert rec["G_re"] == pytest.approx(2 * 0.42916042925878085686, rel=1e-10)
    code, out, _ = run(capsys, "eval", "--space", "H3", "--profile", json.dumps(spec), "--w=-1j", "--format", "json")
    assert json.loads(out)[0]["G_re"] == pytest.approx(rec["G_re"], rel=1e-12)


def test_scan_h3_grid(capsys):
    code, out, _ = run(capsys, "scan", "--space", "H3", "--re=-2:2:11", "--im=-2:2:11")
    assert code == 0
    recs = rows(out)
    assert len(recs) == 121
    assert all(r["status"] == "ok" for r in recs)
    # row-major: imaginary part outer
    assert [float(r["w_re"]) for r in recs[:3]] == pytest.approx([-2.0, -1.6, -1.2])
    assert float(recs[11]["w_im"]) == pytest.approx(-1.6)


def test_scan_aborts_on_cut(capsys):
    code, out, err = run(capsys, "scan", "--space", "H2", "--re=-0.5:0.5:3", "--im", "0:1:3")
    assert code == 3
    # rows stop just before w = 0.5i, the lowest point of the cut
    assert len(rows(out)) == 4
    assert "error at w=0.5j" in err


def test_scan_skip_invalid(capsys):
    code, out, _ = run(capsys, "scan", "--space", "H2", "--re=-0.5:0.5:3", "--im", "0:1:3",
                       "--skip-invalid", "--format", "json")
    assert code == 0
    recs = json.loads(out)
    assert len(recs) == 9
    statuses = {r["status"] for r in recs}
    assert statuses == {"ok", "off_surface"}
    bad = [r for r in recs if r["status"] != "ok"]
    assert all(r["G_re"] is None for r in bad)


def test_verify_h3(capsys):
    code, out, _ = run(capsys, "verify", "H3")
    assert code == 0
    assert "FAIL" not in out
    assert out.splitlines()[-1].endswith("checks passed")


def test_verify_corrupt_space_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "bad", "rank": 2, "roots": [{"vector": [1, 0], "m": 0}]}))
    code, _, err = run(capsys, "verify", "--space-file", str(path))
    assert code == 2
    assert err.startswith("symres: error:")
    path.write_text("{not json")
    assert main(["verify", "--space-file", str(path)]) == 2


def test_tolerance_range(capsys):
    code, _, _ = run(capsys, "eval", "--space", "H3", "--w=-1j", "--tol", "1e-2")
    assert code == 2


def test_parsers():
    assert parse_complex("1.5-0.3j") == 1.5 - 0.3j
    assert parse_complex("1.5-0.3i") == 1.5 - 0.3j
    assert parse_complex("1.5, -0.3") == 1.5 - 0.3j
    with pytest.raises(ConfigError):
        parse_complex("abc")
    assert np.allclose(parse_range("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
    for bad in ("0:1", "0:1:0", "a:b:3"):
        with pytest.raises(ConfigError):
            parse_range(bad)


def test_exit_code_mapping_is_total():
    assert exit_code_for(OffSurface("x")) == 3
    assert exit_code_for(NearPole("x")) == 4
    assert exit_code_for(NoConvergence("x")) == 5
    assert exit_code_for(UnknownSpace("x")) == 2
    assert exit_code_for(ConfigError("x")) == 2
    for cls in SymresError.__subclasses__():
        assert exit_code_for(cls("x")) != 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symres", "info", "CH2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "surface=Odd+cut" in proc.stdout
