import json
import math

import pytest

from nemprism import invariants_report, RationalMapSpec
from nemprism.cli import Job, run

SPEC = {"epsilon": 1, "n": 1, "imag": [[0.5, 1]]}


def write_spec(tmp_path, payload=SPEC, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_invariants_command(tmp_path, capsys):
    assert run(["invariants", "--spec", write_spec(tmp_path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    expected = invariants_report(RationalMapSpec.from_dict(SPEC))
    assert payload == expected
    assert payload["kz"] == -1 and payload["kz_numeric"] == -1


def test_bounds_command(capsys):
    code = run(
        ["bounds", "--prism", "1,1,1", "--omega0", str(math.pi / 2), "--K", "1"]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["lower"] == pytest.approx(4 * math.pi, abs=1e-12)
    assert payload["ratio"] == pytest.approx(math.sqrt(3.0), abs=1e-12)
    assert payload["exact"] is None
    assert payload["lp"]["feasible"] is True
    assert payload["lp"]["objective"] == pytest.approx(payload["lower"], rel=1e-9)
    assert min(payload["lp"]["xi"]) == 0.0


def test_bounds_min_constant(capsys):
    code = run(
        [
            "bounds",
            "--prism",
            "1,1,1",
            "--omega0",
            "1.0",
            "--K1",
            "1.0",
            "--K2",
            "2.0",
            "--K3",
            "0.5",
        ]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["lower_min_constant"] == pytest.approx(8.0 * 0.5, rel=1e-12)


def test_energy_command(tmp_path, capsys):
    code = run(
        ["energy", "--prism", "1,1,1", "--spec", write_spec(tmp_path), "--tol", "1e-7"]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["lower"] <= payload["exact"] <= payload["upper"]
    assert payload["exact"] == pytest.approx(43.6366950481, abs=1e-5)
    assert payload["exact_err"] <= 1e-6
    assert payload["scaled"] == pytest.approx(payload["exact"])


def test_sweep_csv_and_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = [
        "sweep",
        "--family",
        "imag1",
        "--prism",
        "1,1,1",
        "--range",
        "0.5:0.9",
        "--steps",
        "5",
    ]
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    text = out1.read_text()
    assert text == out2.read_text()  # byte-for-byte
    lines = text.strip().split("\n")
    assert lines[0] == "s,E,E_err,eps_scaled,lower,upper"
    assert len(lines) == 6
    first = dict(zip(lines[0].split(","), map(float, lines[1].split(","))))
    assert first["s"] == 0.5
    assert first["lower"] <= first["E"] <= first["upper"]
    energies = [float(ln.split(",")[1]) for ln in lines[1:]]
    assert energies == sorted(energies, reverse=True)


def test_minimize_command(capsys):
    code = run(["minimize", "--family", "imag1", "--prism", "20,10,1"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["classification"] == "smooth"
    assert payload["at_boundary"] is False
    assert 0.1 < payload["argmin"] < 0.9


def test_field_csv(tmp_path):
    out = tmp_path / "f.csv"
    code = run(
        [
            "field",
            "--prism",
            "1,1,1",
            "--spec",
            write_spec(tmp_path),
            "--grid",
            "3",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "x,y,z,nx,ny,nz"
    assert len(lines) == 1 + 4**3 - 1  # octant grid minus the vertex
    for ln in lines[1:]:
        x, y, z, nx, ny, nz = map(float, ln.split(","))
        assert nx**2 + ny**2 + nz**2 == pytest.approx(1.0, abs=1e-9)
        if x == 0.0:
            assert nx == 0.0
        if z == 0.0:
            assert abs(nz) < 1e-12


def test_job_file_mode(tmp_path, capsys):
    job = {
        "command": "energy",
        "prism": [1.0, 1.0, 1.0],
        "spec": SPEC,
        "tol": 1e-7,
    }
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    assert run(["--job", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["exact"] == pytest.approx(43.6366950481, abs=1e-5)


def test_job_round_trip_and_validation():
    job = Job(command="energy", prism=(1.0, 1.0, 1.0), spec=SPEC)
    assert Job.from_dict(job.to_dict()) == job
    with pytest.raises(ValueError, match="requires 'spec'"):
        Job(command="energy", prism=(1.0, 1.0, 1.0))
    with pytest.raises(ValueError, match="takes 'family'"):
        Job(command="sweep", prism=(1.0, 1.0, 1.0), family="imag1", spec=SPEC)
    with pytest.raises(ValueError, match="omega0"):
        Job(command="bounds", prism=(1.0, 1.0, 1.0))
    with pytest.raises(ValueError, match="bogus"):
        Job.from_dict(
            {"command": "bounds", "prism": [1, 1, 1], "omega0": 1.0, "bogus": 2}
        )


def test_exit_code_1_on_bad_inputs(tmp_path, capsys):
    # misordered prism
    assert run(["energy", "--prism", "1,2,3", "--spec", write_spec(tmp_path)]) == 1
    assert "error" in capsys.readouterr().err
    # unknown family
    assert run(["sweep", "--family", "nosuch", "--prism", "1,1,1"]) == 1
    assert "nosuch" in capsys.readouterr().err
    # invalid spec content
    bad = write_spec(tmp_path, {"epsilon": 1, "n": 2}, "bad.json")
    assert run(["invariants", "--spec", bad]) == 1
    assert "odd" in capsys.readouterr().err
    # missing required flag
    assert run(["energy", "--prism", "1,1,1"]) == 1
    capsys.readouterr()
    # unwritable output path fails cleanly, not with a traceback
    dead = str(tmp_path / "no" / "such" / "dir.json")
    assert run(["bounds", "--prism", "1,1,1", "--omega0", "1.0", "--out", dead]) == 1
    err = capsys.readouterr().err
    assert err.startswith("nemprism: error: --out:")


def test_exit_code_2_on_accuracy_failure(tmp_path, capsys):
    hard = write_spec(tmp_path, {"epsilon": 1, "n": 1, "imag": [[0.5, 1]]}, "h.json")
    code = run(
        ["energy", "--prism", "1,1,1", "--spec", hard, "--tol", "1e-16"]
    )
    assert code == 2
    err = capsys.readouterr().err
    assert "accuracy" in err
    assert "best estimate" in err


def test_out_file_keeps_stdout_clean(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = run(
        [
            "bounds",
            "--prism",
            "1,1,1",
            "--omega0",
            "1.0",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["lower"] == pytest.approx(8.0)
