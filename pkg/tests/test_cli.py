import csv
import json
import math

import numpy as np
import pytest

from zgkn_dirac.cli import main

NEAR_GROUND = ["--a", "1e-3", "--kappa", "0.5,-0.5", "--E-window", "0.99997,0.99998"]


def test_sommerfeld(capsys):
    assert main(["sommerfeld", "1", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(math.sqrt(1 - (1 / 137.036) ** 2), abs=1e-16)


def test_sommerfeld_bad_numbers_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["sommerfeld", "1", "2"])
    assert exc.value.code == 2


def test_check_exit_codes(tmp_path):
    out = tmp_path / "check.json"
    assert main(["check", "--a", "5e-4", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["max_Z"] == 4 and doc["schema_version"] == 1
    assert main(["check", "--a", "0.5", "-o", str(out)]) == 3


def test_spectrum_refused_when_conditions_fail(tmp_path):
    assert main(["spectrum", "--a", "0.6", "-o", str(tmp_path / "s.json")]) == 2


def test_coupling_given_twice_is_rejected(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# both couplings\nZ = 1\ngamma = 0.01\n")
    assert main(["check", "--config", str(cfg)]) == 1
    # a flag for one coupling replaces the file's other one
    assert main(["check", "--config", str(cfg), "--gamma", "0.01", "-o", str(tmp_path / "c.json")]) == 0


def test_fields_csv(tmp_path):
    out = tmp_path / "fields.csv"
    assert main(["fields", "--a", "1", "--r-range=-1,1", "--theta-range", "0.1,3.0",
                 "--resolution", "5,3", "--csv", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["r", "theta", "sheet", "phi_el", "E_r", "E_z", "B_r", "B_z"]
    assert len(rows) == 15
    by_point = {(float(r["r"]), float(r["theta"])): float(r["phi_el"]) for r in rows}
    assert by_point[(-1.0, 0.1)] < 0 < by_point[(1.0, 0.1)]


def test_spectrum_is_deterministic_and_round_trips(tmp_path):
    one, three = tmp_path / "one.json", tmp_path / "three.json"
    assert main(["spectrum", *NEAR_GROUND, "--threads", "1", "-o", str(one)]) == 0
    assert main(["spectrum", *NEAR_GROUND, "--threads", "3", "-o", str(three)]) == 0
    assert one.read_bytes() == three.read_bytes()
    doc = json.loads(one.read_text())
    assert len(doc["eigenvalues"]) == 2
    # a report can seed a rerun through its config block
    again = tmp_path / "again.json"
    assert main(["spectrum", "--config", str(one), "-o", str(again)]) == 0
    assert again.read_bytes() == one.read_bytes()


def test_groundstate_density_integrates_to_one(tmp_path):
    profile, summary = tmp_path / "gs.csv", tmp_path / "gs.json"
    assert main(["groundstate", *NEAR_GROUND, "--csv", str(profile), "-o", str(summary)]) == 0
    data = np.loadtxt(profile, delimiter=",", skiprows=1)
    assert data.shape == (2 * 12001 + 1, 4)
    assert np.trapezoid(data[:, 1], data[:, 0]) == pytest.approx(1.0, abs=1e-6)
    doc = json.loads(summary.read_text())
    assert abs(doc["kappa"]) == 0.5 and doc["sheet_weights"]["w_minus"] < 1e-3
