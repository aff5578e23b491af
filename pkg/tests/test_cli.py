import hashlib
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from lightspin.cli import (ConfigError, fmt, main, parse_config_text, read_table,
                           write_csv)
from lightspin.constants import CODATA2018 as C

BASE = """\
model = pauli-rel
lambda_nm = 0.159
E_hat_Vpm = 2.057e14
eta_rad = pi/2
delta_T_cycles = 5
T_cycles = 60
sample_every_cycles = 5
"""


def write(tmp_path, text, name="run.conf"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_defaults_and_angles():
    rc = parse_config_text("model = dirac\nlambda_nm = 0.159\nE_hat_Vpm = 1e14\nT_cycles = 100\n")
    assert rc.laser.eta == math.pi / 2
    assert rc.laser.delta_T_cycles == pytest.approx(5)
    assert rc.laser.wavelength == 0.159e-9
    assert rc.settings.n_max == 10 and rc.settings.steps_per_cycle is None
    rc = parse_config_text(BASE.replace("pi/2", "pi/6"))
    assert rc.laser.eta == pytest.approx(math.pi / 6)
    assert rc.echo()["model"] == "pauli-rel"


@pytest.mark.parametrize("text", [
    BASE + "bogus = 1\n",
    BASE.replace("model = pauli-rel", "model = schroedinger"),
    BASE.replace("eta_rad = pi/2", "eta_rad = 4"),
    BASE.replace("T_cycles = 60", "T_cycles = 6"),
    BASE + "n_max = 2\n",
    BASE + "n_max = 4.5\n",
    BASE + "scheme = euler\n",
    BASE + "model = dirac\n",
    BASE.replace("lambda_nm = 0.159\n", ""),
    BASE.replace("E_hat_Vpm = 2.057e14", "E_hat_Vpm = nan"),
    "just text\n",
])
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_run_writes_csv_and_manifest(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", write(tmp_path, BASE), "--out", str(out)]) == 0
    rows, summary = read_table(out / "spin_timeseries.csv")
    assert [r["t_cycles"] for r in rows] == list(range(0, 61, 5))
    assert rows[0]["s_z_over_hbar"] == 0.5
    assert set(rows[0]) == {"t_cycles", "s_z_over_hbar", "norm", "lambda_rho_quarter"}
    man = json.loads((out / "manifest.json").read_text())
    assert man["constants"]["fingerprint"] == C.fingerprint()
    assert man["config"]["model"] == "pauli-rel"
    digest = hashlib.sha256((out / "spin_timeseries.csv").read_bytes()).hexdigest()
    assert man["outputs"] == {"spin_timeseries.csv": digest}


def test_run_is_deterministic(tmp_path):
    cfg = write(tmp_path, BASE)
    main(["run", cfg, "--out", str(tmp_path / "a")])
    main(["run", cfg, "--out", str(tmp_path / "b")])
    a = (tmp_path / "a" / "spin_timeseries.csv").read_bytes()
    assert a == (tmp_path / "b" / "spin_timeseries.csv").read_bytes()


def test_dirac_run_has_no_density_column(tmp_path):
    text = BASE.replace("pauli-rel", "dirac").replace("T_cycles = 60", "T_cycles = 12") \
        .replace("delta_T_cycles = 5", "delta_T_cycles = 2") + "steps_per_cycle = 4096\nn_max = 4\n"
    assert main(["run", write(tmp_path, text), "--out", str(tmp_path)]) == 0
    rows, _ = read_table(tmp_path / "spin_timeseries.csv")
    assert "lambda_rho_quarter" not in rows[0]


def test_exit_codes(tmp_path, capsys):
    assert main(["run", write(tmp_path, BASE + "bogus = 1\n"), "--out", str(tmp_path)]) == 2
    assert main(["run", str(tmp_path / "missing.conf")]) == 2
    bad = BASE.replace("pauli-rel", "dirac") + "steps_per_cycle = 16\n"
    assert main(["run", write(tmp_path, bad), "--out", str(tmp_path)]) == 3
    lam = math.pi * C.hbar / (C.m_e * C.c)  # k^2 hbar^2/(2m) = hbar omega
    res = BASE.replace("lambda_nm = 0.159", f"lambda_nm = {fmt(lam * 1e9)}")
    assert main(["report", write(tmp_path, res)]) == 4
    err = capsys.readouterr().err
    assert "config error" in err and "numerical abort" in err and "resonance guard" in err


def test_csv_round_trip(tmp_path):
    vals = [(0.1, 1 / 3, math.pi), (1e-300, 2.5e14, -0.0)]
    write_csv(tmp_path / "x.csv", ["a", "b", "c"], vals, {"note": 1.25})
    rows, summary = read_table(tmp_path / "x.csv")
    assert [tuple(r.values()) for r in rows] == vals
    assert summary == {"note": 1.25}


def test_sweep_and_summary(tmp_path):
    cfg = write(tmp_path, BASE.replace("T_cycles = 60", "T_cycles = 30000")
                .replace("sample_every_cycles = 5", "sample_every_cycles = 20"))
    assert main(["sweep", cfg, "--eta", "pi/4,pi/2", "--out", str(tmp_path), "--jobs", "1"]) == 0
    rows, summary = read_table(tmp_path / "sweep.csv")
    assert len(rows) == 2 and all(r["error"] == "" for r in rows)
    assert summary["sin_eta_max_deviation"] < 0.05
    assert main(["sweep", cfg, "--out", str(tmp_path)]) == 2
    assert main(["sweep", cfg, "--field", "1e14", "--eta", "1", "--out", str(tmp_path)]) == 2


def test_region(tmp_path):
    assert main(["region", "--lambda-min-nm", "0.05", "--lambda-max-nm", "5", "--points", "30",
                 "--cycles", "5000", "--out", str(tmp_path)]) == 0
    rows, summary = read_table(tmp_path / "region.csv")
    lam = np.array([r["lambda"] for r in rows])
    nonempty = np.array([r["nonempty"] for r in rows])
    assert nonempty[0] == 1 and nonempty[-1] == 0
    assert np.all(nonempty[lam < summary["closing_wavelength_m"]] == 1)
    assert np.all(nonempty[lam > summary["closing_wavelength_m"]] == 0)
    assert main(["region", "--lambda-min-nm", "5", "--lambda-max-nm", "1"]) == 2


def test_report_formats(tmp_path, capsys):
    cfg = write(tmp_path, BASE)
    assert main(["report", cfg, "--format", "csv", "--cycles", "5000"]) == 0
    out = capsys.readouterr().out
    rows, _ = read_table(out)
    got = {r["quantity"]: r["value"] for r in rows}
    assert got["E_max"] == pytest.approx(3.08e14, rel=2e-3)
    assert got["u4_sigma_x_over_half_Omega"] == pytest.approx(1.0, rel=1e-6)
    assert got["u2_diagonal"] == 1
    assert main(["report", cfg]) == 0
    strong = write(tmp_path, BASE.replace("2.057e14", "4e14"), "strong.conf")
    assert main(["report", strong]) == 0
    assert "WARNING" in capsys.readouterr().out


def test_schema_and_module_entry(capsys):
    assert main(["schema"]) == 0
    assert "spin_timeseries.csv" in capsys.readouterr().out
    proc = subprocess.run([sys.executable, "-m", "lightspin", "--version"], capture_output=True,
                          text=True)
    assert proc.returncode == 0 and "lightspin" in proc.stdout
