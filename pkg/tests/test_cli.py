import csv
import json

import numpy as np
import pytest

from etmfd import selftest
from etmfd.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, main
from etmfd.operators import MfdParams, optimal_params
from etmfd.stepper import load_snapshot


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_params_command(capsys):
    assert main(["params", "--nu", "0.5", "--gamma", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "w2 = -0.0208333" in out
    assert "0.5625" in out


def test_params_zero_courant(capsys):
    assert main(["params", "--nu", "0", "--gamma", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "w1 = 0.333333" in out and "w2 = 0" in out


def test_roots_command(capsys):
    assert main(["roots", "--k", "4.442882938158366"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "decay a = -0.0230958" in out
    assert "frequency b = 4.54913" in out


def test_converge_command(tmp_path, capsys):
    cfg = write_config(tmp_path, "c.json",
                       {"log2_h": [-3, -4], "T": 1.0, "schemes": ["etmfd"]})
    out = str(tmp_path / "out")
    assert main(["--config", cfg, "--out", out, "converge"]) == EXIT_OK
    with open(tmp_path / "out" / "converge.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert rows[0].keys() == {"log2_h", "scheme", "field", "err_l2",
                              "rate_l2", "err_disp", "rate_disp"}
    assert len(rows) == 4
    rates = [float(r["rate_l2"]) for r in rows if r["field"] == "E"][1:]
    assert 3.5 < rates[0] < 4.5


def test_converge_empty_h_list(tmp_path, capsys):
    cfg = write_config(tmp_path, "c.json", {"log2_h": []})
    assert main(["--config", cfg, "converge"]) == EXIT_VALIDATION


def test_converge_unknown_key(tmp_path):
    cfg = write_config(tmp_path, "c.json", {"not_a_key": 1})
    assert main(["--config", cfg, "converge"]) == EXIT_VALIDATION


def test_missing_config_file():
    assert main(["--config", "/no/such/file.json", "converge"]) == EXIT_VALIDATION


def test_invalid_medium(tmp_path):
    cfg = write_config(tmp_path, "c.json",
                       {"medium": {"omega_i": 5.0, "omega_p": 1.0}})
    assert main(["--config", cfg, "roots"]) == EXIT_VALIDATION


def test_converge_byte_stable(tmp_path):
    cfg = write_config(tmp_path, "c.json", {"log2_h": [-3], "T": 0.5})
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["--config", cfg, "--out", out1, "converge"]) == EXIT_OK
    assert main(["--config", cfg, "--out", out2, "converge"]) == EXIT_OK
    b1 = (tmp_path / "a" / "converge.csv").read_bytes()
    b2 = (tmp_path / "b" / "converge.csv").read_bytes()
    assert b1 == b2


def test_anisotropy_command(tmp_path):
    cfg = write_config(tmp_path, "a.json",
                       {"ppw": [12, 24], "n_theta": 16, "k": 4.0})
    out = str(tmp_path / "out")
    assert main(["--config", cfg, "--out", out, "anisotropy"]) == EXIT_OK
    with open(tmp_path / "out" / "anisotropy.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 16 * 2 * 2  # theta x ppw x schemes
    # optimal member beats Yee everywhere at 12 points per wavelength
    opt = [float(r["abs_err"]) for r in rows
           if r["scheme"] == "etmfd" and r["ppw"] == "12"]
    yee = [float(r["abs_err"]) for r in rows
           if r["scheme"] == "et-yee" and r["ppw"] == "12"]
    assert max(opt) < min(yee)


def test_anisotropy_gamma_sweep(tmp_path):
    cfg = write_config(tmp_path, "a.json",
                       {"ppw": [12], "n_theta": 8, "gammas": [0.25, 1.0, 4.0],
                        "nu_rule": "gamma_cubed", "fixed_cell_area": True,
                        "schemes": ["etmfd"]})
    out = str(tmp_path / "out")
    assert main(["--config", cfg, "--out", out, "anisotropy"]) == EXIT_OK
    for g in ("0.25", "1", "4"):
        assert (tmp_path / "out" / f"anisotropy_gamma{g}.csv").exists()


def test_simulate_command(tmp_path):
    cfg = write_config(tmp_path, "s.json",
                       {"nx": 8, "ny": 8, "T": 0.5, "snapshot_stride": 4})
    out = str(tmp_path / "out")
    assert main(["--config", cfg, "--out", out, "simulate"]) == EXIT_OK
    outdir = tmp_path / "out" / "sim_out"
    summary = json.loads((outdir / "summary.json").read_text())
    assert summary["steps"] == 8  # T=0.5, dt = 0.5/8
    probe_files = list(outdir.glob("probe_*.csv"))
    assert len(probe_files) == 1
    with open(probe_files[0]) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == summary["steps"] + 1
    assert float(rows[0]["t"]) == 0.0
    meta, E, J = load_snapshot(str(outdir / "snapshot_000004"))
    assert meta["step"] == 4
    assert len(E) == len(J) == meta["n_edges"]
    assert np.isfinite(E).all()


def test_simulate_instability_exit_code(tmp_path):
    cfg = write_config(tmp_path, "s.json", {"nx": 8, "ny": 8, "nu": 5.0,
                                            "T": 50.0})
    assert main(["--config", cfg, "--out", str(tmp_path / "o"),
                 "simulate"]) == EXIT_NUMERICAL


def test_selftest_command():
    assert main(["selftest"]) == EXIT_OK


def test_selftest_missing_config_is_usage_error():
    assert main(["--config", "/no/such.json", "selftest"]) == EXIT_VALIDATION


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_VALIDATION


def test_selftest_mutation_detected():
    # a sign flip in w2 must break the fourth-order symbol check
    def flipped(nu, gamma):
        p = optimal_params(nu, gamma)
        return MfdParams(p.w1, -p.w2, p.w3)

    ok, _ = selftest.check_fourth_order_symbol(params_fn=flipped)
    assert not ok
    ok, _ = selftest.check_fourth_order_symbol()
    assert ok
