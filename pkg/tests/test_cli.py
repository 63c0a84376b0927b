import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from heston_cfft import CSV_COLUMNS, load_report_schema
from heston_cfft.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_price_oracle_json_validates(capsys):
    code, out, _ = run_cli(capsys, "price", "--method", "oracle")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_report_schema())
    assert payload["method"] == "oracle"
    assert payload["mode"] == "consistent"
    assert payload["value"] == pytest.approx(13.45893, abs=1e-3)
    assert payload["err_estimate"] is not None


def test_price_cfft2_reference_value(capsys):
    code, out, _ = run_cli(capsys, "price", "--method", "cfft2", "--K", "100",
                           "--N", "2000", "--alpha", "-2")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, load_report_schema())
    assert payload["value"] == pytest.approx(13.45867, abs=1e-4)
    assert payload["abs_err_vs_oracle"] < 1e-3
    assert payload["shift"] == "exponential"


def test_price_worthless_strike(capsys):
    code, out, _ = run_cli(capsys, "price", "--method", "oracle", "--K", "0.0001")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(100.0, abs=1e-3)


def test_price_infeasible_alpha_exits_3(capsys):
    code, out, err = run_cli(capsys, "price", "--method", "cfft2", "--alpha", "-0.5")
    assert code == 3
    assert "damping-infeasible precondition: alpha < -1" in err


def test_prob_payload(capsys):
    code, out, _ = run_cli(capsys, "prob", "--measure", "P2", "--x", "-20")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "oracle"
    assert payload["mode"] == "consistent"
    assert 0.0 <= payload["value"] <= 1e-9      # reported value is clipped
    assert payload["err_estimate"] < 1e-8


def test_table1_csv_headers_and_rows(capsys):
    code, out, _ = run_cli(capsys, "table1", "--Ns", "512", "--Ks", "100")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == list(CSV_COLUMNS)
    assert len(rows) == 2
    methods = sorted(row[0] for row in rows)
    assert methods == ["carr_madan", "cfft2"]
    for row in rows:
        assert float(row[header.index("abs_err_vs_oracle")]) >= 0.0


def test_cf_scan_detects_classical_jumps_only(capsys):
    code, out, _ = run_cli(capsys, "cf-scan", "--tau", "5")
    assert code == 0
    header, rows = parse_csv(out)
    assert header[:7] == ["p", "re_joint", "im_joint", "re_original",
                          "im_original", "re_integrand", "im_integrand"]
    joint_jumps = sum(int(row[header.index("jump_joint")]) for row in rows)
    orig_jumps = sum(int(row[header.index("jump_original")]) for row in rows)
    assert joint_jumps == 0
    assert orig_jumps >= 1


def test_boundary_csv(capsys):
    code, out, _ = run_cli(capsys, "boundary", "--N", "512", "--oracle-stride", "128")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["x", "p1_none", "p2_none", "p1_linear", "p2_linear",
                      "p1_oracle", "p2_oracle"]
    assert len(rows) == 513
    assert rows[0][5] != "" and rows[1][5] == ""
    assert float(rows[0][0]) == -5.0 and float(rows[-1][0]) == 5.0


def test_convergence_csv_with_bound_overlay(capsys):
    code, out, _ = run_cli(capsys, "convergence", "--Ns", "512", "1024",
                           "--region", "0.5")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["n", "method", "shift", "alpha", "strike", "center_err",
                      "max_interior_err", "bound_value", "wall_time_ns"]
    assert len(rows) == 8
    damped_shifted = [r for r in rows if r[1] == "cfft2" and r[2] == "exponential"]
    assert damped_shifted and all(r[6] != "" for r in damped_shifted)


def test_convergence_profile_mode(capsys):
    code, out, _ = run_cli(capsys, "convergence", "--profile", "--N", "512",
                           "--profile-stride", "128")
    assert code == 0
    header, rows = parse_csv(out)
    assert header[0] == "x" and header[-1] == "bound_value"
    assert len(header) == 6                      # four schemes + x + bound
    assert len(rows) == 5                        # stride 128 over 513 nodes
    assert float(rows[0][0]) == -5.0 and float(rows[-1][0]) == 5.0
    # uncontrolled boundaries are orders of magnitude worse than controlled
    uncontrolled = float(rows[-1][header.index("err_cfft2_none_a0")])
    controlled = float(rows[-1][header.index("err_cfft2_exponential_a-2")])
    assert uncontrolled > 10.0 * controlled


def test_bench_rows(capsys):
    code, out, _ = run_cli(capsys, "bench", "--N", "2048", "--repeats", "3")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == list(CSV_COLUMNS)
    assert [row[0] for row in rows] == ["cfft2", "carr_madan"]
    for row in rows:
        assert int(row[header.index("wall_time_ns")]) > 0


def test_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "params.json"
    cfg.write_text(json.dumps({"kappa": 1.0, "theta": 0.2, "sigma": 0.3,
                               "rho": -0.3, "lambda": 0.0, "r": 0.0,
                               "mode": "consistent"}))
    _, out_default, _ = run_cli(capsys, "price", "--method", "oracle")
    _, out_config, _ = run_cli(capsys, "price", "--method", "oracle",
                               "--config", str(cfg))
    _, out_flag, _ = run_cli(capsys, "price", "--method", "oracle",
                             "--config", str(cfg), "--r", "0.03")
    v_default = json.loads(out_default)["value"]
    v_config = json.loads(out_config)["value"]
    v_flag = json.loads(out_flag)["value"]
    assert abs(v_default - v_config) > 1e-3     # config overrides defaults
    assert abs(v_flag - v_config) > 1e-4        # flag overrides config


def test_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"kappa": 3.0}')
    code, _, err = run_cli(capsys, "price", "--config", str(cfg))
    assert code == 2
    assert "missing keys" in err


def test_invalid_parameters_exit_2(capsys):
    code, _, err = run_cli(capsys, "price", "--rho", "1.5")
    assert code == 2
    assert "rho" in err


def test_invalid_grid_exits_2(capsys):
    code, _, err = run_cli(capsys, "price", "--method", "cfft2", "--N", "1001")
    assert code == 2
    assert "even" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(capsys, "price", "--method", "cfft2", "--N", "512",
                           "--out", str(target))
    assert code == 0 and out == ""
    payload = json.loads(target.read_text())
    jsonschema.validate(payload, load_report_schema())


def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "heston_cfft.cli", "price", "--method", "cfft2",
         "--N", "512"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["method"] == "cfft2"
