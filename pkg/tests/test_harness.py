import json

import pytest
import yaml

from ostrowski.bounds import BoundId, BoundReport
from ostrowski.harness import ConfigError, ExperimentConfig, emit_report, load_config, run_experiment
from ostrowski.harness.cli import main
from ostrowski.harness.report import CSV_COLUMNS, read_csv, to_csv, to_json
from ostrowski.harness.runner import Row, RunReport


def square_config(**overrides):
    data = dict(functions=["square"], eta_maps=["trivial"], segments=[(0, 1)], bounds=["THM22_21"], x_resolution=3)
    data.update(overrides)
    return ExperimentConfig(**data)


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------


def test_config_validation_errors():
    with pytest.raises(ConfigError, match="eta_maps"):
        square_config(eta_maps=["nope"])
    with pytest.raises(ConfigError, match="bound id"):
        square_config(bounds=["THM99"])
    with pytest.raises(ConfigError, match="q_values"):
        square_config(q_values=[0.5])
    with pytest.raises(ConfigError, match="functions"):
        square_config(functions=["nope"])
    with pytest.raises(ConfigError, match="tolerances"):
        square_config(tolerances={"wobble": 1})


def test_from_dict_rejects_unknown_and_missing_keys():
    with pytest.raises(ConfigError, match="unknown"):
        ExperimentConfig.from_dict({"functions": ["square"], "eta_maps": ["trivial"], "segments": [[0, 1]], "extra": 1})
    with pytest.raises(ConfigError, match="missing"):
        ExperimentConfig.from_dict({"functions": ["square"]})


def test_load_yaml_config(tmp_path):
    path = tmp_path / "exp.yaml"
    path.write_text(yaml.safe_dump({
        "functions": ["square", [0.0, 1.0, 1.0]], "eta_maps": ["trivial"], "segments": [[0, 1]],
        "bounds": ["THM22_21"], "x_resolution": 5, "name": "yaml",
    }))
    config = load_config(path)
    assert config.segments == [(0.0, 1.0)] and config.name == "yaml"
    assert len(run_experiment(config).rows) == 10


def test_digest_ignores_output_location():
    assert square_config().digest() == square_config(output={"path": "elsewhere.csv", "format": "csv"}).digest()
    assert square_config().digest() != square_config(x_resolution=5).digest()


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------


def test_three_row_config():
    report = run_experiment(square_config())
    assert [r.x for r in report.rows] == [0.0, 0.5, 1.0]
    assert all(r.holds for r in report.rows)
    assert report.summary["holds"] == 3 and report.violations == 0


def test_empty_bounds_gives_empty_report():
    report = run_experiment(square_config(bounds=[]))
    assert report.rows == []
    assert (report.summary["rows"], report.summary["holds"], report.summary["violations"], report.summary["skips"]) == (0, 0, 0, 0)


def test_identity_equality_row():
    report = run_experiment(square_config(functions=["identity"], x_points=[1.0]))
    (row,) = report.rows
    assert row.slack == pytest.approx(0.0, abs=1e-13) and row.holds


def test_skip_reasons():
    config = ExperimentConfig(
        functions=["square"], eta_maps=["doubled", "sign_split"], segments=[(0, 1), (1, 0)],
        bounds=["THM22_2B", "KIRMACI_1C"], x_resolution=3,
    )
    reasons = {(r.eta, r.a, r.b, r.bound_id): r.skip_reason for r in run_experiment(config).rows}
    assert reasons[("doubled", 0.0, 1.0, "THM22_2B")] == "condition C refuted"
    assert reasons[("sign_split", 0.0, 1.0, "THM22_2B")] == "condition C refuted"
    assert reasons[("sign_split", 1.0, 0.0, "KIRMACI_1C")] == "classical bounds need a < b"
    assert reasons[("doubled", 1.0, 0.0, "THM22_2B")].startswith("segment rejected")
    assert reasons[("doubled", 0.0, 1.0, "KIRMACI_1C")] == ""


def test_nonpreinvex_derivative_skipped():
    report = run_experiment(square_config(functions=["tent"], segments=[(-1, 1)], bounds=["THM24"]))
    assert report.rows and all(r.skip_reason.startswith("|f'|^") for r in report.rows)


def test_m_bound_defaults_to_grid_supremum_and_checks_given_value():
    report = run_experiment(square_config(bounds=["THM23_COR_M"]))
    assert all(r.holds for r in report.rows)
    report = run_experiment(square_config(bounds=["THM23_COR_M"], M=1.0))
    assert all("exceeds M" in r.skip_reason for r in report.rows)


def test_rows_sorted_and_provenance():
    config = square_config(functions=["square", "identity"], bounds=["THM24", "THM22_21"], q_values=[2.0, 1.0])
    report = run_experiment(config)
    assert report.rows == sorted(report.rows, key=Row.sort_key)
    assert report.provenance["config_hash"] == [config.digest()]


# ---------------------------------------------------------------------------
# report writers
# ---------------------------------------------------------------------------


def test_three_rows_make_four_csv_lines():
    text = to_csv(run_experiment(square_config()))
    lines = text.splitlines()
    assert len(lines) == 4 and lines[0] == ",".join(CSV_COLUMNS)
    assert all(line.split(",")[10] == "true" for line in lines[1:])


def test_small_negative_slack_serialises_as_true():
    bound = BoundReport.build(BoundId.THM22_21, lhs=0.25 + 1e-12, rhs=0.25)
    assert bound.slack < 0 and bound.holds
    row = Row("square", "trivial", 0.0, 1.0, "THM22_21", 0.5, None, bound.lhs, bound.rhs, bound.slack, bound.holds)
    text = to_csv(RunReport([row], {}, {}))
    assert text.splitlines()[1].split(",")[10] == "true"
    row.holds = False
    assert to_csv(RunReport([row], {}, {})).splitlines()[1].split(",")[10] == "false"


def test_csv_round_trip(tmp_path):
    report = run_experiment(square_config(x_resolution=7))
    path = emit_report(report, tmp_path / "out.csv")
    back = read_csv(path)
    assert len(back) == 7
    for row, rec in zip(report.rows, back):
        assert float(rec["lhs"]) == row.lhs and float(rec["rhs"]) == row.rhs and float(rec["x"]) == row.x
        assert rec["q"] == ""


def test_json_mirrors_rows_and_summary(tmp_path):
    report = run_experiment(square_config())
    data = json.loads(to_json(report))
    assert data["summary"]["rows"] == 3 and len(data["rows"]) == 3
    assert data["rows"][0]["holds"] is True and "certs" in data["rows"][0]


def test_emit_report_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        emit_report(run_experiment(square_config()), tmp_path / "missing" / "out.csv")


def test_identical_configs_give_identical_bytes():
    config = square_config(functions=["square", "cube", "exp"], bounds=["THM22_21", "THM24", "KIRMACI_1D"],
                           q_values=[1.5, 2.0], x_resolution=17)
    assert to_csv(run_experiment(config)) == to_csv(run_experiment(config))


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def test_cli_bound_writes_csv(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    code = main(["bound", "--function", "square", "--a", "0", "--b", "1", "--x", "0", "0.5", "1", "--out", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 4


def test_cli_bound_polynomial_json(capsys):
    code = main(["bound", "--function", "poly:0,0,1", "--a", "0", "--b", "1", "--x", "0.5", "--format", "json"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rows"][0]["rhs"] == pytest.approx(0.25)


def test_cli_certify_exit_codes(capsys):
    assert main(["certify", "--eta", "trivial"]) == 0
    assert main(["certify", "--eta", "doubled", "--check", "condition_c"]) == 2
    assert main(["certify", "--eta", "trivial", "--check", "preinvex", "--function", "neg_square",
                 "--region", "0", "1"]) == 2
    assert main(["certify", "--eta", "sign_split", "--check", "preinvex", "--function", "neg_abs",
                 "--region", "-2", "2"]) == 0
    assert "refuted" in capsys.readouterr().out


def test_cli_error_exit_codes(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.yaml")]) == 1
    bad = tmp_path / "bad.yaml"
    bad.write_text("functions: [square]\neta_maps: [nope]\nsegments: [[0, 1]]\n")
    assert main(["run", "--config", str(bad)]) == 1
    assert main(["bound", "--function", "poly:x", "--a", "0", "--b", "1"]) == 1
    assert main(["certify", "--eta", "wobble"]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_run_config_uses_configured_output(tmp_path):
    out = tmp_path / "from_config.json"
    cfg = tmp_path / "exp.yaml"
    cfg.write_text(yaml.safe_dump({
        "functions": ["identity"], "eta_maps": ["trivial"], "segments": [[0, 1]], "bounds": ["THM22_21"],
        "x_resolution": 3, "output": {"path": str(out), "format": "json"},
    }))
    assert main(["run", "--config", str(cfg)]) == 0
    assert json.loads(out.read_text())["summary"]["holds"] == 3


def test_cli_sharpness(capsys, tmp_path):
    out = tmp_path / "ratios.csv"
    assert main(["sharpness", "--functions", "identity", "square", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "best constant estimate" in text
    assert out.read_text().startswith("function,bound_id,x,q,ratio")
