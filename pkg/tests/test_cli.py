import csv
import json

import pytest

from main import SHARPNESS_HEADER, main


def _run_json(capsys, argv):
    code = main(argv + ["--json"])
    return code, json.loads(capsys.readouterr().out)


def test_curvature_report(capsys):
    code, report = _run_json(capsys, ["curvature", "--genus", "2", "--systole", "0.1"])

    assert code == 0
    assert report["command"] == "curvature"
    assert report["data"]["sca_lo"] == pytest.approx(-110.0)
    assert report["data"]["ric_lo"] == pytest.approx(-33.394, rel=1e-3)
    assert report["data"]["sec_perp_lo"] == -4.0


def test_curvature_rounded_mode_text_output(capsys):
    code = main(["curvature", "--genus", "2", "--systole", "0.1", "--mode", "rounded"])
    out = capsys.readouterr().out

    assert code == 0
    assert "ric_lo  -40" in out
    assert "passed=0 violated=0" in out


def test_invalid_curvature_query_is_usage_error(capsys):
    code = main(["curvature", "--genus", "1", "--punctures", "1", "--systole", "0.1"])
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])

    assert code == 2
    assert err["error"]["type"] == "usage_error"


def test_unknown_check_is_usage_error(capsys):
    assert main(["certify", "--check", "K_sup,bogus"]) == 2


def test_unknown_subcommand_exits_with_two(capsys):
    assert main(["frobnicate"]) == 2


def test_version_exits_cleanly(capsys):
    assert main(["--version"]) == 0
    assert "wpbounds" in capsys.readouterr().out


def test_certify_selected_checks(capsys):
    code, report = _run_json(capsys, ["certify", "--check", "K_le_2F,C_monotone", "--threads", "2"])

    assert code == 0
    assert [c["check_id"] for c in report["checks"]] == ["K_le_2F", "C_monotone"]
    assert report["summary"]["passed"] == 2


def test_plotdata_writes_requested_rows(capsys, tmp_path):
    out = tmp_path / "curves.csv"
    code = main(["plotdata", "--functions", "H,sqrtRC", "--samples", "2", "--out", str(out)])

    with open(out, encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert code == 0
    assert rows[0] == ["r", "H", "sqrtRC"]
    assert len(rows) == 3
    assert float(rows[1][0]) == pytest.approx(1e-3)


def test_plotdata_reports_crossing(capsys, tmp_path):
    out = tmp_path / "curves.csv"
    code, report = _run_json(capsys, ["plotdata", "--functions", "H,sqrtRC", "--rmin", "0.1", "--rmax", "0.54",
                                      "--samples", "20", "--out", str(out)])

    assert code == 0
    assert report["data"]["rows"] == 20
    assert any(0.40 < r < 0.42 for r in report["data"]["crossings"])


def test_plotdata_rejects_bad_range(capsys, tmp_path):
    assert main(["plotdata", "--rmin", "0.5", "--rmax", "0.1", "--out", str(tmp_path / "x.csv")]) == 2


def test_sharpness_with_zero_modes(capsys, tmp_path):
    out = tmp_path / "sharp.csv"
    code, report = _run_json(capsys, ["sharpness", "--L", "0.1", "--modes", "0", "--points", "5",
                                      "--out", str(out)])

    with open(out, encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert code == 0
    assert rows[0] == SHARPNESS_HEADER
    assert len(rows) == 6
    assert report["data"]["max_ratio_to_G"] <= 1.0


def test_delta_report(capsys):
    code, report = _run_json(capsys, ["delta", "--eps", "1e-4"])

    assert code == 0
    assert 0.95 <= report["data"]["ratio"] <= 1.05


def test_certify_summary_groups_checks_by_kind(capsys):
    code, report = _run_json(capsys, ["certify", "--check", "K_le_2F,C_monotone,F_sup", "--threads", "1"])

    by_kind = report["summary"]["by_kind"]
    assert code == 0
    assert set(by_kind) == {"pair", "monotone", "sup"}
    assert all(entry["checks"] == 1 for entry in by_kind.values())
    assert by_kind["sup"]["cells"] > 0


def test_verify_random_summary_groups_trials_by_kind(capsys):
    code, report = _run_json(capsys, ["verify-random", "--seed", "3", "--trials", "4", "--modes", "4",
                                      "--points", "2", "--threads", "1"])

    by_kind = report["summary"]["by_kind"]
    assert code == 0
    assert sum(entry["checks"] for entry in by_kind.values()) == 4
    assert by_kind["collar_trial"]["cells"] > 0


def test_curvature_text_output_notes_missing_scalar_upper_bound(capsys):
    code = main(["curvature", "--genus", "1", "--punctures", "2", "--systole", "0.1"])
    out = capsys.readouterr().out

    assert code == 0
    assert "sca_hi  -" in out
    assert "n = 0" in out


def test_unwritable_output_is_usage_error(capsys, tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    code = main(["plotdata", "--samples", "2", "--out", str(blocker / "curves.csv")])
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])

    assert code == 2
    assert err["error"]["type"] == "usage_error"
    assert str(blocker) in err["error"]["context"]["path"]
