import json
from pathlib import Path

import pandas as pd
from typer.testing import CliRunner

from pathseries import cli
from pathseries.catalog import CATALOG_IDS
from pathseries.io_excel import REPORT_SHEET_NAME
from pathseries.models import VerificationReport
from pathseries.series import QSeries

runner = CliRunner()


def _json(text: str):
    starts = [i for i in (text.find("{"), text.find("[")) if i >= 0]
    return json.loads(text[min(starts):])


def test_catalog_lists_every_identity():
    result = runner.invoke(cli.app, ["catalog"])
    assert result.exit_code == 0
    for identity in CATALOG_IDS:
        assert identity in result.stdout


def test_verify_passes():
    result = runner.invoke(cli.app, ["verify", "thm1_i2", "--trunc", "60"])
    assert result.exit_code == 0, result.output
    assert "PASS thm1_i2 mod q^60" in result.stdout


def test_verify_json():
    result = runner.invoke(cli.app, ["verify", "thm1_i1", "--trunc", "40", "--json"])
    assert result.exit_code == 0, result.output
    payload = _json(result.stdout)
    assert payload["identity"] == "thm1_i1"
    assert payload["pass"] is True
    assert payload["trunc"] == 40
    assert payload["first_mismatch"] is None


def test_verify_matrix_reports_index_reading():
    result = runner.invoke(cli.app, ["verify", "matrix_M"])
    assert result.exit_code == 0, result.output
    assert "index convention: standard" in result.stdout


def test_verify_xdeg_report():
    result = runner.invoke(cli.app, ["verify", "bridge_c_i2", "--trunc", "20", "--xdeg-report"])
    assert result.exit_code == 0, result.output
    assert "x-support: 0.." in result.stdout


def test_unknown_identity_is_a_usage_error():
    result = runner.invoke(cli.app, ["verify", "no_such_id"])
    assert result.exit_code == 2


def test_bad_truncation_is_a_usage_error():
    result = runner.invoke(cli.app, ["verify", "thm1_i1", "--trunc", "0"])
    assert result.exit_code == 2


def test_mismatch_exits_with_one(monkeypatch):
    failing = VerificationReport(
        identity="thm1_i1",
        trunc=5,
        passed=False,
        first_mismatch={"xdeg": "0", "qdeg": "3", "lhs": "1", "rhs": "2"},
    )
    monkeypatch.setattr(cli, "run_many", lambda ids, truncations, threads: [failing])
    result = runner.invoke(cli.app, ["verify", "thm1_i1"])
    assert result.exit_code == 1
    assert "FAIL thm1_i1 mod q^5 first mismatch at x^0 q^3: 1 vs 2" in result.stdout


def test_verify_writes_workbook(tmp_path: Path):
    out = tmp_path / "results" / "reports.xlsx"
    result = runner.invoke(cli.app, ["verify", "euler", "--trunc", "30", "--xlsx", str(out)])
    assert result.exit_code == 0, result.output
    df = pd.read_excel(out, sheet_name=REPORT_SHEET_NAME)
    assert list(df["identity"]) == ["euler"]
    assert bool(df["pass"].iloc[0])


def test_config_file_sets_truncation(tmp_path: Path):
    cfg = tmp_path / "config.yaml"
    cfg.write_text("truncations:\n  thm1_i1: 30\n", encoding="utf-8")
    result = runner.invoke(cli.app, ["verify", "thm1_i1", "--config", str(cfg), "--json"])
    assert result.exit_code == 0, result.output
    assert _json(result.stdout)["trunc"] == 30


def test_expand_product_json():
    result = runner.invoke(cli.app, ["expand", "rr_product:1", "--trunc", "8", "--json"])
    assert result.exit_code == 0, result.output
    assert _json(result.stdout) == {
        "trunc": 8,
        "terms": [[0, [[0, "1"], [1, "1"], [2, "1"], [3, "1"], [4, "2"], [5, "2"], [6, "3"], [7, "3"]]]],
    }


def test_expand_path_series_text():
    result = runner.invoke(cli.app, ["expand", "J_3L0", "--trunc", "3"])
    assert result.exit_code == 0, result.output
    assert "x^0: 1 + O(q^3)" in result.stdout
    assert "x^1: q + q^2 + O(q^3)" in result.stdout


def test_expand_unknown_series():
    result = runner.invoke(cli.app, ["expand", "FD:3"])
    assert result.exit_code == 2


def test_table_text_and_json():
    result = runner.invoke(cli.app, ["table", "b1", "--n", "5"])
    assert result.exit_code == 0, result.output
    assert "q^9(1 + q^2)" in result.stdout

    result = runner.invoke(cli.app, ["table", "c2", "--n", "2", "--json"])
    assert result.exit_code == 0, result.output
    rows = _json(result.stdout)
    assert [r["n"] for r in rows] == [0, 1, 2]
    assert rows[-1]["value_at_1"] == "4"
    assert "text" not in rows[0]


def test_table_unknown_family():
    result = runner.invoke(cli.app, ["table", "d1"])
    assert result.exit_code == 2


def test_table_xlsx(tmp_path: Path):
    out = tmp_path / "tables.xlsx"
    result = runner.invoke(cli.app, ["table", "b2", "--n", "4", "--xlsx", str(out)])
    assert result.exit_code == 0, result.output
    df = pd.read_excel(out, sheet_name="b2")
    assert list(df["n"]) == [0, 1, 2, 3, 4]


def test_json_number_types():
    # coefficients are decimal strings; orders, supports and indices stay integers
    result = runner.invoke(cli.app, ["verify", "qdif", "--trunc", "10", "--json"])
    assert result.exit_code == 0, result.output
    payload = _json(result.stdout)
    assert isinstance(payload["trunc"], int)
    assert all(isinstance(v, int) for v in payload["x_support"])

    result = runner.invoke(cli.app, ["table", "b1", "--n", "3", "--json"])
    rows = _json(result.stdout)
    assert [type(r["n"]) for r in rows] == [int] * 4
    assert rows[2]["min_degree"] is None
    assert rows[3]["min_degree"] == 4
    assert rows[3]["polynomial"] == [[4, "1"]]
    assert all(isinstance(r["value_at_1"], str) for r in rows)

    failing = VerificationReport.from_comparison("demo", QSeries.from_terms({2: 7}, 4), QSeries.zero(4))
    mismatch = json.loads(failing.to_json())["first_mismatch"]
    assert mismatch == {"xdeg": "0", "qdeg": "2", "lhs": "7", "rhs": "0"}
