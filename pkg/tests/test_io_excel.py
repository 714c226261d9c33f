from pathlib import Path

import pandas as pd
from openpyxl import load_workbook

from pathseries.io_excel import (
    DETAILS_SHEET_NAME,
    REPORT_SHEET_NAME,
    TABLE_COLUMNS,
    reports_frame,
    sheet_name_for,
    table_frame,
    write_reports,
    write_table,
)
from pathseries.models import VerificationReport
from pathseries.recurrences import b_table, c_table


def test_table_frame():
    df = table_frame(b_table(1, 4))
    assert list(df.columns) == TABLE_COLUMNS
    assert list(df["polynomial"]) == ["1", "q", "0", "q^4", "-q^7"]
    assert pd.isna(df.loc[2, "min_degree"])
    assert df.loc[4, "min_degree"] == 7


def test_write_table_appends_sheets(tmp_path: Path):
    out = tmp_path / "tables.xlsx"
    b = b_table(2, 5)
    c = c_table(1, 3)
    write_table(out, table_frame(b), sheet_name_for(b))
    write_table(out, table_frame(c), sheet_name_for(c))
    wb = load_workbook(out)
    assert wb.sheetnames == ["b2", "c1"]
    assert wb["b2"]["A1"].font.bold
    df = pd.read_excel(out, sheet_name="c1")
    assert list(df["value_at_1"].astype(str)) == ["1", "2", "4", "8"]


def test_write_reports(tmp_path: Path):
    reports = [
        VerificationReport(identity="euler", trunc=10, passed=True, details={"note": "ok"}),
        VerificationReport(
            identity="qdif",
            trunc=10,
            passed=False,
            first_mismatch={"xdeg": "1", "qdeg": "4", "lhs": "0", "rhs": "1"},
            x_support=(0, 3),
        ),
    ]
    assert list(reports_frame(reports)["x_support"]) == [None, "0..3"]
    out = tmp_path / "reports.xlsx"
    write_reports(out, reports)
    df = pd.read_excel(out, sheet_name=REPORT_SHEET_NAME)
    assert list(df["identity"]) == ["euler", "qdif"]
    assert list(df["pass"]) == [True, False]
    assert str(df.loc[1, "qdeg"]) == "4"
    details = pd.read_excel(out, sheet_name=DETAILS_SHEET_NAME)
    assert '"note": "ok"' in details.loc[0, "details"]
