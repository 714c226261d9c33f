from __future__ import annotations

import json
from pathlib import Path
from typing import List

import pandas as pd

from .models import VerificationReport
from .recurrences import RecurrenceTable

TABLE_COLUMNS = ["n", "polynomial", "value_at_1", "min_degree"]
REPORT_SHEET_NAME = "Reports"
DETAILS_SHEET_NAME = "Details"


def table_frame(table: RecurrenceTable) -> pd.DataFrame:
    rows = [
        {
            "n": n,
            "polynomial": p.factored(),
            "value_at_1": str(p.eval_at_1()),
            "min_degree": p.min_degree(),
        }
        for n, p in enumerate(table.polys)
    ]
    df = pd.DataFrame(rows, columns=TABLE_COLUMNS)
    # Zero polynomials have no minimal degree
    df["min_degree"] = df["min_degree"].astype("Int64")
    return df


def sheet_name_for(table: RecurrenceTable) -> str:
    return f"{table.family}{table.i}"


def write_table(path: str | Path, frame: pd.DataFrame, sheet: str) -> None:
    from openpyxl.styles import Alignment, Font

    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    mode = "a" if p.exists() else "w"
    extra = {"if_sheet_exists": "replace"} if mode == "a" else {}
    with pd.ExcelWriter(p, engine="openpyxl", mode=mode, **extra) as writer:
        frame.to_excel(writer, sheet_name=sheet, index=False)
        ws = writer.book[sheet]
        header_font = Font(bold=True)
        center = Alignment(horizontal="center", vertical="center")
        for cell in ws[1]:
            cell.font = header_font
            cell.alignment = center
        ws.column_dimensions["B"].width = 60


def reports_frame(reports: List[VerificationReport]) -> pd.DataFrame:
    rows = []
    for r in reports:
        m = r.first_mismatch
        rows.append(
            {
                "identity": r.identity,
                "trunc": r.trunc,
                "pass": r.passed,
                "xdeg": m.xdeg if m else None,
                "qdeg": m.qdeg if m else None,
                "lhs": m.lhs if m else None,
                "rhs": m.rhs if m else None,
                "x_support": f"{r.x_support[0]}..{r.x_support[1]}" if r.x_support else None,
            }
        )
    return pd.DataFrame(rows)


def write_reports(path: str | Path, reports: List[VerificationReport]) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    details = pd.DataFrame(
        [{"identity": r.identity, "details": json.dumps(r.details, default=str)} for r in reports]
    )
    with pd.ExcelWriter(p, engine="xlsxwriter") as writer:
        reports_frame(reports).to_excel(writer, sheet_name=REPORT_SHEET_NAME, index=False)
        details.to_excel(writer, sheet_name=DETAILS_SHEET_NAME, index=False)
        bold = writer.book.add_format({"bold": True})
        writer.sheets[REPORT_SHEET_NAME].set_row(0, None, bold)
