from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import List, Optional

import typer

from . import paths
from .catalog import CATALOG, CATALOG_IDS, SERIES_IDS, expand_series, run_many
from .config import default_config, load_config
from .errors import UnknownIdentity, UnknownSeries
from .io_excel import sheet_name_for, table_frame, write_reports, write_table
from .models import ConfigModel, VerificationReport
from .recurrences import b_table, c_table
from .version import __version__

app = typer.Typer(help="pathseries: path-model generating functions and q-series identity checks")

EXIT_MISMATCH = 1
EXIT_USAGE = 2


def setup_logging(level: str = "INFO"):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(levelname)s %(message)s",
    )


def _load(config: Optional[str]) -> ConfigModel:
    cfg = load_config(config) if config else default_config()
    setup_logging(cfg.log_level)
    paths.configure(cfg.max_window)
    return cfg


def _fail_usage(message: str) -> None:
    typer.echo(message, err=True)
    raise typer.Exit(code=EXIT_USAGE)


def _print_reports(reports: List[VerificationReport], as_json: bool, xdeg_report: bool) -> None:
    if as_json:
        payload = [r.model_dump(mode="json", by_alias=True) for r in reports]
        typer.echo(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
        return
    for r in reports:
        typer.echo(r.to_text())
        if "convention" in r.details:
            typer.echo(f"  index convention: {r.details['convention']}")
        if xdeg_report:
            support = f"{r.x_support[0]}..{r.x_support[1]}" if r.x_support else "n/a"
            typer.echo(f"  x-support: {support}")


@app.command()
def verify(
    identity: str = typer.Argument(..., help="Catalog id, or 'all'"),
    trunc: Optional[int] = typer.Option(None, "--trunc", min=1, help="Truncation order N (default per identity)"),
    as_json: bool = typer.Option(False, "--json", help="Print reports as JSON"),
    xdeg_report: bool = typer.Option(False, "--xdeg-report", help="Print the observed x-degree support"),
    threads: Optional[int] = typer.Option(
        None, "--threads", min=1, help="Worker threads for 'all'; they share path enumerations, arithmetic stays on one core"
    ),
    config: Optional[str] = typer.Option(None, "--config", help="YAML config file"),
    xlsx: Optional[str] = typer.Option(None, "--xlsx", help="Also export the reports to this workbook"),
):
    """Verify one identity (or all of them); exit 1 on a mathematical mismatch."""
    cfg = _load(config)
    logging.info("pathseries v%s", __version__)
    ids = CATALOG_IDS if identity == "all" else [identity]
    truncations = {i: trunc if trunc is not None else cfg.truncations.get(i) for i in ids}
    truncations = {k: v for k, v in truncations.items() if v is not None}
    try:
        reports = run_many(ids, truncations, threads or cfg.threads)
    except UnknownIdentity as exc:
        _fail_usage(str(exc))
        return
    _print_reports(reports, as_json, xdeg_report)
    if xlsx:
        write_reports(xlsx, reports)
        logging.info("Wrote reports: %s", Path(xlsx).resolve())
    if not all(r.passed for r in reports):
        raise typer.Exit(code=EXIT_MISMATCH)


@app.command()
def expand(
    series_id: str = typer.Argument(..., help=f"One of: {', '.join(SERIES_IDS)}"),
    trunc: int = typer.Option(20, "--trunc", min=1, help="Truncation order N", show_default=True),
    as_json: bool = typer.Option(False, "--json", help="Print the series as JSON"),
    config: Optional[str] = typer.Option(None, "--config", help="YAML config file"),
):
    """Expand a series modulo q^N."""
    _load(config)
    try:
        series = expand_series(series_id, trunc)
    except UnknownSeries as exc:
        _fail_usage(str(exc))
        return
    if as_json:
        typer.echo(json.dumps(series.to_json_obj()))
    else:
        typer.echo(series.to_text())


@app.command()
def table(
    family: str = typer.Argument(..., help="b1, b2, c1 or c2"),
    n: int = typer.Option(7, "--n", min=0, help="Largest index n", show_default=True),
    as_json: bool = typer.Option(False, "--json", help="Print rows as JSON"),
    xlsx: Optional[str] = typer.Option(None, "--xlsx", help="Also export the table to this workbook"),
):
    """Print b_n^(i) or c_n^(i) for n = 0..N with value at q=1 and minimal degree."""
    setup_logging()
    if family not in {"b1", "b2", "c1", "c2"}:
        _fail_usage(f"unknown family {family!r}; use b1, b2, c1 or c2")
        return
    build = b_table if family[0] == "b" else c_table
    tbl = build(int(family[1]), n)
    if as_json:
        rows = [{k: v for k, v in row.items() if k != "text"} for row in tbl.rows()]
        typer.echo(json.dumps(rows))
    else:
        frame = table_frame(tbl)
        typer.echo(frame.to_string(index=False))
    if xlsx:
        write_table(xlsx, table_frame(tbl), sheet_name_for(tbl))
        logging.info("Wrote table: %s", Path(xlsx).resolve())


@app.command("catalog")
def list_catalog():
    """List the identity catalog with default truncations."""
    width = max(len(e.id) for e in CATALOG)
    for e in CATALOG:
        typer.echo(f"{e.id.ljust(width)}  N={e.default_trunc:<4} {e.description}")


@app.callback()
def main():
    pass


if __name__ == "__main__":  # pragma: no cover
    app()
