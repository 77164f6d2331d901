"""mdcf.commands.output
=======================
Mini-README: Serialises expansions, digit streams and verification reports as JSON
(the versioned documents of ``mdcf.schemas``), CSV in the published table layout
(header ``n, a_n, b_n, ...``, one row per step, a trailing period annotation row) or a
human-readable table rendered through the Jinja2 templates in ``mdcf/templates``.
"""

from __future__ import annotations

import csv
import io
import string
from pathlib import Path
from typing import Optional, Sequence

from jinja2 import Environment, FileSystemLoader

from ..models import Digits, ExpansionResult, ExpansionStatus, FamilyReport
from ..schemas import DigitStreamDocument, ExpansionDocument, FamilyReportDocument, ReportDocument

TEMPLATES = Environment(
    loader=FileSystemLoader(Path(__file__).resolve().parent.parent / "templates"),
    autoescape=False,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def digit_columns(width: int) -> list[str]:
    return [f"{string.ascii_lowercase[i]}_n" for i in range(width)]


def period_annotation(first_repeat: int, period: int, width: int) -> list[str]:
    """Row ``n>=N, a_{n-p}, b_{n-p}, ...`` closing a periodic table."""

    return [f"n>={first_repeat}"] + [f"{string.ascii_lowercase[i]}_{{n-{period}}}" for i in range(width)]


def _csv_text(rows: Sequence[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def _table_rows(rows: Sequence[Digits], period: Optional[int]) -> list[list[str]]:
    """CSV rows of a digit table; ``period`` adds the annotation row."""

    width = len(rows[0]) if rows else 0
    table: list[list[str]] = [["n"] + digit_columns(width)]
    for n, digits in enumerate(rows, start=1):
        table.append([str(n)] + [str(d) for d in digits])
    if period:
        table.append(period_annotation(len(rows) + 1, period, width))
    return table


def _transposed(table: list[list[str]]) -> list[str]:
    """Wide layout: one line per digit column, steps running left to right."""

    columns = list(zip(*table))
    widths = [max(len(cell) for cell in column) for column in table] if table else []
    lines = []
    for column in columns:
        cells = [cell.rjust(widths[i]) for i, cell in enumerate(column)]
        lines.append(cells[0] + " | " + "  ".join(cells[1:]))
    return lines


def render_expansion(result: ExpansionResult, label: Optional[str], fmt: str) -> str:
    if fmt == "json":
        return ExpansionDocument.from_result(result, family=label).model_dump_json(by_alias=True, indent=2) + "\n"
    rows = [record.digits for record in result.records]
    period = len(result.period) if result.status is ExpansionStatus.PERIODIC else None
    table = _table_rows(rows, period)
    if fmt == "csv":
        return _csv_text(table)
    return TEMPLATES.get_template("expansion.txt.j2").render(
        label=label or "raw input",
        strategy=result.strategy.value,
        status=result.status.value,
        preperiod=len(result.preperiod),
        period=len(result.period),
        lines=_transposed(table),
        discrepancies=result.discrepancies,
    )


def render_stream(result: ExpansionResult, label: str, count: int, fmt: str) -> str:
    rows = result.digits(count)
    if fmt == "json":
        document = DigitStreamDocument(
            family=label,
            strategy=result.strategy,
            status=result.status,
            preperiod_len=len(result.preperiod),
            period_len=len(result.period),
            rows=[list(r) for r in rows],
        )
        return document.model_dump_json(by_alias=True, indent=2) + "\n"
    table = _table_rows(rows, None)
    if fmt == "csv":
        return _csv_text(table)
    return TEMPLATES.get_template("stream.txt.j2").render(label=label, status=result.status.value, rows=table)


def render_reports(reports: Sequence[FamilyReport], fmt: str) -> str:
    if fmt == "json":
        document = ReportDocument(reports=[FamilyReportDocument.from_report(r) for r in reports], ok=all(r.ok for r in reports))
        return document.model_dump_json(by_alias=True, indent=2) + "\n"
    if fmt == "csv":
        header = ["family", "strategy", "status", "preperiod_len", "period_len", "claimed_period", "table_rows_ok", "oracle", "ok"]
        rows: list[list[object]] = [header]
        for r in reports:
            rows.append(
                [
                    r.label,
                    r.strategy.value,
                    r.status.value,
                    len(r.preperiod),
                    len(r.period),
                    "" if r.claimed_period is None else r.claimed_period,
                    r.strict_rows_match,
                    r.oracle_status or "skipped",
                    r.ok,
                ]
            )
        return _csv_text(rows)
    return TEMPLATES.get_template("reports.txt.j2").render(reports=reports)
