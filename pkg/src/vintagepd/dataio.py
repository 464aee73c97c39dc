"""Delimited-file ingestion and tabular report emission.

Input formats (UTF-8, LF or CRLF, comma or semicolon delimited):

* triangle file: header ``issue_year,issued,d1,...,dH``; one row per
  cohort; unobserved horizon cells are empty strings (zero is a real
  default count, not a gap).
* panel file: header ``year,rating,issued,d1,...,dH``; one row per
  (vintage year, rating class).

Machine-readable report output writes raw fractions with full float
precision next to the rounded percent display, so reports round-trip
exactly and percent rendering stays presentation-only.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field

from .errors import ValidationError
from .simulation import RmseReport, SweepGrid
from .estimators import PdCurve
from .triangles import CohortRecord, CohortTriangle, PortfolioPanel

_THOUSANDS = re.compile(r"^\d{1,3}([.,]\d{3})+$")


def _detect_delimiter(header_line: str) -> str:
    return ";" if ";" in header_line else ","


def _split_lines(text: str) -> list[str]:
    return [line for line in text.replace("\r\n", "\n").split("\n") if line.strip() != ""]


def _parse_count(cell: str, where: str, lenient_thousands: bool) -> int:
    raw = cell.strip()
    if lenient_thousands and _THOUSANDS.match(raw):
        raw = raw.replace(".", "").replace(",", "")
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{where}: expected an integer count, got {cell!r}") from None


def _parse_default_cells(
    cells: list[str], colnames: list[str], where: str, lenient: bool
) -> tuple[int, ...]:
    """Parse d1..dH cells enforcing the trailing-empty contiguity rule."""
    defaults: list[int] = []
    ended = False
    for name, cell in zip(colnames, cells):
        if cell.strip() == "":
            ended = True
            continue
        if ended:
            raise ValidationError(
                f"{where}, column {name}: observed horizon after an unobserved one "
                "(observability must be contiguous)"
            )
        defaults.append(_parse_count(cell, f"{where}, column {name}", lenient))
    return tuple(defaults)


def parse_triangle(text: str, *, lenient_thousands: bool = False) -> CohortTriangle:
    """Parse a cohort triangle file into a validated CohortTriangle."""
    lines = _split_lines(text)
    if not lines:
        raise ValidationError("no rows: empty triangle file")
    delim = _detect_delimiter(lines[0])
    header = [h.strip().lower() for h in lines[0].split(delim)]
    if len(header) < 3 or header[0] != "issue_year" or header[1] != "issued":
        raise ValidationError(
            "triangle header must be 'issue_year,issued,d1,...,dH', "
            f"got {lines[0]!r}"
        )
    horizon_cols = header[2:]
    max_h = len(horizon_cols)
    records = []
    years_seen = set()
    for i, line in enumerate(lines[1:], start=2):
        cells = [c for c in line.split(delim)]
        if len(cells) < 2:
            raise ValidationError(f"row {i}: too few columns")
        where = f"row {i}"
        year = _parse_count(cells[0], f"{where}, column issue_year", lenient_thousands)
        if year in years_seen:
            raise ValidationError(f"{where}: duplicate issue_year {year}")
        years_seen.add(year)
        issued = _parse_count(cells[1], f"{where}, column issued", lenient_thousands)
        cells_d = cells[2:] + [""] * (max_h - len(cells[2:]))
        defaults = _parse_default_cells(cells_d, horizon_cols, where, lenient_thousands)
        records.append(
            CohortRecord(issue_year=year, issued=issued, cumulative_defaults=defaults)
        )
    records.sort(key=lambda r: r.issue_year)
    return CohortTriangle(cohorts=tuple(records), max_horizon=max_h)


def parse_panel(text: str, *, lenient_thousands: bool = False) -> list[PortfolioPanel]:
    """Parse a portfolio panel file into one PortfolioPanel per vintage year."""
    lines = _split_lines(text)
    if not lines:
        raise ValidationError("no rows: empty panel file")
    delim = _detect_delimiter(lines[0])
    header = [h.strip().lower() for h in lines[0].split(delim)]
    if len(header) < 4 or header[0] != "year" or header[1] != "rating" or header[2] != "issued":
        raise ValidationError(
            "panel header must be 'year,rating,issued,d1,...,dH', "
            f"got {lines[0]!r}"
        )
    horizon_cols = header[3:]
    max_h = len(horizon_cols)

    by_year: dict[int, list[tuple[str, CohortRecord]]] = {}
    rating_order: list[str] = []
    seen_pairs = set()
    for i, line in enumerate(lines[1:], start=2):
        cells = list(line.split(delim))
        if len(cells) < 3:
            raise ValidationError(f"row {i}: too few columns")
        where = f"row {i}"
        year = _parse_count(cells[0], f"{where}, column year", lenient_thousands)
        rating = cells[1].strip()
        if not rating:
            raise ValidationError(f"{where}: empty rating label")
        if (year, rating) in seen_pairs:
            raise ValidationError(f"{where}: duplicate (year, rating) = ({year}, {rating})")
        seen_pairs.add((year, rating))
        if rating not in rating_order:
            rating_order.append(rating)
        issued = _parse_count(cells[2], f"{where}, column issued", lenient_thousands)
        cells_d = cells[3:] + [""] * (max_h - len(cells[3:]))
        defaults = _parse_default_cells(cells_d, horizon_cols, where, lenient_thousands)
        record = CohortRecord(issue_year=year, issued=issued, cumulative_defaults=defaults)
        by_year.setdefault(year, []).append((rating, record))

    rating_set = set(rating_order)
    panels = []
    for year in sorted(by_year):
        ratings_here = {r for r, _ in by_year[year]}
        if ratings_here != rating_set:
            asym = sorted(rating_set ^ ratings_here)
            raise ValidationError(
                f"year {year}: rating set differs from the rest of the file: {asym}"
            )
        by_rating = dict(by_year[year])
        classes = tuple(
            (
                r,
                CohortTriangle(cohorts=(by_rating[r],), max_horizon=max_h),
            )
            for r in rating_order
        )
        panels.append(PortfolioPanel(year=year, rating_classes=classes))
    return panels


def emit_triangle(triangle: CohortTriangle) -> str:
    """Serialize a triangle to the canonical input format."""
    lines = ["issue_year,issued," + ",".join(f"d{t}" for t in range(1, triangle.max_horizon + 1))]
    for c in triangle.cohorts:
        cells = [str(c.issue_year), str(c.issued)]
        cells += [str(d) for d in c.cumulative_defaults]
        cells += [""] * (triangle.max_horizon - c.depth)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def emit_panel(panels: list[PortfolioPanel]) -> str:
    """Serialize panels to the canonical input format."""
    max_h = max(tri.max_horizon for p in panels for _, tri in p.rating_classes)
    lines = ["year,rating,issued," + ",".join(f"d{t}" for t in range(1, max_h + 1))]
    for panel in sorted(panels, key=lambda p: p.year):
        for rating, tri in panel.rating_classes:
            for c in tri.cohorts:
                cells = [str(panel.year), rating, str(c.issued)]
                cells += [str(d) for d in c.cumulative_defaults]
                cells += [""] * (max_h - c.depth)
                lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Report tables


@dataclass(frozen=True)
class Column:
    name: str
    kind: str = "label"  # label | int | rate | num


@dataclass(frozen=True)
class ReportTable:
    title: str
    columns: tuple[Column, ...]
    rows: tuple[tuple, ...] = field(default_factory=tuple)
    rate_decimals: int = 4

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValidationError(
                    f"report {self.title!r}: row width {len(row)} != "
                    f"{len(self.columns)} columns"
                )


def _pct(value: float, decimals: int) -> str:
    return f"{value * 100:.{decimals}f}%"


def emit_report(table: ReportTable, format: str = "delimited") -> bytes:
    """Serialize a report table.

    ``delimited`` is the machine format: raw fractions at full float
    precision, with a ``<col>_pct`` display column after every rate
    column. ``aligned-text`` is for eyeballing against printed tables.
    """
    if not table.rows:
        raise ValidationError(f"report {table.title!r} has no rows")
    if format == "delimited":
        return _emit_delimited(table)
    if format == "aligned-text":
        return _emit_aligned(table)
    raise ValidationError(f"unknown report format {format!r}")


def _emit_delimited(table: ReportTable) -> bytes:
    out = io.StringIO()
    out.write(f"# {table.title}\n")
    headers = []
    for col in table.columns:
        headers.append(col.name)
        if col.kind == "rate":
            headers.append(f"{col.name}_pct")
    out.write(",".join(headers) + "\n")
    for row in table.rows:
        cells = []
        for col, cell in zip(table.columns, row):
            if col.kind == "rate":
                cells.append(repr(float(cell)))
                cells.append(_pct(float(cell), table.rate_decimals))
            elif col.kind == "num":
                cells.append(repr(float(cell)))
            elif col.kind == "int":
                cells.append(str(int(cell)))
            else:
                cells.append(str(cell))
        out.write(",".join(cells) + "\n")
    return out.getvalue().encode("utf-8")


def _emit_aligned(table: ReportTable) -> bytes:
    headers = [c.name for c in table.columns]
    str_rows = []
    for row in table.rows:
        cells = []
        for col, cell in zip(table.columns, row):
            if col.kind == "rate":
                cells.append(_pct(float(cell), table.rate_decimals))
            elif col.kind == "num":
                cells.append(f"{float(cell):.6g}")
            else:
                cells.append(str(cell))
        str_rows.append(cells)
    widths = [
        max(len(headers[i]), max((len(r[i]) for r in str_rows), default=0))
        for i in range(len(headers))
    ]
    out = io.StringIO()
    out.write(table.title + "\n")
    out.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
    out.write("  ".join("-" * w for w in widths) + "\n")
    for cells in str_rows:
        out.write("  ".join(c.rjust(w) for c, w in zip(cells, widths)).rstrip() + "\n")
    return out.getvalue().encode("utf-8")


def parse_report(text: str) -> ReportTable:
    """Re-parse a delimited report emitted by emit_report.

    Accepts decimal commas in numeric cells when the file is
    semicolon-delimited, so locale-converted files load identically.
    """
    lines = _split_lines(text)
    if not lines:
        raise ValidationError("no rows: empty report")
    title = ""
    if lines[0].startswith("#"):
        title = lines[0].lstrip("#").strip()
        lines = lines[1:]
    if not lines:
        raise ValidationError("report has no header row")
    delim = _detect_delimiter(lines[0])
    raw_headers = [h.strip() for h in lines[0].split(delim)]

    keep: list[int] = []
    columns: list[Column] = []
    for i, name in enumerate(raw_headers):
        if name.endswith("_pct") and name[:-4] in raw_headers[:i]:
            continue  # display companion of an earlier raw column
        keep.append(i)
        columns.append(Column(name=name, kind="label"))

    def _number(cell: str) -> float:
        c = cell.strip()
        if delim == ";" and "," in c and "." not in c:
            c = c.replace(",", ".")
        return float(c)

    rows = []
    kinds = ["label"] * len(columns)
    for line in lines[1:]:
        cells = line.split(delim)
        row = []
        for j, i in enumerate(keep):
            cell = cells[i] if i < len(cells) else ""
            try:
                value: object = _number(cell)
                kinds[j] = "num"
            except ValueError:
                value = cell.strip()
            row.append(value)
        rows.append(tuple(row))
    columns = [Column(name=c.name, kind=k) for c, k in zip(columns, kinds)]
    return ReportTable(title=title, columns=tuple(columns), rows=tuple(rows))


# ---------------------------------------------------------------------------
# Table builders for the package's result types


def curve_table(curves: list[PdCurve], title: str, rate_decimals: int = 6) -> ReportTable:
    """Side-by-side PD curves, one row per horizon."""
    if not curves:
        raise ValidationError("no curves to tabulate")
    horizons = sorted({t for c in curves for t in c.points})
    columns = [Column("horizon", "int")]
    for c in curves:
        columns.append(Column(c.estimator.value, "rate"))
        columns.append(Column(f"cohorts_{c.estimator.value}", "int"))
    rows = []
    for t in horizons:
        row: list = [t]
        for c in curves:
            if t in c.points:
                row.append(c.points[t].rate)
                row.append(c.points[t].cohorts_used)
            else:
                row.append("")
                row.append("")
        rows.append(tuple(row))
    return ReportTable(
        title=title, columns=tuple(columns), rows=tuple(rows), rate_decimals=rate_decimals
    )


def difference_table(diff_bp: dict[int, float], title: str) -> ReportTable:
    rows = tuple((t, diff_bp[t]) for t in sorted(diff_bp))
    return ReportTable(
        title=title,
        columns=(Column("horizon", "int"), Column("difference_bp", "num")),
        rows=rows,
    )


def rmse_table(report: RmseReport, title: str) -> ReportTable:
    columns = (
        Column("horizon", "int"),
        Column("rmse_mr", "num"),
        Column("rmse_rm", "num"),
        Column("efficiency_ratio", "num"),
        Column("mean_mr", "rate"),
        Column("mean_rm", "rate"),
        Column("rmse_mr_se", "num"),
        Column("rmse_rm_se", "num"),
    )
    rows = tuple(
        (
            t + 1,
            report.rmse_mr[t],
            report.rmse_rm[t],
            report.efficiency_ratio[t],
            report.mean_mr[t],
            report.mean_rm[t],
            report.rmse_mr_se[t],
            report.rmse_rm_se[t],
        )
        for t in range(report.config.horizons)
    )
    return ReportTable(title=title, columns=columns, rows=rows, rate_decimals=6)


def sweep_table(grid: SweepGrid, title: str) -> ReportTable:
    """One row per axis point; per-horizon RMSE and efficiency columns."""
    h = grid.reports[0].config.horizons if grid.reports else 0
    columns: list[Column] = [Column(grid.axis, "num")]
    for t in range(1, h + 1):
        columns.append(Column(f"rmse_mr_h{t}", "num"))
        columns.append(Column(f"rmse_rm_h{t}", "num"))
        columns.append(Column(f"efficiency_ratio_h{t}", "num"))
    rows = []
    for value, report in zip(grid.values, grid.reports):
        row: list = [value]
        for t in range(h):
            row.append(report.rmse_mr[t])
            row.append(report.rmse_rm[t])
            row.append(report.efficiency_ratio[t])
        rows.append(tuple(row))
    return ReportTable(title=title, columns=tuple(columns), rows=tuple(rows))
