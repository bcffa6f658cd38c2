"""Decile income tables: CSV parsing, validation, and the cumulative log-log transform.

File schema (UTF-8 CSV, header required), one row per decile:

    country, year, month, kind, basis, holder, currency, scale_factor, decile, income

kind is one of ``mean`` (10 deciles), ``upper`` (9 decile boundaries,
the top decile's boundary is never published), ``median_monthly`` (10).
month is empty for annual data. scale_factor (default 1) is multiplied
into every income at parse time, e.g. 0.0001 to move a table from a
currency into its 10000x redenomination. Rows sharing
(country, year, month, kind, basis, holder) form one table.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import OrderError, ScaleError, SchemaError, UnitError

__all__ = [
    "TableKind",
    "IncomeBasis",
    "UnitHolder",
    "DecileTable",
    "CumulativePoints",
    "CSV_COLUMNS",
    "cumulative_percents",
    "parse_table",
    "read_tables",
    "to_cumulative",
    "from_cumulative",
    "rescale",
    "write_table_csv",
]

CSV_COLUMNS = (
    "country",
    "year",
    "month",
    "kind",
    "basis",
    "holder",
    "currency",
    "scale_factor",
    "decile",
    "income",
)


class TableKind(Enum):
    MEAN_INCOME = "mean"
    UPPER_LIMIT = "upper"
    MEDIAN_MONTHLY = "median_monthly"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value))
        except ValueError:
            raise SchemaError(f"unknown table kind: {value!r}") from None

    @property
    def n_values(self) -> int:
        return 9 if self is TableKind.UPPER_LIMIT else 10


class IncomeBasis(Enum):
    NET = "net"
    GROSS = "gross"
    INACTIVE = "inactive"
    UNSPECIFIED = "unspecified"


class UnitHolder(Enum):
    INDIVIDUAL = "individual"
    HOUSEHOLD = "household"


@dataclass(frozen=True)
class DecileTable:
    """One country-year's decile incomes, already rescaled, strictly increasing."""

    country: str
    year: int
    kind: TableKind
    income_basis: IncomeBasis
    unit_holder: UnitHolder
    currency: str
    scale_factor: float
    values: tuple[float, ...]
    month: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        n = self.kind.n_values
        if len(self.values) != n:
            raise SchemaError(
                f"{self.kind.value} table needs {n} deciles, got {len(self.values)}"
                f" ({self.label()})"
            )
        for i, v in enumerate(self.values):
            if not (math.isfinite(v) and v > 0):
                raise UnitError(f"income must be positive, got {v} at decile {i + 1} ({self.label()})")
        for i in range(1, len(self.values)):
            if self.values[i] <= self.values[i - 1]:
                raise OrderError(
                    f"incomes must be strictly increasing; decile {i + 1} value"
                    f" {self.values[i]} <= decile {i} value {self.values[i - 1]} ({self.label()})"
                )
        if not (math.isfinite(self.scale_factor) and self.scale_factor > 0):
            raise SchemaError(f"scale_factor must be positive, got {self.scale_factor}")

    def label(self) -> str:
        when = f"{self.year}" if self.month is None else f"{self.year}-{self.month:02d}"
        return f"{self.country} {when} {self.kind.value}/{self.income_basis.value}"

    def series_key(self) -> tuple:
        """Identity a multi-year series must share."""
        return (self.country, self.kind, self.income_basis)


@dataclass(frozen=True)
class CumulativePoints:
    """(ln income, ln cumulative-percent) pairs, x strictly increasing.

    Transform outputs additionally have strictly decreasing y drawn from
    the decile grid; the container stays permissive so that noisy or
    deliberately pathological point sets can still be fitted.
    """

    x: np.ndarray
    y: np.ndarray
    source: DecileTable | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if x.size == 0:
            raise ValueError("empty point set")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(y)):
            raise ValueError("points must be finite")
        if np.any(np.diff(x) <= 0):
            raise ValueError("x must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return int(self.x.size)


def cumulative_percents(kind: TableKind, mean_offset: float = 5.0) -> np.ndarray:
    """Cumulative population percents paired with each decile value.

    Upper-limit boundary k carries everyone above it: 100 - 10k, so
    90, 80, ..., 10. A mean (or per-decile median) sits inside its bin:
    decile k gets 100 - 10(k-1) - mean_offset, the bin midpoint at the
    default mean_offset of 5.
    """
    if not (0.0 <= mean_offset < 10.0):
        raise ValueError(f"mean_offset must lie in [0, 10), got {mean_offset}")
    if kind is TableKind.UPPER_LIMIT:
        return 100.0 - 10.0 * np.arange(1, 10)
    return 100.0 - 10.0 * np.arange(0, 10) - mean_offset


def to_cumulative(table: DecileTable, mean_offset: float = 5.0) -> CumulativePoints:
    """Transform a table to the (ln income, ln cumulative-percent) points fits consume."""
    percents = cumulative_percents(table.kind, mean_offset)
    return CumulativePoints(
        x=np.log(np.asarray(table.values, dtype=float)),
        y=np.log(percents),
        source=table,
    )


def from_cumulative(points: CumulativePoints) -> DecileTable:
    """Inverse of :func:`to_cumulative`; needs the source table for its metadata."""
    if points.source is None:
        raise ValueError("points carry no source table to take metadata from")
    return replace(points.source, values=tuple(np.exp(points.x)))


def rescale(points: CumulativePoints, s: float) -> CumulativePoints:
    """Shift every x by ln(s): the log-log image of multiplying incomes by s."""
    if not (isinstance(s, (int, float)) and math.isfinite(s) and s > 0):
        raise ScaleError(f"scale factor must be positive and finite, got {s!r}")
    return CumulativePoints(x=points.x + math.log(s), y=points.y, source=points.source)


# ---------------------------------------------------------------------------
# CSV reading / writing


def _open(source) -> tuple[io.TextIOBase, str, bool]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline=""), str(source), True
    name = getattr(source, "name", "<stream>")
    return source, str(name), False


def _parse_row(row: dict, where: str):
    def bad(msg):
        return SchemaError(f"{where}: {msg}")

    country = (row["country"] or "").strip()
    if not country:
        raise bad("empty country")
    try:
        year = int(row["year"])
    except (TypeError, ValueError):
        raise bad(f"bad year {row['year']!r}") from None
    month_raw = (row["month"] or "").strip()
    month = None
    if month_raw:
        try:
            month = int(month_raw)
        except ValueError:
            raise bad(f"bad month {month_raw!r}") from None
        if not 1 <= month <= 12:
            raise bad(f"month out of range: {month}")
    kind = TableKind.coerce((row["kind"] or "").strip())
    try:
        basis = IncomeBasis((row["basis"] or "unspecified").strip() or "unspecified")
    except ValueError:
        raise bad(f"unknown basis {row['basis']!r}") from None
    try:
        holder = UnitHolder((row["holder"] or "").strip())
    except ValueError:
        raise bad(f"unknown holder {row['holder']!r}") from None
    currency = (row["currency"] or "").strip()
    if not currency:
        raise bad("empty currency")
    scale_raw = (row["scale_factor"] or "").strip()
    try:
        scale = float(scale_raw) if scale_raw else 1.0
    except ValueError:
        raise bad(f"bad scale_factor {scale_raw!r}") from None
    if not (math.isfinite(scale) and scale > 0):
        raise bad(f"scale_factor must be positive, got {scale}")
    try:
        decile = int(row["decile"])
    except (TypeError, ValueError):
        raise bad(f"bad decile {row['decile']!r}") from None
    if not 1 <= decile <= kind.n_values:
        raise bad(f"decile {decile} out of range 1..{kind.n_values} for kind {kind.value}")
    try:
        income = float(row["income"])
    except (TypeError, ValueError):
        raise bad(f"bad income {row['income']!r}") from None
    if not (math.isfinite(income) and income > 0):
        raise UnitError(f"{where}: income must be positive, got {income}")
    return (country, year, month, kind, basis, holder), (currency, scale), decile, income


def read_tables(source) -> list[DecileTable]:
    """Parse every decile table in a CSV file or text stream, in file order."""
    stream, name, owned = _open(source)
    try:
        reader = csv.DictReader(stream)
        if reader.fieldnames is None:
            raise SchemaError(f"{name}: empty file")
        missing = [col for col in CSV_COLUMNS if col not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{name}: missing columns {', '.join(missing)}")

        groups: dict[tuple, dict] = {}
        for lineno, row in enumerate(reader, start=2):
            where = f"{name}, row {lineno}"
            key, (currency, scale), decile, income = _parse_row(row, where)
            grp = groups.setdefault(
                key, {"currency": currency, "scale": scale, "rows": [], "first": lineno}
            )
            if grp["currency"] != currency or grp["scale"] != scale:
                raise SchemaError(
                    f"{where}: currency/scale_factor differ within one table"
                    f" (started at row {grp['first']})"
                )
            if grp["rows"] and decile != grp["rows"][-1][0] + 1:
                raise SchemaError(
                    f"{where}: decile {decile} out of sequence (expected {grp['rows'][-1][0] + 1})"
                )
            if not grp["rows"] and decile != 1:
                raise SchemaError(f"{where}: table must start at decile 1, got {decile}")
            grp["rows"].append((decile, income, lineno))

        tables = []
        for (country, year, month, kind, basis, holder), grp in groups.items():
            rows = grp["rows"]
            if len(rows) != kind.n_values:
                raise SchemaError(
                    f"{name}: table {country} {year} {kind.value} has {len(rows)} rows,"
                    f" expected {kind.n_values} (starts at row {grp['first']})"
                )
            scale = grp["scale"]
            currency = grp["currency"]
            if scale != 1.0:
                currency = f"{currency}*{scale:g}"
            values = tuple(v * scale for _, v, _ in rows)
            try:
                tables.append(
                    DecileTable(
                        country=country,
                        year=year,
                        month=month,
                        kind=kind,
                        income_basis=basis,
                        unit_holder=holder,
                        currency=currency,
                        scale_factor=scale,
                        values=values,
                    )
                )
            except (OrderError, UnitError, SchemaError) as exc:
                raise type(exc)(f"{name} (table starting at row {grp['first']}): {exc}") from None
        return tables
    finally:
        if owned:
            stream.close()


def parse_table(source) -> DecileTable:
    """Parse a CSV holding exactly one decile table."""
    tables = read_tables(source)
    if len(tables) != 1:
        raise SchemaError(f"expected exactly one table, found {len(tables)}")
    return tables[0]


def write_table_csv(table: DecileTable, stream) -> None:
    """Emit a table in the CSV schema; incomes are written pre-scale so the file round-trips."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    currency = table.currency
    if table.scale_factor != 1.0:
        suffix = f"*{table.scale_factor:g}"
        if currency.endswith(suffix):
            currency = currency[: -len(suffix)]
    for i, v in enumerate(table.values, start=1):
        writer.writerow(
            [
                table.country,
                table.year,
                "" if table.month is None else table.month,
                table.kind.value,
                table.income_basis.value,
                table.unit_holder.value,
                currency,
                f"{table.scale_factor:.17g}",
                i,
                f"{v / table.scale_factor:.17g}",
            ]
        )
