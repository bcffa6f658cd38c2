"""Multi-year parameter series, synthetic table generation, and trend diagnostics.

The temperature trajectory proxies nominal income per capita (drops
outside deep recessions deserve attention); year-over-year changes of
the chemical potential run opposite to labour-productivity growth, so
the symmetry check quantifies that anti-correlation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    InsufficientOverlapError,
    MixedSeriesError,
    NoiseError,
    SchemaError,
    UnrepresentableError,
)
from .fit import FitConfig, lm_fit
from .ingest import (
    CumulativePoints,
    DecileTable,
    IncomeBasis,
    TableKind,
    UnitHolder,
    cumulative_percents,
    to_cumulative,
)
from .models import ModelFamily, ModelParams

__all__ = [
    "SeriesEntry",
    "ParamSeries",
    "ProxySeries",
    "SymmetryReport",
    "TrendReport",
    "extract_series",
    "synth_table",
    "synth_points",
    "symmetry_check",
    "temperature_report",
]

#: Below this R^2 a fitted year is marked rejected (inflationary-period failure mode).
REJECT_BELOW_DEFAULT = 0.9


@dataclass(frozen=True)
class SeriesEntry:
    year: int
    month: int | None
    params: ModelParams
    r_squared: float
    rejected: bool
    converged: bool

    def when(self) -> tuple[int, int]:
        return (self.year, 0 if self.month is None else self.month)


@dataclass(frozen=True)
class ParamSeries:
    country: str
    kind: TableKind
    basis: IncomeBasis
    entries: tuple[SeriesEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        keys = [e.when() for e in self.entries]
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise MixedSeriesError("series entries must be strictly increasing in (year, month)")

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ProxySeries:
    """Annual growth-rate series (percent), e.g. labour productivity growth."""

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        entries = tuple((int(y), float(v)) for y, v in self.entries)
        object.__setattr__(self, "entries", entries)
        years = [y for y, _ in entries]
        if any(b <= a for a, b in zip(years, years[1:])):
            raise SchemaError("proxy years must be strictly increasing")

    @classmethod
    def from_csv(cls, source) -> "ProxySeries":
        """Load a `year,growth_percent` CSV."""
        own = isinstance(source, (str, Path))
        stream = open(source, "r", encoding="utf-8", newline="") if own else source
        name = str(source) if own else getattr(source, "name", "<stream>")
        try:
            reader = csv.DictReader(stream)
            if reader.fieldnames is None or not {"year", "growth_percent"} <= set(reader.fieldnames):
                raise SchemaError(f"{name}: proxy CSV needs columns year,growth_percent")
            entries = []
            for lineno, row in enumerate(reader, start=2):
                try:
                    entries.append((int(row["year"]), float(row["growth_percent"])))
                except (TypeError, ValueError):
                    raise SchemaError(f"{name}, row {lineno}: bad proxy row {row!r}") from None
            return cls(entries=tuple(entries))
        finally:
            if own:
                stream.close()


@dataclass(frozen=True)
class SymmetryReport:
    pearson_r: float
    sign_agreement: float
    n_overlap: int


@dataclass(frozen=True)
class TrendReport:
    temperatures: tuple[tuple[int, float], ...]
    deltas: tuple[tuple[int, float], ...]
    flagged_drops: tuple[int, ...]


def extract_series(
    tables: list[DecileTable],
    family: ModelFamily | str = ModelFamily.FERMI_DIRAC,
    config: FitConfig | None = None,
    *,
    mean_offset: float = 5.0,
    reject_below: float = REJECT_BELOW_DEFAULT,
) -> ParamSeries:
    """Fit every table and assemble the per-year parameter series.

    All tables must share (country, kind, basis) and occupy distinct
    (year, month) slots; otherwise MixedSeriesError.
    """
    if not tables:
        raise ValueError("no tables given")
    family = ModelFamily.coerce(family)
    key = tables[0].series_key()
    for t in tables:
        if t.series_key() != key:
            raise MixedSeriesError(
                f"table {t.label()} does not belong to series"
                f" {key[0]} {key[1].value}/{key[2].value}"
            )
    ordered = sorted(tables, key=lambda t: (t.year, t.month or 0))
    for a, b in zip(ordered, ordered[1:]):
        if (a.year, a.month or 0) == (b.year, b.month or 0):
            raise MixedSeriesError(f"two tables for {a.label()}")

    entries = []
    for t in ordered:
        fr = lm_fit(to_cumulative(t, mean_offset), family, config)
        entries.append(
            SeriesEntry(
                year=t.year,
                month=t.month,
                params=fr.params,
                r_squared=fr.r_squared,
                rejected=fr.r_squared < reject_below,
                converged=fr.converged,
            )
        )
    country, kind, basis = key
    return ParamSeries(country=country, kind=kind, basis=basis, entries=tuple(entries))


def _invert(family: ModelFamily, params: ModelParams, y: np.ndarray) -> np.ndarray:
    """Solve eval(x) = y for x, elementwise (closed form for all three families)."""
    T, mu, c = params.T, params.mu, params.c
    if family is ModelFamily.FERMI_DIRAC:
        return mu + T * np.log(c / y - 1.0)
    if family is ModelFamily.BOSE_EINSTEIN:
        return mu + T * np.log(c / y + 1.0)
    return mu + T * np.log(c / y)


def synth_points(
    params: ModelParams,
    family: ModelFamily | str = ModelFamily.FERMI_DIRAC,
    kind: TableKind | str = TableKind.UPPER_LIMIT,
    *,
    mean_offset: float = 5.0,
) -> CumulativePoints:
    """Noiseless on-curve points at the kind's decile grid levels."""
    family = ModelFamily.coerce(family)
    kind = TableKind.coerce(kind)
    levels = np.log(cumulative_percents(kind, mean_offset))
    if family is ModelFamily.FERMI_DIRAC and levels.max() >= params.c:
        raise UnrepresentableError(
            f"curve ceiling c={params.c:g} cannot reach the top grid level {levels.max():g}"
        )
    # levels descend with the decile index, so the solved x already ascends
    return CumulativePoints(x=_invert(family, params, levels), y=levels)


def synth_table(
    params: ModelParams,
    family: ModelFamily | str = ModelFamily.FERMI_DIRAC,
    kind: TableKind | str = TableKind.UPPER_LIMIT,
    noise_sigma: float = 0.0,
    seed: int = 0,
    *,
    mean_offset: float = 5.0,
    country: str = "synthetic",
    currency: str = "unit",
    basis: IncomeBasis = IncomeBasis.UNSPECIFIED,
    holder: UnitHolder = UnitHolder.INDIVIDUAL,
    year: int = 2000,
    month: int | None = None,
) -> DecileTable:
    """Generate a decile table whose cumulative transform lies on the curve.

    Each grid level y gets Gaussian noise (std noise_sigma), then
    eval(x) = y is solved for x and exponentiated to an income. Raises
    UnrepresentableError when the Fermi-Dirac ceiling c sits at or below
    the top grid level and NoiseError when a noisy level leaves the
    invertible range. Strong noise can also unsort the incomes, which
    surfaces as OrderError from the table constructor.
    """
    family = ModelFamily.coerce(family)
    kind = TableKind.coerce(kind)
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    levels = np.log(cumulative_percents(kind, mean_offset))
    ceiling = params.c if family is ModelFamily.FERMI_DIRAC else math.inf
    if levels.max() >= ceiling:
        raise UnrepresentableError(
            f"curve ceiling c={params.c:g} cannot reach the top grid level {levels.max():g}"
        )
    targets = levels
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        targets = levels + rng.normal(0.0, noise_sigma, size=levels.shape)
        if np.any(targets <= 0) or np.any(targets >= ceiling):
            raise NoiseError("noise pushed a cumulative level outside the invertible range (0, c)")
    incomes = np.exp(_invert(family, params, targets))
    return DecileTable(
        country=country,
        year=year,
        month=month,
        kind=kind,
        income_basis=basis,
        unit_holder=holder,
        currency=currency,
        scale_factor=1.0,
        values=tuple(incomes),
    )


def _usable(series: ParamSeries, include_rejected: bool) -> list[SeriesEntry]:
    return [e for e in series.entries if include_rejected or not e.rejected]


def symmetry_check(
    series: ParamSeries,
    proxy: ProxySeries,
    *,
    lag: int = 0,
    include_rejected: bool = False,
) -> SymmetryReport:
    """Compare year-over-year chemical-potential changes against a growth proxy.

    Delta-mu for year t (difference to the previous series entry) is
    paired with the proxy value at year t + lag. Reports the Pearson
    correlation and the fraction of overlapping years with opposite
    signs; an anti-correlated proxy gives pearson_r near -1 and
    sign_agreement near 1.
    """
    entries = _usable(series, include_rejected)
    deltas = {
        b.year: b.params.mu - a.params.mu for a, b in zip(entries, entries[1:])
    }
    proxy_by_year = dict(proxy.entries)
    years = sorted(y for y in deltas if y + lag in proxy_by_year)
    if len(years) < 3:
        raise InsufficientOverlapError(
            f"need >= 3 overlapping years after differencing, got {len(years)}"
        )
    d = np.array([deltas[y] for y in years])
    p = np.array([proxy_by_year[y + lag] for y in years])
    with np.errstate(invalid="ignore", divide="ignore"):
        r = float(np.corrcoef(d, p)[0, 1])
    return SymmetryReport(
        pearson_r=r,
        sign_agreement=float(np.mean(d * p < 0)),
        n_overlap=len(years),
    )


def temperature_report(series: ParamSeries, *, include_rejected: bool = False) -> TrendReport:
    """Temperature trajectory with year-over-year changes; drop years are flagged."""
    entries = _usable(series, include_rejected)
    if len(entries) < 2:
        raise ValueError("need at least 2 usable entries for a trend")
    temps = tuple((e.year, e.params.T) for e in entries)
    deltas = tuple(
        (b.year, b.params.T - a.params.T) for a, b in zip(entries, entries[1:])
    )
    return TrendReport(
        temperatures=temps,
        deltas=deltas,
        flagged_drops=tuple(year for year, d in deltas if d < 0),
    )
