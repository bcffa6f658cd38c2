"""Thermodynamic curve fitting for decile income distributions.

Fits Fermi-Dirac, Bose-Einstein and Boltzmann-Gibbs curves to
cumulative decile income data on log-log axes, picks the best family by
R^2, and turns multi-year fits into temperature / chemical-potential
series for macroeconomic diagnostics.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateDataError,
    EconothermError,
    InsufficientOverlapError,
    MixedSeriesError,
    NoiseError,
    NonFiniteError,
    OrderError,
    PoleError,
    ScaleError,
    SchemaError,
    UnitError,
    UnrepresentableError,
)
from .models import (
    POLE_GUARD,
    ModelFamily,
    ModelParams,
    bg_amplitude,
    evaluate,
    gradient,
)
from .ingest import (
    CSV_COLUMNS,
    CumulativePoints,
    DecileTable,
    IncomeBasis,
    TableKind,
    UnitHolder,
    cumulative_percents,
    from_cumulative,
    parse_table,
    read_tables,
    rescale,
    to_cumulative,
    write_table_csv,
)
from .fit import (
    FitConfig,
    FitResult,
    Termination,
    grid_oracle,
    initial_guess,
    lm_fit,
    r_squared,
    select_model,
    sum_of_squares,
)
from .analysis import (
    ParamSeries,
    ProxySeries,
    SeriesEntry,
    SymmetryReport,
    TrendReport,
    extract_series,
    symmetry_check,
    synth_points,
    synth_table,
    temperature_report,
)

__all__ = [
    "__version__",
    # errors
    "EconothermError",
    "PoleError",
    "SchemaError",
    "OrderError",
    "UnitError",
    "ScaleError",
    "DegenerateDataError",
    "NonFiniteError",
    "MixedSeriesError",
    "UnrepresentableError",
    "NoiseError",
    "InsufficientOverlapError",
    # models
    "ModelFamily",
    "ModelParams",
    "POLE_GUARD",
    "evaluate",
    "gradient",
    "bg_amplitude",
    # ingest
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
    # fit
    "FitConfig",
    "FitResult",
    "Termination",
    "initial_guess",
    "lm_fit",
    "r_squared",
    "sum_of_squares",
    "grid_oracle",
    "select_model",
    # analysis
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
