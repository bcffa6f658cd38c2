"""Exception types shared across the package."""


class EconothermError(Exception):
    """Base class for all econotherm errors."""


class PoleError(EconothermError):
    """Bose-Einstein curve evaluated inside the guard band around its pole at x = mu."""


class SchemaError(EconothermError):
    """Input file violates the decile-table CSV schema (missing column, bad field, wrong row count)."""


class OrderError(EconothermError):
    """Decile incomes are not strictly increasing."""


class UnitError(EconothermError):
    """Non-positive or non-finite income value."""


class ScaleError(EconothermError):
    """Currency rescale factor is not a positive finite number."""


class DegenerateDataError(EconothermError):
    """Point set carries no usable signal (too few points, or zero spread in y)."""


class NonFiniteError(EconothermError):
    """Objective was non-finite at the initial point of every restart."""


class MixedSeriesError(EconothermError):
    """Tables fed to a series do not share (country, kind, basis), or collide on the same year."""


class UnrepresentableError(EconothermError):
    """Requested decile grid lies above the curve's ceiling; no income solves the level equation."""


class NoiseError(EconothermError):
    """Noise draw pushed a cumulative level outside the invertible range (0, c)."""


class InsufficientOverlapError(EconothermError):
    """Fewer than three overlapping years between the differenced series and the proxy."""
