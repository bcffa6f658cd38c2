"""Candidate distribution families on log-log cumulative coordinates.

All three curves map x = ln(income) to y = ln(cumulative percent of the
population at or above that income):

    Fermi-Dirac      y = c / (exp((x - mu)/T) + 1)
    Bose-Einstein    y = c / (exp((x - mu)/T) - 1)
    Boltzmann-Gibbs  y = c * exp(-(x - mu)/T)

T is the temperature (curve width), mu the chemical potential (midpoint
for Fermi-Dirac), c the degeneracy amplitude (left asymptote of the
Fermi-Dirac curve, ~ ln 100 when the curve tops out at the whole
population). For Boltzmann-Gibbs, (c, mu) only enter through the product
c*exp(mu/T); see :func:`bg_amplitude`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import expit

from .errors import PoleError

__all__ = [
    "ModelFamily",
    "ModelParams",
    "POLE_GUARD",
    "evaluate",
    "gradient",
    "bg_amplitude",
]

#: Half-width in x of the band around mu where Bose-Einstein evaluation is refused.
POLE_GUARD = 1e-9


class ModelFamily(Enum):
    FERMI_DIRAC = "fd"
    BOSE_EINSTEIN = "be"
    BOLTZMANN_GIBBS = "bg"

    @classmethod
    def coerce(cls, value: "ModelFamily | str") -> "ModelFamily":
        """Accept a ModelFamily or one of the short tags 'fd' / 'be' / 'bg'."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown model family: {value!r}") from None


@dataclass(frozen=True)
class ModelParams:
    """Parameter triple (T, mu, c); T and c must be positive, mu finite."""

    T: float
    mu: float
    c: float

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0):
            raise ValueError(f"T must be positive and finite, got {self.T}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be positive and finite, got {self.c}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.T, self.mu, self.c)


def bg_amplitude(params: ModelParams) -> float:
    """Identifiable Boltzmann-Gibbs amplitude c*exp(mu/T).

    The BG curve depends on (c, mu) only through this product; fits pin
    mu to 0 and carry the amplitude in c. May overflow to inf when
    mu/T is extreme.
    """
    return params.c * math.exp(params.mu / params.T)


def _values(family: ModelFamily, T, mu, c, x) -> np.ndarray:
    """Curve values, vectorized over broadcastable (T, mu, c, x).

    Never raises: a Bose-Einstein pole yields inf and exponent overflow
    propagates as inf, which fitting treats as a rejected objective.
    """
    u = (np.asarray(x, dtype=float) - mu) / T
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if family is ModelFamily.FERMI_DIRAC:
            return c * expit(-u)
        if family is ModelFamily.BOSE_EINSTEIN:
            # split at u = 0 so neither branch exponentiates a large positive u
            pos = u > 0
            up = np.where(pos, u, np.inf)
            un = np.where(pos, -np.inf, u)
            e = np.exp(-up)
            return np.where(pos, c * e / (1.0 - e), c / np.expm1(un))
        return c * np.exp(-u)


def _partials(family: ModelFamily, T, mu, c, x):
    """(dy/dT, dy/dmu, dy/dc), closed form, broadcast like `_values`."""
    xv = np.asarray(x, dtype=float)
    u = (xv - mu) / T
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if family is ModelFamily.FERMI_DIRAC:
            s = expit(-u)  # = y/c
            w = s * (1.0 - s)
            return c * w * u / T, c * w / T, s + np.zeros_like(u)
        if family is ModelFamily.BOSE_EINSTEIN:
            # g = exp(u)/(exp(u)-1)^2 and d = 1/(exp(u)-1), overflow-safe on both sides
            pos = u > 0
            up = np.where(pos, u, np.inf)
            un = np.where(pos, -np.inf, u)
            e = np.exp(-up)
            em = np.expm1(un)
            g = np.where(pos, e / (1.0 - e) ** 2, np.exp(un) / em**2)
            d = np.where(pos, e / (1.0 - e), 1.0 / em)
            return c * g * u / T, c * g / T, d
        y = c * np.exp(-u)
        return y * u / T, y / T, np.exp(-u)


def _check_pole(family: ModelFamily, mu: float, x, pole_guard: float):
    if family is not ModelFamily.BOSE_EINSTEIN:
        return
    dist = np.abs(np.asarray(x, dtype=float) - mu)
    if np.any(dist < pole_guard):
        raise PoleError(
            f"Bose-Einstein evaluated within {pole_guard:g} of its pole at x = mu = {mu:g}"
        )


def evaluate(
    family: ModelFamily | str,
    params: ModelParams,
    x,
    *,
    pole_guard: float = POLE_GUARD,
):
    """Evaluate the family's curve at ln-income x; scalar in, scalar out.

    Raises PoleError when a Bose-Einstein point falls inside the guard
    band |x - mu| < pole_guard.
    """
    family = ModelFamily.coerce(family)
    _check_pole(family, params.mu, x, pole_guard)
    y = _values(family, params.T, params.mu, params.c, x)
    return float(y) if np.ndim(x) == 0 else y


def gradient(
    family: ModelFamily | str,
    params: ModelParams,
    x,
    *,
    pole_guard: float = POLE_GUARD,
):
    """Partial derivatives (dy/dT, dy/dmu, dy/dc) of :func:`evaluate`."""
    family = ModelFamily.coerce(family)
    _check_pole(family, params.mu, x, pole_guard)
    dT, dmu, dc = _partials(family, params.T, params.mu, params.c, x)
    if np.ndim(x) == 0:
        return float(dT), float(dmu), float(dc)
    return dT, dmu, dc
