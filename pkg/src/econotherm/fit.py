"""Nonlinear least squares on cumulative log-log points.

Levenberg-Marquardt with analytic Jacobians, run from a geometric
initial guess plus perturbed restarts. Positivity of T and c is kept by
optimizing (ln T, mu, ln c); the Boltzmann-Gibbs family collapses to
(ln T, ln A) with amplitude A = c*exp(mu/T) and mu pinned to 0, because
(c, mu) is not separately identifiable there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DegenerateDataError, EconothermError, NonFiniteError
from .ingest import CumulativePoints
from .models import ModelFamily, ModelParams, _partials, _values, evaluate

__all__ = [
    "FitConfig",
    "FitResult",
    "Termination",
    "initial_guess",
    "lm_fit",
    "r_squared",
    "sum_of_squares",
    "grid_oracle",
    "select_model",
]

#: Guess-stage clamp on the temperature seed.
_T0_MIN, _T0_MAX = 1e-3, 10.0
#: Damping ladder limits; steps outside are futile at float64 precision.
_LAMBDA_MIN, _LAMBDA_MAX = 1e-12, 1e15
#: Cap on |ln T|, |ln c|, |ln A| so parameters stay float64-representable.
#: Model-mismatch fits (e.g. Bose-Einstein on Fermi-Dirac data) walk a flat
#: valley toward c -> 0 that would otherwise underflow; they stall here instead.
_THETA_BOUND = 690.0


class Termination(Enum):
    GRADIENT_TOL = "gradient_tol"
    STEP_TOL = "step_tol"
    MAX_ITER = "max_iter"


@dataclass(frozen=True)
class FitConfig:
    max_iterations: int = 200
    gradient_tolerance: float = 1e-10
    step_tolerance: float = 1e-12
    lambda_init: float = 1e-3
    lambda_up: float = 10.0
    lambda_down: float = 10.0
    multistart: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        for name in ("gradient_tolerance", "step_tolerance", "lambda_init"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.lambda_up <= 1 or self.lambda_down <= 1:
            raise ValueError("lambda_up and lambda_down must exceed 1")
        if self.multistart < 1:
            raise ValueError("multistart must be >= 1")


@dataclass(frozen=True)
class FitResult:
    family: ModelFamily
    params: ModelParams | None
    r_squared: float
    residuals: np.ndarray
    iterations: int
    converged: bool
    termination: Termination | None
    error: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "residuals", np.asarray(self.residuals, dtype=float))

    @property
    def ss_res(self) -> float:
        return float(np.dot(self.residuals, self.residuals))


def initial_guess(points: CumulativePoints, family: ModelFamily | str = ModelFamily.FERMI_DIRAC) -> ModelParams:
    """Geometric parameter seed shared by all three families.

    Amplitude from the highest y (the flat left end), midpoint where y
    descends through half that amplitude (or the rightmost x when it
    never does), temperature from the steepest two-point slope via the
    midpoint derivative -c/(4T), clamped to [1e-3, 10].
    """
    ModelFamily.coerce(family)
    x, y = points.x, points.y
    if len(points) < 4:
        raise DegenerateDataError(f"need at least 4 points to seed a 3-parameter fit, got {len(points)}")
    c0 = float(np.max(y))
    if c0 <= 0:
        raise DegenerateDataError("cannot seed an amplitude from non-positive y values")
    slopes = np.diff(y) / np.diff(x)
    s = float(np.max(np.abs(slopes)))
    if s == 0.0:
        raise DegenerateDataError("all y values are equal; no slope to seed from")

    half = c0 / 2.0
    mu0 = float(x[-1])
    for k in range(len(y) - 1):
        if y[k] >= half > y[k + 1]:
            frac = (y[k] - half) / (y[k] - y[k + 1])
            mu0 = float(x[k] + frac * (x[k + 1] - x[k]))
            break
    T0 = min(max(c0 / (4.0 * s), _T0_MIN), _T0_MAX)
    return ModelParams(T=T0, mu=mu0, c=c0)


# ---------------------------------------------------------------------------
# internal parameterization


def _theta_from_params(family: ModelFamily, p: ModelParams) -> np.ndarray:
    if family is ModelFamily.BOLTZMANN_GIBBS:
        return np.array([math.log(p.T), math.log(p.c) + p.mu / p.T])
    return np.array([math.log(p.T), p.mu, math.log(p.c)])


def _params_from_theta(family: ModelFamily, theta: np.ndarray) -> ModelParams:
    try:
        if family is ModelFamily.BOLTZMANN_GIBBS:
            return ModelParams(T=math.exp(theta[0]), mu=0.0, c=math.exp(theta[1]))
        return ModelParams(T=math.exp(theta[0]), mu=float(theta[1]), c=math.exp(theta[2]))
    except (OverflowError, ValueError) as exc:
        raise NonFiniteError(f"fitted parameters overflowed: {exc}") from None


def _predict(family: ModelFamily, theta: np.ndarray, x: np.ndarray) -> np.ndarray:
    # np.exp turns wild trial steps into inf (-> rejected) instead of raising
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if family is ModelFamily.BOLTZMANN_GIBBS:
            # exp(lnA - x/T) stays finite where exp(lnA) alone would overflow
            return np.exp(theta[1] - x / np.exp(theta[0]))
        T, mu, c = np.exp(theta[0]), theta[1], np.exp(theta[2])
        return _values(family, float(T), float(mu), float(c), x)


def _predict_jacobian(family: ModelFamily, theta: np.ndarray, x: np.ndarray):
    """Model values and Jacobian d yhat / d theta, shape (n, len(theta))."""
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if family is ModelFamily.BOLTZMANN_GIBBS:
            T = float(np.exp(theta[0]))
            yhat = np.exp(theta[1] - x / T)
            return yhat, np.column_stack([yhat * x / T, yhat])
        T, mu, c = float(np.exp(theta[0])), float(theta[1]), float(np.exp(theta[2]))
        yhat = _values(family, T, mu, c, x)
        dT, dmu, dc = _partials(family, T, mu, c, x)
        return yhat, np.column_stack([T * dT, dmu, c * dc])


def _sum_sq(r: np.ndarray) -> float:
    ss = float(np.dot(r, r))
    return ss if math.isfinite(ss) else math.inf


class _SingleRun(NamedTuple):
    theta: np.ndarray
    ss: float
    residuals: np.ndarray
    iterations: int
    termination: Termination


def _lm_single(
    x: np.ndarray,
    y: np.ndarray,
    theta0: np.ndarray,
    family: ModelFamily,
    config: FitConfig,
    trace: list | None = None,
) -> _SingleRun | None:
    """One damped LM descent; None when the start itself is non-finite."""
    box = np.full(len(theta0), _THETA_BOUND)
    if family is not ModelFamily.BOLTZMANN_GIBBS:
        box[1] = np.inf  # mu is linear; only the log-parameters need the cap
    theta = np.clip(np.array(theta0, dtype=float), -box, box)
    r = y - _predict(family, theta, x)
    ss = _sum_sq(r)
    if not math.isfinite(ss):
        return None
    if trace is not None:
        trace.append(ss)

    lam = config.lambda_init
    iterations = 0
    termination = Termination.MAX_ITER
    for it in range(1, config.max_iterations + 1):
        iterations = it
        yhat, J = _predict_jacobian(family, theta, x)
        r = y - yhat
        g = J.T @ r
        if not np.all(np.isfinite(g)):
            break  # Jacobian overflowed at an accepted point; nothing more to do
        if float(np.max(np.abs(g))) <= config.gradient_tolerance:
            termination = Termination.GRADIENT_TOL
            break
        H = J.T @ J
        D = np.diag(np.maximum(np.diag(H), 1e-12))
        try:
            step = np.linalg.solve(H + lam * D, g)
        except np.linalg.LinAlgError:
            lam = min(lam * config.lambda_up, _LAMBDA_MAX)
            continue
        if not np.all(np.isfinite(step)):
            lam = min(lam * config.lambda_up, _LAMBDA_MAX)
            continue
        if float(np.linalg.norm(step)) <= config.step_tolerance * (
            float(np.linalg.norm(theta)) + config.step_tolerance
        ):
            termination = Termination.STEP_TOL
            break
        trial = np.clip(theta + step, -box, box)
        ss_trial = _sum_sq(y - _predict(family, trial, x))
        if ss_trial < ss:
            theta = trial
            ss = ss_trial
            lam = max(lam / config.lambda_down, _LAMBDA_MIN)
            if trace is not None:
                trace.append(ss)
        else:
            lam = min(lam * config.lambda_up, _LAMBDA_MAX)

    r = y - _predict(family, theta, x)
    return _SingleRun(theta, _sum_sq(r), r, iterations, termination)


def _seed_for_family(
    family: ModelFamily, guess: ModelParams, x: np.ndarray, y: np.ndarray
) -> ModelParams:
    """Family-specific repair of the shared geometric guess.

    The shared recipe targets the Fermi-Dirac shape. Bose-Einstein is only
    defined to the right of its pole, so a mu inside the data range puts
    points on the negative branch and the descent collapses onto the
    degenerate zero curve; seed it one width left of the data instead.
    Boltzmann-Gibbs is log-linear in x, so a least-squares line through
    (x, ln y) seeds (T, amplitude) directly; the shared recipe can start
    the amplitude off by many orders of magnitude.
    """
    if family is ModelFamily.BOSE_EINSTEIN and guess.mu >= x[0]:
        return ModelParams(T=guess.T, mu=float(x[0]) - guess.T, c=guess.c)
    if family is ModelFamily.BOLTZMANN_GIBBS:
        mask = y > 0
        if np.count_nonzero(mask) >= 2:
            slope, intercept = np.polyfit(x[mask], np.log(y[mask]), 1)
            if math.isfinite(slope) and slope < 0 and math.isfinite(intercept):
                T0 = min(max(-1.0 / slope, 1e-6), 1e6)
                lnA0 = min(max(intercept, -_THETA_BOUND), _THETA_BOUND)
                return ModelParams(T=T0, mu=0.0, c=math.exp(lnA0))
    return guess


def _restart_thetas(family: ModelFamily, guess: ModelParams, config: FitConfig) -> list[np.ndarray]:
    thetas = [_theta_from_params(family, guess)]
    rng = np.random.default_rng(config.seed)
    width = math.log(1.2)
    for _ in range(config.multistart - 1):
        f_T, f_c = np.exp(rng.uniform(-width, width, size=2))
        # mu is perturbed additively (scale T0) so restarts commute with
        # currency rescaling, which shifts mu by a constant
        d_mu = guess.T * rng.uniform(-0.2, 0.2)
        p = ModelParams(T=guess.T * f_T, mu=guess.mu + d_mu, c=guess.c * f_c)
        thetas.append(_theta_from_params(family, p))
    return thetas


def lm_fit(
    points: CumulativePoints,
    family: ModelFamily | str = ModelFamily.FERMI_DIRAC,
    config: FitConfig | None = None,
) -> FitResult:
    """Fit one family, returning the lowest-SS result across restarts.

    Deterministic for fixed input and config.seed. Raises
    DegenerateDataError when the points cannot seed a guess and
    NonFiniteError when the objective is non-finite at every start.
    """
    family = ModelFamily.coerce(family)
    config = config or FitConfig()
    x, y = points.x, points.y
    if len(points) < 4:
        raise DegenerateDataError(f"need at least 4 points, got {len(points)}")
    guess = _seed_for_family(family, initial_guess(points, family), x, y)

    best: _SingleRun | None = None
    for run in (_lm_single(x, y, t0, family, config) for t0 in _restart_thetas(family, guess, config)):
        if run is None:
            continue
        if best is None or run.ss < best.ss:
            best = run
    if best is None:
        raise NonFiniteError("objective non-finite at the initial point of every restart")

    params = _params_from_theta(family, best.theta)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateDataError("zero total sum of squares; R^2 undefined")
    return FitResult(
        family=family,
        params=params,
        r_squared=1.0 - best.ss / ss_tot,
        residuals=best.residuals,
        iterations=best.iterations,
        converged=best.termination is not Termination.MAX_ITER,
        termination=best.termination,
    )


def r_squared(
    points: CumulativePoints,
    family: ModelFamily | str,
    params: ModelParams,
) -> float:
    """1 - SS_res/SS_tot of the given curve against the points."""
    family = ModelFamily.coerce(family)
    y = points.y
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if len(points) < 2 or ss_tot == 0.0:
        raise DegenerateDataError("R^2 needs at least two distinct y values")
    resid = y - evaluate(family, params, points.x)
    return 1.0 - float(np.dot(resid, resid)) / ss_tot


def sum_of_squares(
    points: CumulativePoints,
    family: ModelFamily | str,
    params: ModelParams,
) -> float:
    """Residual sum of squares of the given curve against the points."""
    family = ModelFamily.coerce(family)
    resid = points.y - evaluate(family, params, points.x)
    return float(np.dot(resid, resid))


def grid_oracle(
    points: CumulativePoints,
    family: ModelFamily | str,
    bounds: tuple[tuple[float, float], tuple[float, float], tuple[float, float]],
    steps: int | tuple[int, int, int] = 21,
) -> ModelParams:
    """Exhaustive SS_res minimizer over a (T, mu, c) box.

    Brute-force validation oracle for lm_fit; ties go to the smallest
    (T, mu, c) lexicographically. Degenerate bounds (lo == hi) pin an
    axis to a single value.
    """
    family = ModelFamily.coerce(family)
    if isinstance(steps, int):
        steps = (steps, steps, steps)
    (t_lo, t_hi), (m_lo, m_hi), (c_lo, c_hi) = bounds
    if t_lo <= 0 or c_lo <= 0:
        raise ValueError("T and c bounds must be positive")
    if any(n < 2 for n in steps):
        raise ValueError("need at least 2 steps per axis")
    Ts = np.linspace(t_lo, t_hi, steps[0])
    mus = np.linspace(m_lo, m_hi, steps[1])
    cs = np.linspace(c_lo, c_hi, steps[2])

    Tg, mg, cg = np.meshgrid(Ts, mus, cs, indexing="ij")
    yhat = _values(family, Tg[..., None], mg[..., None], cg[..., None], points.x[None, None, None, :])
    with np.errstate(invalid="ignore"):
        ss = np.sum((points.y - yhat) ** 2, axis=-1)
    ss = np.where(np.isnan(ss), np.inf, ss)
    # C-order argmin scans T, then mu, then c: first hit is the lexicographic min of ties
    i, j, k = np.unravel_index(int(np.argmin(ss)), ss.shape)
    return ModelParams(T=float(Ts[i]), mu=float(mus[j]), c=float(cs[k]))


_FAMILY_ORDER = (ModelFamily.FERMI_DIRAC, ModelFamily.BOSE_EINSTEIN, ModelFamily.BOLTZMANN_GIBBS)


def select_model(points: CumulativePoints, config: FitConfig | None = None) -> list[FitResult]:
    """Fit all three families and rank them by descending R^2.

    Families whose fit raised are kept at the end of the list with the
    error recorded on the result.
    """
    fitted: list[FitResult] = []
    failed: list[FitResult] = []
    for family in _FAMILY_ORDER:
        try:
            fitted.append(lm_fit(points, family, config))
        except EconothermError as exc:
            failed.append(
                FitResult(
                    family=family,
                    params=None,
                    r_squared=math.nan,
                    residuals=np.empty(0),
                    iterations=0,
                    converged=False,
                    termination=None,
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
    fitted.sort(key=lambda fr: -fr.r_squared)
    return fitted + failed
