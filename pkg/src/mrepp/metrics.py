"""Point and probabilistic scores: RMSE, log predictive score, 90% central
interval coverage and width, and the interval score of Gneiting & Raftery.

The log predictive score is the negative mean log density (smaller is
better). Intervals come from the moment-matched Gaussian of each location's
mixture; for single-component predictions that is the exact 90% HPD interval.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ScoringError
from .mixture import PredictiveMixture

#: 0.95 standard-normal quantile, fixed for bit-stable outputs.
Z90 = 1.6448536

LOG_2PI = float(np.log(2.0 * np.pi))

CSV_COLUMNS = ("method", "scenario", "n", "contamination", "seed", "rmse",
               "lps", "coverage90", "mean_width", "interval_score", "runtime_s")


@dataclass(frozen=True)
class ScoreReport:
    rmse: float
    lps: float
    coverage90: float
    mean_width: float
    interval_score: float
    n_scored: int

    def __post_init__(self):
        if self.n_scored < 1:
            raise ValueError("a score report needs at least one scored location")
        if not (0.0 <= self.coverage90 <= 1.0):
            raise ValueError("coverage must lie in [0, 1]")


def rmse(predicted, actuals) -> float:
    """Root mean squared error of the point predictions."""
    predicted = np.asarray(predicted, dtype=float).ravel()
    actuals = np.asarray(actuals, dtype=float).ravel()
    if predicted.size != actuals.size or predicted.size < 1:
        raise ValueError("predicted and actual values must have equal, nonzero length")
    return float(np.sqrt(np.mean((predicted - actuals) ** 2)))


def lps(mixture: PredictiveMixture, actuals) -> float:
    """Negative mean log mixture density of the actuals (smaller is better)."""
    actuals = np.asarray(actuals, dtype=float).ravel()
    if actuals.size != len(mixture):
        raise ValueError("actuals must match the number of predicted locations")
    w = mixture.weights
    active = w > 0.0
    if np.any(mixture.variances[active] <= 0.0):
        raise ScoringError("zero-variance mixture component with positive weight")
    with np.errstate(divide="ignore"):
        log_w = np.where(active, np.log(np.where(active, w, 1.0)), -np.inf)
        log_pdf = -0.5 * (LOG_2PI + np.log(np.where(active, mixture.variances, 1.0))
                          + (actuals[:, None] - mixture.means) ** 2
                          / np.where(active, mixture.variances, 1.0))
    terms = log_w + np.where(active, log_pdf, -np.inf)
    peak = terms.max(axis=1, keepdims=True)
    log_density = peak.ravel() + np.log(np.sum(np.exp(terms - peak), axis=1))
    return float(-np.mean(log_density))


def _interval(mixture: PredictiveMixture) -> tuple[np.ndarray, np.ndarray]:
    if np.any(mixture.variance <= 0.0):
        raise ScoringError("interval scoring needs positive aggregated variances")
    half = Z90 * np.sqrt(mixture.variance)
    return mixture.mean - half, mixture.mean + half


def hpd90(mixture: PredictiveMixture, actuals) -> tuple[float, float]:
    """(coverage, mean width) of the closed 90% central intervals."""
    actuals = np.asarray(actuals, dtype=float).ravel()
    lower, upper = _interval(mixture)
    covered = (actuals >= lower) & (actuals <= upper)
    return float(np.mean(covered)), float(np.mean(upper - lower))


def interval_score(mixture: PredictiveMixture, actuals, alpha: float = 0.1) -> float:
    """Mean interval score: width plus 2/alpha times any exceedance."""
    actuals = np.asarray(actuals, dtype=float).ravel()
    lower, upper = _interval(mixture)
    score = (upper - lower) \
        + 2.0 / alpha * np.maximum(lower - actuals, 0.0) \
        + 2.0 / alpha * np.maximum(actuals - upper, 0.0)
    return float(np.mean(score))


def score(mixture: PredictiveMixture, actuals) -> ScoreReport:
    """All scores of a prediction against held-out observations."""
    actuals = np.asarray(actuals, dtype=float).ravel()
    coverage, width = hpd90(mixture, actuals)
    return ScoreReport(
        rmse=rmse(mixture.mean, actuals),
        lps=lps(mixture, actuals),
        coverage90=coverage,
        mean_width=width,
        interval_score=interval_score(mixture, actuals),
        n_scored=actuals.size,
    )


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value + 0.0:.12g}" if value == 0 else f"{value:.12g}"
    return str(value)


def csv_header() -> str:
    return ",".join(CSV_COLUMNS)


def csv_row(report: ScoreReport, method: str, scenario: str, n: int,
            contamination: float, seed: int, runtime_s: float) -> str:
    """One result row in the documented column order."""
    values = (method, scenario, n, contamination, seed, report.rmse,
              report.lps, report.coverage90, report.mean_width,
              report.interval_score, runtime_s)
    return ",".join(_fmt(v) for v in values)
