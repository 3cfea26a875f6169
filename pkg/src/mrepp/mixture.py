"""Per-location Gaussian mixtures returned by every predictor.

A prediction at N locations is stored as N rows of component triples
(weight, mean, variance) plus the aggregated first two moments. Exact and
low-rank predictors produce single-component rows; ensembles produce one
component per contributing region (zero-weight placeholders for the rest).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class PredictiveMixture:
    """Componentwise predictive distribution at a batch of locations.

    weights, means, variances have shape (N, C); mean and variance are the
    aggregated moments, recomputable from the components:
    mean = sum_c w*mu and variance = sum_c w*(var + mu^2) - mean^2.
    """

    weights: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    mean: np.ndarray = field(init=False)
    variance: np.ndarray = field(init=False)

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.weights, dtype=float))
        mu = np.atleast_2d(np.asarray(self.means, dtype=float))
        var = np.atleast_2d(np.asarray(self.variances, dtype=float))
        if not (w.shape == mu.shape == var.shape):
            raise ValueError("weights, means, variances must share a shape")
        sums = w.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > WEIGHT_TOL):
            raise ValueError("component weights must sum to 1 per location")
        if np.any(w < -WEIGHT_TOL):
            raise ValueError("component weights must be nonnegative")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "variances", var)
        agg_mean = np.sum(w * mu, axis=1)
        agg_var = np.sum(w * (var + mu * mu), axis=1) - agg_mean * agg_mean
        object.__setattr__(self, "mean", agg_mean)
        object.__setattr__(self, "variance", np.maximum(agg_var, 0.0))

    @classmethod
    def single(cls, mean, variance) -> "PredictiveMixture":
        """Single-component mixture from per-location mean/variance vectors."""
        mean = np.asarray(mean, dtype=float).reshape(-1, 1)
        variance = np.asarray(variance, dtype=float).reshape(-1, 1)
        return cls(np.ones_like(mean), mean, variance)

    def __len__(self) -> int:
        return self.weights.shape[0]
