"""Exact full-GP prediction, joint sampling, and the training-value
influence function with its analytic sup-norm bound.

Predictive variances are reported for a new observation (latent variance plus
nugget), since probabilistic scores are computed against held-out noisy
values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from . import rng
from .errors import SingularMatrixError
from .kernels import KernelParams, as_locations, cov_matrix, jittered_cholesky, matern_cov
from .mixture import PredictiveMixture

#: Documented desk-scale cap for one dense joint factorization.
MAX_JOINT_SIZE = 12_000


@dataclass(frozen=True)
class GPFit:
    """Training data plus the cached Cholesky factor of C_nn + tau2*I."""

    train_locations: np.ndarray
    train_values: np.ndarray
    params: KernelParams
    chol: tuple  # (factor, lower) pair for scipy.linalg.cho_solve
    alpha: np.ndarray  # cached (C + tau2 I)^-1 y

    @property
    def n(self) -> int:
        return self.train_locations.shape[0]


def _check_distinct(locations: np.ndarray) -> bool:
    return np.unique(locations, axis=0).shape[0] == locations.shape[0]


def gp_fit(locations, values, params: KernelParams) -> GPFit:
    """Factorize the training covariance and cache it for prediction."""
    locations = as_locations(locations)
    values = np.asarray(values, dtype=float).ravel()
    if locations.shape[0] != values.size or values.size < 1:
        raise ValueError("need equally many locations and values, at least one")
    if not np.all(np.isfinite(values)):
        raise ValueError("observation values must be finite")
    if not _check_distinct(locations):
        if params.tau2 == 0.0:
            raise SingularMatrixError(
                "duplicated locations with zero nugget make the covariance singular")
    C = cov_matrix(locations, locations, params)
    C[np.diag_indices_from(C)] += params.tau2
    chol = jittered_cholesky(C, params.eta2, always_jitter=(params.tau2 == 0.0),
                             what="training covariance")
    return GPFit(locations, values, params, chol, cho_solve(chol, values))


def gp_with_values(fit: GPFit, values) -> GPFit:
    """Same design and factorization, different observation vector.

    Used by finite-difference checks that perturb y without refactorizing.
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size != fit.n:
        raise ValueError("replacement values must match the training size")
    return GPFit(fit.train_locations, values, fit.params, fit.chol,
                 cho_solve(fit.chol, values))


def gp_predict(fit: GPFit, targets) -> PredictiveMixture:
    """Conditional-Gaussian prediction at the target locations.

    mean = c_*' (C + tau2 I)^-1 y and variance = c(s,s) - c_*' (C + tau2 I)^-1 c_*
    plus tau2, clamped so the latent part is never negative.
    """
    targets = as_locations(targets)
    cross = cov_matrix(fit.train_locations, targets, fit.params)  # (n, N)
    mean = cross.T @ fit.alpha
    # dtrtrs reads only the referenced triangle of the cho_factor output
    half = solve_triangular(fit.chol[0], cross, lower=True)
    latent = fit.params.eta2 - np.sum(half * half, axis=0)
    variance = np.maximum(latent, 0.0) + fit.params.tau2
    return PredictiveMixture.single(mean, variance)


def gp_sample(locations, params: KernelParams, seed: int) -> np.ndarray:
    """One draw of y = w + eps at the given locations.

    w ~ N(0, C_nn) via a jittered Cholesky of the nugget-free covariance;
    eps ~ N(0, tau2) independently. Deterministic given the seed.
    """
    locations = as_locations(locations)
    if not _check_distinct(locations):
        raise ValueError("locations must be pairwise distinct for sampling")
    if locations.shape[0] > MAX_JOINT_SIZE:
        raise ValueError(f"joint sampling capped at {MAX_JOINT_SIZE} locations")
    C = cov_matrix(locations, locations, params)
    factor, _ = jittered_cholesky(C, params.eta2, always_jitter=True,
                                  what="sampling covariance")
    L = np.tril(factor)
    gen_field = rng.substream(seed, rng.FIELD)
    w = L @ gen_field.standard_normal(locations.shape[0])
    gen_noise = rng.substream(seed, rng.NOISE)
    eps = np.sqrt(params.tau2) * gen_noise.standard_normal(locations.shape[0])
    return w + eps


def gp_influence(fit: GPFit, target) -> tuple[np.ndarray, float]:
    """Influence of each training value on the predictive mean at ``target``.

    Returns (I, bound) with I = (C + tau2 I)^-1 c_* and the sup-norm bound
    sqrt(n)/tau2 * c(s_nearest, target), s_nearest the closest training
    location. Requires a positive nugget.
    """
    if fit.params.tau2 <= 0.0:
        raise ValueError("influence bound requires a positive nugget")
    target = as_locations(target)
    if target.shape[0] != 1:
        raise ValueError("gp_influence takes a single target location")
    cross = cov_matrix(fit.train_locations, target, fit.params).ravel()
    influence = cho_solve(fit.chol, cross)
    d_nearest = np.min(np.linalg.norm(fit.train_locations - target, axis=1))
    bound = np.sqrt(fit.n) / fit.params.tau2 * matern_cov(d_nearest, fit.params)
    return influence, float(bound)
