"""Low-rank GP prediction through a set of inducing points, plus the
influence of training values on its predictive mean.

The model projects the latent field onto m inducing points. All solves go
through one cached m x m Cholesky factor of A = tau2*Cmm + Cmn*Cnm, so a fit
costs O(n m^2) and prediction O(m^2) per target. With m = n and inducing
points equal to the training locations, mean and variance coincide with the
exact GP.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from .errors import SingularMatrixError
from .kernels import KernelParams, as_locations, cov_matrix, jittered_cholesky, matern_cov
from .mixture import PredictiveMixture

#: Smallest usable eigenvalue of n^-1 Cnm' Cnm in the influence bound.
EMIN_FLOOR = 1e-12


@dataclass(frozen=True)
class PPModel:
    inducing: np.ndarray
    params: KernelParams
    train_locations: np.ndarray
    Cnm: np.ndarray          # (n, m) cross-covariance
    A_chol: tuple            # Cholesky of tau2*Cmm + Cmn*Cnm
    b: np.ndarray            # Cmn @ y
    Cmm_chol: tuple          # Cholesky of Cmm (jittered)
    alpha: np.ndarray        # cached A^-1 b

    @property
    def m(self) -> int:
        return self.inducing.shape[0]

    @property
    def n(self) -> int:
        return self.train_locations.shape[0]


def pp_fit(locations, values, inducing, params: KernelParams) -> PPModel:
    """Precompute the low-rank factorizations for one training set."""
    locations = as_locations(locations)
    inducing = as_locations(inducing)
    values = np.asarray(values, dtype=float).ravel()
    if inducing.shape[0] < 1:
        raise ValueError("need at least one inducing point")
    if locations.shape[0] < inducing.shape[0]:
        raise ValueError("more inducing points than observations")
    if locations.shape[0] != values.size:
        raise ValueError("locations and values must have equal length")
    if not np.all(np.isfinite(values)):
        raise ValueError("observation values must be finite")

    Cmm = cov_matrix(inducing, inducing, params)
    Cnm = cov_matrix(locations, inducing, params)
    A = params.tau2 * Cmm + Cnm.T @ Cnm
    scale = float(np.trace(A)) / A.shape[0]
    if params.tau2 > 0.0:
        A_chol = jittered_cholesky(A, scale, what="projected system")
    else:
        try:
            A_chol = cho_factor(A, lower=True)
        except np.linalg.LinAlgError:
            raise SingularMatrixError(
                "projected system is singular (degenerate inducing set with "
                "zero nugget)") from None
    Cmm_chol = jittered_cholesky(Cmm, params.eta2, always_jitter=True,
                                 what="inducing covariance")
    b = Cnm.T @ values
    return PPModel(inducing, params, locations, Cnm, A_chol, b, Cmm_chol,
                   cho_solve(A_chol, b))


def pp_with_values(model: PPModel, values) -> PPModel:
    """Same design and factorizations, different observation vector."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size != model.n:
        raise ValueError("replacement values must match the training size")
    b = model.Cnm.T @ values
    return PPModel(model.inducing, model.params, model.train_locations,
                   model.Cnm, model.A_chol, b, model.Cmm_chol,
                   cho_solve(model.A_chol, b))


def pp_mean_var(model: PPModel, targets) -> tuple[np.ndarray, np.ndarray]:
    """Predictive mean and observation variance arrays at the targets.

    mean = c_*m A^-1 b. The variance is the low-rank conditional with the
    correction that keeps it from collapsing far from the inducing set:
    c(s,s) - c_*m Cmm^-1 c_*m' + tau2 * c_*m A^-1 c_*m' + tau2.
    """
    targets = as_locations(targets)
    Ctm = cov_matrix(targets, model.inducing, model.params)  # (N, m)
    mean = Ctm @ model.alpha
    half = solve_triangular(model.Cmm_chol[0], Ctm.T, lower=True)
    explained = np.sum(half * half, axis=0)
    half_a = solve_triangular(model.A_chol[0], Ctm.T, lower=True)
    corr = np.sum(half_a * half_a, axis=0)
    latent = model.params.eta2 - explained + model.params.tau2 * corr
    variance = np.maximum(latent, 0.0) + model.params.tau2
    return mean, variance


def pp_predict(model: PPModel, targets) -> PredictiveMixture:
    mean, variance = pp_mean_var(model, targets)
    return PredictiveMixture.single(mean, variance)


def pp_influence(model: PPModel, target) -> tuple[np.ndarray, float, bool]:
    """Influence of each training value on the low-rank mean at ``target``.

    Returns (I, bound, bound_ok) with I = Cnm A^-1 c_*m'. The bound is
    m*sqrt(m)*eta2 / (n * e_min) * c(s~, target), where e_min is the smallest
    eigenvalue of n^-1 Cnm' Cnm and s~ the nearest inducing point; it is +inf
    (with bound_ok still evaluated) when e_min falls below the usable floor.
    Requires a positive nugget.
    """
    if model.params.tau2 <= 0.0:
        raise ValueError("influence bound requires a positive nugget")
    target = as_locations(target)
    if target.shape[0] != 1:
        raise ValueError("pp_influence takes a single target location")
    ctm = cov_matrix(target, model.inducing, model.params).ravel()
    influence = model.Cnm @ cho_solve(model.A_chol, ctm)

    gram = model.Cnm.T @ model.Cnm / model.n
    e_min = float(np.linalg.eigvalsh(gram)[0])
    d_nearest = np.min(np.linalg.norm(model.inducing - target, axis=1))
    c_near = matern_cov(d_nearest, model.params)
    if e_min <= EMIN_FLOOR:
        warnings.warn("inducing design is degenerate (e_min ~ 0); influence "
                      "bound reported as +inf", RuntimeWarning, stacklevel=2)
        bound = float("inf")
    else:
        m = model.m
        bound = m * np.sqrt(m) * model.params.eta2 / (model.n * e_min) * c_near
    bound_ok = bool(np.max(np.abs(influence)) <= bound * (1 + 1e-12))
    return influence, float(bound), bound_ok
