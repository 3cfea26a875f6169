"""Region ensembles of low-rank predictors and their multi-resolution
combination.

An ensemble fits one low-rank model per tessellation region and mixes the
regional predictions with localization weights. The multi-resolution variant
stacks several ensembles over coarse-to-fine tessellations and weighs the
resolutions with a simplex vector learned by minimizing squared error on a
held-out calibration set: contaminated data pushes weight toward the coarse,
smoother resolutions, clean data toward the fine ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .kernels import KernelParams, as_locations
from .lowrank import PPModel, pp_fit, pp_mean_var
from .mixture import PredictiveMixture
from .partition import Partition, build_spvt, weight_matrix
from .support_points import SPSolverConfig


@dataclass(frozen=True)
class EPPModel:
    partition: Partition
    region_models: tuple
    params: KernelParams

    @property
    def K(self) -> int:
        return self.partition.K


@dataclass
class MREPPModel:
    levels: tuple
    p: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.p is None:
            self.p = np.full(len(self.levels), 1.0 / len(self.levels))

    @property
    def L(self) -> int:
        return len(self.levels)


def epp_fit(locations, values, K: int, m: int, delta: float | None,
            params: KernelParams, cfg: SPSolverConfig = SPSolverConfig()) -> EPPModel:
    """Tessellate the domain and fit one low-rank model per region."""
    locations = as_locations(locations)
    values = np.asarray(values, dtype=float).ravel()
    part = build_spvt(locations, K, m, delta, cfg)
    models = tuple(
        pp_fit(locations[r.member_indices], values[r.member_indices],
               r.inducing, params)
        for r in part.regions
    )
    return EPPModel(part, models, params)


def _components(model: EPPModel, targets) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-region (weights, means, variances), each (N, K).

    Regional predictions are evaluated only where the localization weight is
    positive; elsewhere the component is a zero-weight placeholder.
    """
    targets = as_locations(targets)
    W = weight_matrix(model.partition, targets)
    N, K = W.shape
    means = np.zeros((N, K))
    variances = np.zeros((N, K))
    for k, pp in enumerate(model.region_models):
        sel = W[:, k] > 0.0
        if np.any(sel):
            mu, var = pp_mean_var(pp, targets[sel])
            means[sel, k] = mu
            variances[sel, k] = var
    return W, means, variances


def epp_predict(model: EPPModel, targets) -> PredictiveMixture:
    """Localization-weighted mixture of the regional predictions."""
    return PredictiveMixture(*_components(model, targets))


def mrepp_fit(locations, values, level_configs, params: KernelParams,
              cfg: SPSolverConfig = SPSolverConfig()) -> MREPPModel:
    """Fit one ensemble per (K_l, m_l, delta_l) level; uniform weights.

    Region counts must be strictly increasing and inducing counts
    non-increasing from coarse to fine.
    """
    configs = [(int(K), int(m), delta) for K, m, delta in level_configs]
    if len(configs) < 1:
        raise ValueError("need at least one resolution level")
    Ks = [c[0] for c in configs]
    ms = [c[1] for c in configs]
    if any(k2 <= k1 for k1, k2 in zip(Ks, Ks[1:])):
        raise ValueError(f"region counts must be strictly increasing, got {Ks}")
    if any(m2 > m1 for m1, m2 in zip(ms, ms[1:])):
        raise ValueError(f"inducing counts must be non-increasing, got {ms}")
    levels = []
    for level, (K, m, delta) in enumerate(configs):
        level_cfg = SPSolverConfig(cfg.max_iters, cfg.tol,
                                   rng.derive_seed(cfg.seed, rng.SOLVER, 100 + level))
        levels.append(epp_fit(locations, values, K, m, delta, params, level_cfg))
    return MREPPModel(tuple(levels))


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - 1.0
    j = np.arange(1, v.size + 1)
    rho = np.nonzero(u - cssv / j > 0)[0][-1]
    theta = cssv[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def simplex_least_squares(A: np.ndarray, y: np.ndarray, max_iters: int = 10_000,
                          tol: float = 1e-10) -> np.ndarray:
    """Minimize mean((A p - y)^2) over the probability simplex.

    Projected gradient descent from the uniform vector with a 1/Lipschitz
    step; symmetric inputs keep symmetric iterates, so exact ties resolve to
    uniform weights.
    """
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    n, L = A.shape
    p = np.full(L, 1.0 / L)
    lipschitz = 2.0 / n * float(np.linalg.eigvalsh(A.T @ A)[-1])
    if lipschitz <= 0.0:
        return p
    step = 1.0 / lipschitz
    obj = float(np.mean((A @ p - y) ** 2))
    for _ in range(max_iters):
        grad = 2.0 / n * (A.T @ (A @ p - y))
        p = _project_simplex(p - step * grad)
        new_obj = float(np.mean((A @ p - y) ** 2))
        if abs(obj - new_obj) < tol:
            break
        obj = new_obj
    return p


def learn_resolution_weights(model: MREPPModel, calib_locations, calib_values) -> np.ndarray:
    """Resolution weights minimizing calibration MSE of the combined mean.

    The combined mean is linear in the weights (each level's localization
    weights are normalized within the level), so this is a convex quadratic
    over the simplex. The calibration set must be disjoint from the data the
    levels were fitted on.
    """
    calib_locations = as_locations(calib_locations)
    calib_values = np.asarray(calib_values, dtype=float).ravel()
    if calib_values.size < model.L:
        raise ValueError("need at least as many calibration points as levels")
    level_means = np.column_stack(
        [epp_predict(level, calib_locations).mean for level in model.levels])
    return simplex_least_squares(level_means, calib_values)


def mrepp_predict(model: MREPPModel, targets) -> PredictiveMixture:
    """Mixture across all (level, region) components.

    Component weights are p(l) times the level's localization weights,
    normalized globally (a no-op when p sums to one).
    """
    targets = as_locations(targets)
    p = np.asarray(model.p, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("resolution weights must lie on the probability simplex")
    blocks_w, blocks_mu, blocks_var = [], [], []
    for weight, level in zip(p, model.levels):
        if weight > 0.0:
            W, mu, var = _components(level, targets)
            blocks_w.append(weight * W)
        else:
            K = level.K
            W = np.zeros((targets.shape[0], K))
            mu = np.zeros_like(W)
            var = np.zeros_like(W)
            blocks_w.append(W)
        blocks_mu.append(mu)
        blocks_var.append(var)
    weights = np.hstack(blocks_w)
    weights = weights / weights.sum(axis=1, keepdims=True)
    return PredictiveMixture(weights, np.hstack(blocks_mu), np.hstack(blocks_var))


def calibration_split(n: int, fraction: float, seed: int,
                      exclude=None) -> tuple[np.ndarray, np.ndarray]:
    """Disjoint (fit, calibration) index split of ``n`` observations.

    The calibration subset has round(fraction * n) uniformly drawn indices,
    re-derived from the seed's calibration substream. Indices in ``exclude``
    (e.g. known-contaminated observations) never enter the calibration side;
    they stay in the fit portion, so the weight loss is measured on clean
    data.
    """
    if not (0.0 < fraction < 1.0):
        raise ValueError("calibration fraction must be in (0, 1)")
    n_calib = int(round(fraction * n))
    if n_calib < 1 or n_calib >= n:
        raise ValueError(f"calibration fraction {fraction} leaves no usable split")
    candidates = np.arange(n)
    if exclude is not None and len(exclude) > 0:
        candidates = np.setdiff1d(candidates, np.asarray(exclude, dtype=int))
    if candidates.size < n_calib:
        raise ValueError("not enough unexcluded observations for the calibration set")
    gen = rng.substream(seed, rng.CALIBRATION)
    calib = np.sort(gen.choice(candidates, size=n_calib, replace=False))
    fit = np.setdiff1d(np.arange(n), calib)
    return fit, calib
