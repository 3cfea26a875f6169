"""Matérn covariance evaluation and covariance-matrix assembly.

Half-integer smoothness only (0.5, 1.5, 2.5), with the argument convention
a = d / phi. Under this convention the correlation at distance 1 is about
0.05 for (phi, nu) = (0.33, 0.5) and (0.21, 1.5), i.e. both parameterizations
have effective range 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor
from scipy.spatial.distance import cdist

from .errors import ConfigError, SingularMatrixError

SUPPORTED_NU = (0.5, 1.5, 2.5)

#: Relative diagonal jitter applied when a Cholesky of a nugget-free
#: covariance is required (guards against round-off indefiniteness).
JITTER_REL = 1e-10


@dataclass(frozen=True)
class KernelParams:
    """Matérn hyperparameters: marginal variance, range, smoothness, nugget."""

    eta2: float
    phi: float
    nu: float
    tau2: float = 0.0

    def __post_init__(self):
        if not (self.eta2 > 0):
            raise ConfigError(f"eta2 must be positive, got {self.eta2}")
        if not (self.phi > 0):
            raise ConfigError(f"phi must be positive, got {self.phi}")
        if not (self.tau2 >= 0):
            raise ConfigError(f"tau2 must be nonnegative, got {self.tau2}")
        if self.nu not in SUPPORTED_NU:
            raise ConfigError(f"nu must be one of {SUPPORTED_NU}, got {self.nu}")


def as_locations(points) -> np.ndarray:
    """Validate and return planar locations as a float (n, 2) array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"locations must have shape (n, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("locations must be finite")
    return arr


def matern_cov(d, params: KernelParams):
    """Matérn covariance at distance(s) ``d``.

    Returns eta2 * g(d / phi) with the half-integer closed forms
    g(a) = exp(-a), (1 + a) exp(-a), (1 + a + a^2/3) exp(-a) for
    nu = 0.5, 1.5, 2.5.
    """
    a = np.asarray(d, dtype=float) / params.phi
    if np.any(a < 0):
        raise ValueError("distances must be nonnegative")
    if params.nu == 0.5:
        g = np.exp(-a)
    elif params.nu == 1.5:
        g = (1.0 + a) * np.exp(-a)
    else:  # 2.5, validated at construction
        g = (1.0 + a + a * a / 3.0) * np.exp(-a)
    out = params.eta2 * g
    return out if out.ndim else float(out)


def cov_matrix(A, B, params: KernelParams) -> np.ndarray:
    """Covariance matrix between two location sets, shape (|A|, |B|).

    Does not include the nugget; callers add tau2 * I where needed. When the
    two sets are identical the result is symmetric by construction (cdist
    evaluates each pair with the same arithmetic).
    """
    A = as_locations(A)
    B = as_locations(B)
    return matern_cov(cdist(A, B), params)


def jittered_cholesky(mat: np.ndarray, scale: float, always_jitter: bool = False,
                      what: str = "covariance"):
    """Lower Cholesky factor of a PSD matrix, escalating diagonal jitter.

    ``scale`` sets the jitter unit (eta2 for covariance matrices). Nugget-free
    matrices should pass ``always_jitter=True`` so the base jitter
    JITTER_REL * scale is applied up front; the ladder escalates two decades
    before giving up. Returns the (factor, lower) pair used by cho_solve.
    """
    n = mat.shape[0]
    ladder = (JITTER_REL * scale, 1e-8 * scale, 1e-6 * scale)
    if not always_jitter:
        ladder = (0.0,) + ladder
    for jitter in ladder:
        try:
            return cho_factor(mat + jitter * np.eye(n), lower=True)
        except np.linalg.LinAlgError:
            continue
    raise SingularMatrixError(f"{what} matrix is not positive definite")
