"""Energy distance and support-point selection.

Support points are m representative locations minimizing the energy distance
to the empirical distribution of a sample. They are computed with the
standard majorization-minimization fixed point: each point is pulled toward
the sample (inverse-distance weights) and pushed away from the other support
points. The parallel update never increases the energy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import rng
from .errors import ConfigError
from .kernels import as_locations

try:  # compiled MM sweeps; the numpy path below is the fallback
    from numba import njit

    HAVE_NUMBA = True
except ModuleNotFoundError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def _decorator(fn):
            return fn

        return _decorator

#: Distances below this are treated as coincident in the MM update.
SINGULARITY_EPS = 1e-12


@dataclass(frozen=True)
class SPSolverConfig:
    max_iters: int = 100
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigError("max_iters must be at least 1")
        if not (self.tol > 0):
            raise ConfigError("tol must be positive")


def energy_distance(sample, candidates) -> float:
    """Energy distance between the empirical laws of two point sets.

    (2/m) sum_i mean_n ||x_n - c_i||  -  mean_{n,n'} ||x_n - x_n'||
      - (1/m^2) sum_{i,j} ||c_i - c_j||,
    with both double means taken over all ordered pairs (the plug-in form,
    which is exactly zero when the two multisets coincide and never goes
    below the numerical-zero floor).
    """
    sample = as_locations(sample)
    candidates = as_locations(candidates)
    if sample.shape[0] == 0 or candidates.shape[0] == 0:
        raise ValueError("both point sets must be nonempty")
    cross = float(cdist(sample, candidates).mean())
    within_sample = float(cdist(sample, sample).mean())
    within_cand = float(cdist(candidates, candidates).mean())
    return 2.0 * cross - within_sample - within_cand


def _mm_step(points: np.ndarray, sample: np.ndarray,
             D: np.ndarray | None = None, Dss: np.ndarray | None = None) -> np.ndarray:
    """One parallel MM update of all support points against the sample.

    Terms with near-zero distances are dropped; a point whose attractions are
    all singular snaps to its nearest sample point. ``D`` (points x sample)
    and ``Dss`` (points x points) can be passed to reuse distance work.
    """
    n_sample = sample.shape[0]
    m = points.shape[0]
    if D is None:
        D = cdist(points, sample)
    if Dss is None:
        Dss = cdist(points, points)
    singular = D < SINGULARITY_EPS
    W = np.where(singular, 0.0, 1.0 / np.where(singular, 1.0, D))
    denom = W.sum(axis=1)  # (m,)
    attract = W @ sample  # (m, 2)

    mask = Dss < SINGULARITY_EPS  # includes the diagonal
    Wss = np.where(mask, 0.0, 1.0 / np.where(mask, 1.0, Dss))
    # sum_{j != i} (s_i - s_j) / ||s_i - s_j|| scaled by n/m
    repulse = (n_sample / m) * (points * Wss.sum(axis=1)[:, None] - Wss @ points)

    new = np.empty_like(points)
    ok = denom > 0
    new[ok] = (repulse[ok] + attract[ok]) / denom[ok, None]
    if np.any(~ok):  # every sample point coincides with this iterate
        nearest = np.argmin(D[~ok], axis=1)
        new[~ok] = sample[nearest]
    return new


def support_points(sample, m: int, cfg: SPSolverConfig = SPSolverConfig()) -> np.ndarray:
    """Select m support points for the sample by energy-distance MM descent.

    Initialized at m distinct sample indices drawn without replacement
    (seeded); iterates until the relative energy change drops below cfg.tol
    or cfg.max_iters is reached. The returned set never has higher energy
    than the initialization.
    """
    sample = as_locations(sample)
    return batched_support_points([sample], [m], [cfg.seed],
                                  cfg.max_iters, cfg.tol)[0]


@njit(cache=True)
def _mm_kernel(X, n_k, P_init, m_k, max_iters, tol, eps):  # pragma: no cover
    """Compiled MM descent for a batch of independent solves.

    X is (K, S_max, 2) padded samples, P_init the (K, m_max, 2) padded
    initializations. Loops run over the exact per-solve sizes, so padding
    costs nothing; returns the per-solve best iterates.
    """
    K, m_max, _ = P_init.shape
    S_max = X.shape[1]
    P = P_init.copy()
    best = P_init.copy()
    newP = np.empty_like(P)
    D = np.empty((K, m_max, S_max))
    Dss = np.empty((K, m_max, m_max))
    energy = np.empty(K)
    best_energy = np.empty(K)
    running = np.ones(K, np.bool_)

    within = np.empty(K)
    for k in range(K):
        nk = n_k[k]
        total = 0.0
        for a in range(nk):
            for b in range(a + 1, nk):
                dx = X[k, a, 0] - X[k, b, 0]
                dy = X[k, a, 1] - X[k, b, 1]
                total += 2.0 * np.sqrt(dx * dx + dy * dy)
        within[k] = total / (nk * nk)

    for k in range(K):
        energy[k] = _fill_region(X, P, D, Dss, k, n_k[k], m_k[k], within[k])
        best_energy[k] = energy[k]

    for _ in range(max_iters):
        alive = False
        for k in range(K):
            if not running[k]:
                continue
            alive = True
            nk, mk = n_k[k], m_k[k]
            scale = nk / mk
            for i in range(mk):
                ax = 0.0
                ay = 0.0
                denom = 0.0
                for s in range(nk):
                    d = D[k, i, s]
                    if d >= eps:
                        w = 1.0 / d
                        denom += w
                        ax += w * X[k, s, 0]
                        ay += w * X[k, s, 1]
                rx = 0.0
                ry = 0.0
                for j in range(mk):
                    if j != i:
                        d = Dss[k, i, j]
                        if d >= eps:
                            w = 1.0 / d
                            rx += w * (P[k, i, 0] - P[k, j, 0])
                            ry += w * (P[k, i, 1] - P[k, j, 1])
                if denom > 0.0:
                    newP[k, i, 0] = (scale * rx + ax) / denom
                    newP[k, i, 1] = (scale * ry + ay) / denom
                else:  # all sample points coincide with this iterate
                    nearest = 0
                    dmin = np.inf
                    for s in range(nk):
                        if D[k, i, s] < dmin:
                            dmin = D[k, i, s]
                            nearest = s
                    newP[k, i, 0] = X[k, nearest, 0]
                    newP[k, i, 1] = X[k, nearest, 1]
            for i in range(mk):
                P[k, i, 0] = newP[k, i, 0]
                P[k, i, 1] = newP[k, i, 1]
            new_energy = _fill_region(X, P, D, Dss, k, nk, mk, within[k])
            if new_energy < best_energy[k]:
                best_energy[k] = new_energy
                for i in range(mk):
                    best[k, i, 0] = P[k, i, 0]
                    best[k, i, 1] = P[k, i, 1]
            scale_e = abs(energy[k])
            if scale_e < 1e-30:
                scale_e = 1e-30
            if abs(energy[k] - new_energy) < tol * scale_e:
                running[k] = False
            else:
                energy[k] = new_energy
        if not alive:
            break
    return best


@njit(cache=True, inline="always")
def _fill_region(X, P, D, Dss, k, nk, mk, within_k):  # pragma: no cover
    """Refresh region k's distance blocks; returns its current energy."""
    cross = 0.0
    for i in range(mk):
        for s in range(nk):
            dx = P[k, i, 0] - X[k, s, 0]
            dy = P[k, i, 1] - X[k, s, 1]
            d = np.sqrt(dx * dx + dy * dy)
            D[k, i, s] = d
            cross += d
    ss = 0.0
    for i in range(mk):
        Dss[k, i, i] = 0.0
        for j in range(i + 1, mk):
            dx = P[k, i, 0] - P[k, j, 0]
            dy = P[k, i, 1] - P[k, j, 1]
            d = np.sqrt(dx * dx + dy * dy)
            Dss[k, i, j] = d
            Dss[k, j, i] = d
            ss += 2.0 * d
    return 2.0 * cross / (mk * nk) - within_k - ss / (mk * mk)


def batched_support_points(samples: list, ms: list, seeds: list,
                           max_iters: int = 100, tol: float = 1e-6) -> list:
    """Independent support-point solves over many small samples at once.

    Runs the MM sweeps of all solves across a padded batch axis (compiled
    when numba is available, vectorized numpy otherwise); each solve uses its
    own seed, stopping rule, and best-iterate tracking, so the result matches
    running support_points per sample (up to float summation order). Used for
    the per-region solves of a tessellation.
    """
    K = len(samples)
    samples = [as_locations(s) for s in samples]
    for s, m in zip(samples, ms):
        if m < 1 or m > s.shape[0]:
            raise ValueError(f"invalid support-point count {m} for sample of {s.shape[0]}")
    n_k = np.array([s.shape[0] for s in samples], dtype=np.int64)
    m_k = np.array(ms, dtype=np.int64)
    S_max, m_max = int(n_k.max()), int(m_k.max())

    X = np.zeros((K, S_max, 2))
    valid = np.zeros((K, S_max), dtype=bool)
    P = np.zeros((K, m_max, 2))
    active = np.zeros((K, m_max), dtype=bool)
    for k, s in enumerate(samples):
        X[k, :n_k[k]] = s
        valid[k, :n_k[k]] = True
        active[k, :m_k[k]] = True
        gen = rng.substream(seeds[k], rng.SOLVER)
        idx = gen.choice(n_k[k], size=m_k[k], replace=False)
        P[k, :m_k[k]] = s[np.sort(idx)]

    if HAVE_NUMBA:
        best = _mm_kernel(X, n_k, P, m_k, max_iters, tol, SINGULARITY_EPS)
        return [best[k, :m_k[k]].copy() for k in range(K)]

    within = np.array([float(cdist(s, s).mean()) for s in samples])

    pair_active = active[:, :, None] & active[:, None, :]
    cross_mask = active[:, :, None] & valid[:, None, :]
    n_over_m = n_k / m_k

    X2 = np.sum(X * X, axis=-1)  # (K, S_max)
    Xt = X.transpose(0, 2, 1)
    # expanded-form squared distances cannot resolve below ~1e-16 * scale^2;
    # entries in that band are recomputed with exact differences so the
    # coincidence guard keeps its absolute threshold (iterates stay within a
    # few diameters of the sample, hence the 9x headroom on the scale)
    resolve_thr = 1e-12 * (1.0 + 9.0 * float(X2.max()))

    def _refine(D2, A, B):
        sus = D2 < resolve_thr
        if np.any(sus):
            ks, is_, js = np.nonzero(sus)
            diff = A[ks, is_] - B[ks, js]
            D2[ks, is_, js] = np.sum(diff * diff, axis=-1)
        return D2

    def _distances(P):
        P2 = np.sum(P * P, axis=-1)  # (K, m_max)
        D2 = P2[:, :, None] + X2[:, None, :]
        PX = P @ Xt
        D2 -= PX
        D2 -= PX
        np.maximum(D2, 0.0, out=D2)
        D = np.sqrt(_refine(D2, P, X), out=D2)
        G2 = P2[:, :, None] + P2[:, None, :]
        PP = P @ P.transpose(0, 2, 1)
        G2 -= PP
        G2 -= PP
        np.maximum(G2, 0.0, out=G2)
        Dss = np.sqrt(_refine(G2, P, P), out=G2)
        return D, Dss

    def _energies(D, Dss):
        cross = np.sum(D * cross_mask, axis=(1, 2)) / (m_k * n_k)
        within_cand = np.sum(Dss * pair_active, axis=(1, 2)) / (m_k * m_k)
        return 2.0 * cross - within - within_cand

    def _sweep(P, D, Dss):
        W = np.zeros_like(D)
        np.divide(1.0, D, out=W, where=cross_mask & (D >= SINGULARITY_EPS))
        denom = W.sum(axis=2)  # (K, m_max)
        attract = W @ X
        Wss = np.zeros_like(Dss)
        np.divide(1.0, Dss, out=Wss, where=pair_active & (Dss >= SINGULARITY_EPS))
        repulse = n_over_m[:, None, None] * (
            P * Wss.sum(axis=2)[:, :, None] - Wss @ P)
        new = P.copy()
        ok = active & (denom > 0)
        new[ok] = ((repulse + attract)[ok]) / denom[ok][:, None]
        stuck = active & (denom <= 0)
        if np.any(stuck):
            for k, i in zip(*np.nonzero(stuck)):
                d = np.where(valid[k], D[k, i], np.inf)
                new[k, i] = X[k, np.argmin(d)]
        return new

    D, Dss = _distances(P)
    energy = _energies(D, Dss)
    best, best_energy = P.copy(), energy.copy()
    running = np.ones(K, dtype=bool)
    for _ in range(max_iters):
        P = _sweep(P, D, Dss)
        D, Dss = _distances(P)
        new_energy = _energies(D, Dss)
        improved = running & (new_energy < best_energy)
        best[improved] = P[improved]
        best_energy[improved] = new_energy[improved]
        done = running & (np.abs(energy - new_energy)
                          < tol * np.maximum(np.abs(energy), 1e-30))
        running &= ~done
        if not np.any(running):
            break
        energy = np.where(running, new_energy, energy)
    return [best[k, :m_k[k]].copy() for k in range(K)]
