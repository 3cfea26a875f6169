"""Support-point Voronoi tessellation with overlap, membership queries,
bisector boundary distances, and localization weights.

A partition is built from K sites (support points of the training locations).
Region k is the set of points whose signed distance to every (k, j) bisector
is at least -delta, so cells are convex and nest as delta grows. Localization
weights use a Gaussian kernel whose scale is the squared distance to the
nearest expanded bisector face, which drives a region's weight to zero at its
own boundary and keeps ensemble predictions continuous across seams.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import rng
from .errors import ConfigError
from .kernels import as_locations
from .support_points import SPSolverConfig, batched_support_points, support_points

logger = logging.getLogger(__name__)

#: Member counts further than this factor from n/K trigger a balance warning.
BALANCE_FACTOR = 4.0


@dataclass(frozen=True)
class Region:
    index: int
    site: np.ndarray
    delta: float
    inducing: np.ndarray
    member_indices: np.ndarray


@dataclass(frozen=True)
class Partition:
    regions: tuple
    sites: np.ndarray
    delta: float

    @property
    def K(self) -> int:
        return len(self.regions)


def default_overlap(sites) -> float:
    """Default overlap radius: 0.1 times the median distance between
    adjacent sites (each site's nearest neighbor), which keeps the overlap
    small relative to the cells."""
    sites = as_locations(sites)
    K = sites.shape[0]
    if K < 2:
        return 0.0
    dists = cdist(sites, sites)
    np.fill_diagonal(dists, np.inf)
    return 0.1 * float(np.median(dists.min(axis=1)))


def _bisector_mindist(points: np.ndarray, sites: np.ndarray) -> np.ndarray:
    """Signed distance from each point to the nearest bisector of each region.

    Entry (i, k) is min over j != k of (||p_i - u_j||^2 - ||p_i - u_k||^2)
    / (2 ||u_k - u_j||): positive inside the Voronoi cell of u_k, zero on its
    boundary. Shape (N, K); +inf when K == 1.
    """
    K = sites.shape[0]
    N = points.shape[0]
    if K == 1:
        return np.full((N, 1), np.inf)
    D2 = cdist(points, sites, metric="sqeuclidean")  # (N, K)
    site_dist = cdist(sites, sites)  # (K, K)
    out = np.empty((N, K))
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(K):
            signed = (D2 - D2[:, k:k + 1]) / (2.0 * site_dist[k])  # col k is 0/0
            signed[:, k] = np.inf
            out[:, k] = signed.min(axis=1)
    return out


def _membership_matrix(points: np.ndarray, sites: np.ndarray, delta: float):
    """Boolean (N, K) membership plus the nearest-site index per point."""
    D2 = cdist(points, sites, metric="sqeuclidean")
    nearest = np.argmin(D2, axis=1)  # ties resolve to the lowest index
    mindist = _bisector_mindist(points, sites)
    member = mindist >= -delta
    member[np.arange(points.shape[0]), nearest] = True
    return member, nearest, mindist


def build_spvt(locations, K: int, m: int, delta: float | None,
               cfg: SPSolverConfig = SPSolverConfig(), sites=None) -> Partition:
    """Build the K-region tessellation over the training locations.

    Sites are support points of the full sample (or the ``sites`` override,
    intended for tests). Each region keeps the indices of its member
    observations and min(m, |members| // 2, floored at 1) local support
    points selected from them. ``delta=None`` applies the default overlap.
    """
    locations = as_locations(locations)
    if K < 1:
        raise ValueError("K must be at least 1")
    if m < 1:
        raise ValueError("m must be at least 1")
    if sites is None:
        sites = support_points(locations, K, cfg)
    else:
        sites = as_locations(sites)
        if sites.shape[0] != K:
            raise ValueError("site override must provide exactly K sites")
    if delta is None:
        delta = default_overlap(sites)
    if delta < 0:
        raise ValueError("delta must be nonnegative")

    member, _, _ = _membership_matrix(locations, sites, delta)
    n = locations.shape[0]
    members, m_locals = [], []
    for k in range(K):
        idx = np.flatnonzero(member[:, k])
        if idx.size == 0:
            raise ConfigError(
                f"region {k} has no member observations; use a smaller K")
        members.append(idx)
        m_locals.append(min(m, max(1, idx.size // 2)))
    inducing_sets = batched_support_points(
        [locations[idx] for idx in members], m_locals,
        [rng.derive_seed(cfg.seed, rng.SOLVER, k) for k in range(K)],
        cfg.max_iters, cfg.tol)
    regions = [Region(k, sites[k], float(delta), inducing_sets[k], members[k])
               for k in range(K)]

    counts = np.array([r.member_indices.size for r in regions])
    target = n / K
    if counts.min() < target / BALANCE_FACTOR or counts.max() > target * BALANCE_FACTOR:
        logger.warning("unbalanced partition: member counts %s vs n/K = %.1f",
                       counts.tolist(), target)
    return Partition(tuple(regions), sites, float(delta))


def region_membership(p: Partition, s) -> set[int]:
    """Indices of the regions containing the location ``s``."""
    s = as_locations(s)
    member, _, _ = _membership_matrix(s, p.sites, p.delta)
    return set(int(k) for k in np.flatnonzero(member[0]))


def boundary_distance(p: Partition, k: int, s) -> float:
    """Squared distance from ``s`` to region k's expanded boundary.

    Computed against the nearest expanded bisector face; +inf when K == 1
    (a single region has no interior boundary). ``s`` must belong to region k.
    """
    s = as_locations(s)
    member, _, mindist = _membership_matrix(s, p.sites, p.delta)
    if not member[0, k]:
        raise ValueError(f"location is not a member of region {k}")
    if p.K == 1:
        return float("inf")
    return float(max(0.0, mindist[0, k] + p.delta) ** 2)


def horizontal_weights(p: Partition, s_star) -> np.ndarray:
    """Normalized localization weights over the K regions at one location."""
    s_star = as_locations(s_star)
    return weight_matrix(p, s_star)[0]


def weight_matrix(p: Partition, targets) -> np.ndarray:
    """Row-normalized localization weights, shape (N, K).

    Member regions are weighted by exp(-||s - u_k||^2 / bdist), where bdist is
    the squared distance to the region's expanded boundary (weight 1 when the
    region has no boundary). Non-members get 0. Rows whose weights all
    underflow fall back to the nearest-site indicator.
    """
    targets = as_locations(targets)
    member, nearest, mindist = _membership_matrix(targets, p.sites, p.delta)
    D2 = cdist(targets, p.sites, metric="sqeuclidean")
    bdist = np.maximum(mindist + p.delta, 0.0) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        raw = np.exp(-D2 / bdist)  # D2/inf = 0 gives weight 1 for K = 1
    raw = np.where(bdist == 0.0, 0.0, raw)
    raw = np.where(member, raw, 0.0)
    totals = raw.sum(axis=1)
    dead = totals <= 0.0
    if np.any(dead):
        logger.info("weight underflow at %d location(s); using nearest region",
                    int(dead.sum()))
        raw[dead] = 0.0
        raw[dead, nearest[dead]] = 1.0
        totals[dead] = 1.0
    return raw / totals[:, None]


def to_json(p: Partition) -> str:
    """Serialize a partition (sites, delta, per-region members and inducing
    points) to a stable JSON layout."""
    payload = {
        "delta": p.delta,
        "sites": p.sites.tolist(),
        "regions": [
            {
                "index": r.index,
                "site": r.site.tolist(),
                "inducing": r.inducing.tolist(),
                "member_indices": r.member_indices.tolist(),
            }
            for r in p.regions
        ],
    }
    return json.dumps(payload, sort_keys=True)


def from_json(text: str) -> Partition:
    payload = json.loads(text)
    sites = as_locations(payload["sites"])
    regions = tuple(
        Region(r["index"], np.asarray(r["site"], dtype=float), payload["delta"],
               as_locations(r["inducing"]),
               np.asarray(r["member_indices"], dtype=int))
        for r in payload["regions"]
    )
    return Partition(regions, sites, float(payload["delta"]))
