"""Synthetic scenario generation: fixed-domain designs, enlarging domains
with a fixed separation radius, and training-set contamination.

Train and test values come from one joint draw of the latent field plus
nugget noise. Contamination overwrites a fixed fraction of training values
with a constant. All randomness is split into independent substreams of the
scenario seed, so the contaminated dataset and its clean twin differ only at
the contaminated indices.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, replace

import numpy as np
from scipy.spatial import cKDTree

from . import rng
from .errors import ConfigError
from .exact import gp_sample
from .kernels import KernelParams, as_locations

FIXED_SPACE = "fixed_space"
FIXED_RADIUS = "fixed_radius"
CONTAMINATED = "contaminated"
SCENARIOS = (FIXED_SPACE, FIXED_RADIUS, CONTAMINATED)

CSV_HEADER = "role,x,y,value,contaminated"


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    n: int
    n_test: int
    params: KernelParams
    contamination_value: float | None = None
    contamination_fraction: float = 0.01
    r_s_target: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}, expected one of {SCENARIOS}")
        if self.n < 10:
            raise ConfigError("n must be at least 10")
        if self.n_test < 1:
            raise ConfigError("n_test must be at least 1")
        if not (0.0 <= self.contamination_fraction < 0.5):
            raise ConfigError("contamination_fraction must lie in [0, 0.5)")
        if self.scenario == FIXED_RADIUS:
            if self.r_s_target is None or not (self.r_s_target > 0):
                raise ConfigError("fixed_radius needs a positive r_s_target")
        if self.contamination_value is not None and not np.isfinite(self.contamination_value):
            raise ConfigError("contamination_value must be finite")


@dataclass(frozen=True)
class Dataset:
    train_locations: np.ndarray
    train_values: np.ndarray
    test_locations: np.ndarray
    test_values: np.ndarray
    contaminated_indices: np.ndarray
    domain: tuple  # (xmin, xmax, ymin, ymax)
    calib_indices: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.train_locations.shape[0]


def separation_radius(locations) -> float:
    """Half the minimum pairwise distance among the locations."""
    locations = as_locations(locations)
    if locations.shape[0] < 2:
        raise ValueError("separation radius needs at least two locations")
    dist, _ = cKDTree(locations).query(locations, k=2)
    return 0.5 * float(dist[:, 1].min())


def _poisson_disk(count: int, side: float, min_dist: float,
                  gen: np.random.Generator) -> np.ndarray:
    """Uniform points on [0, side]^2 thinned to pairwise distance >= min_dist.

    Sequential rejection with a uniform grid for neighbor lookups; gives up
    past a generous attempt cap with a hint to enlarge the domain.
    """
    cell = min_dist / np.sqrt(2.0)
    grid: dict[tuple[int, int], np.ndarray] = {}
    accepted = np.empty((count, 2))
    kept = 0
    max_attempts = 2000 * count
    min_sq = min_dist * min_dist
    for _ in range(max_attempts):
        p = gen.uniform(0.0, side, size=2)
        ix, iy = int(p[0] / cell), int(p[1] / cell)
        ok = True
        for dx in range(-2, 3):
            for dy in range(-2, 3):
                q = grid.get((ix + dx, iy + dy))
                if q is not None:
                    d0 = p[0] - q[0]
                    d1 = p[1] - q[1]
                    if d0 * d0 + d1 * d1 < min_sq:
                        ok = False
                        break
            if not ok:
                break
        if ok:
            grid[(ix, iy)] = p
            accepted[kept] = p
            kept += 1
            if kept == count:
                return accepted
    raise ConfigError(
        f"could not place {count} points at spacing {min_dist:g} in a box of "
        f"side {side:g}; try a domain side of at least {side * np.sqrt(2):g}")


def generate(cfg: ScenarioConfig) -> Dataset:
    """Generate one dataset for the scenario, deterministically per seed."""
    gen_loc = rng.substream(cfg.seed, rng.LOCATIONS)
    if cfg.scenario == FIXED_RADIUS:
        side = 2.0 * cfg.r_s_target * np.sqrt(cfg.n / 0.5)
        min_dist = 2.0 * cfg.r_s_target
        train = _poisson_disk(cfg.n, side, min_dist, gen_loc)
        test = _poisson_disk(cfg.n_test, side, min_dist, gen_loc)
        domain = (0.0, side, 0.0, side)
    else:
        train = gen_loc.uniform(-3.0, 3.0, size=(cfg.n, 2))
        test = gen_loc.uniform(-3.0, 3.0, size=(cfg.n_test, 2))
        domain = (-3.0, 3.0, -3.0, 3.0)

    all_locations = np.vstack([train, test])
    values = gp_sample(all_locations, cfg.params, cfg.seed)
    train_values = values[:cfg.n].copy()
    test_values = values[cfg.n:].copy()

    if cfg.contamination_value is not None:
        count = int(np.ceil(cfg.contamination_fraction * cfg.n))
        gen_cont = rng.substream(cfg.seed, rng.CONTAMINATION)
        contaminated = np.sort(gen_cont.choice(cfg.n, size=count, replace=False))
        train_values[contaminated] = cfg.contamination_value
    else:
        contaminated = np.empty(0, dtype=int)

    return Dataset(train, train_values, test, test_values,
                   contaminated.astype(int), domain)


def with_calibration(ds: Dataset, calib_indices) -> Dataset:
    """Attach a calibration subset (indices into the training rows)."""
    calib = np.asarray(calib_indices, dtype=int)
    if calib.size and (calib.min() < 0 or calib.max() >= ds.n):
        raise ValueError("calibration indices out of range")
    return replace(ds, calib_indices=np.sort(calib))


def to_csv(ds: Dataset) -> str:
    """Serialize to the role,x,y,value,contaminated layout (%.12g numbers)."""
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    contaminated = np.zeros(ds.n, dtype=int)
    contaminated[ds.contaminated_indices] = 1
    calib = set() if ds.calib_indices is None else set(ds.calib_indices.tolist())
    for i in range(ds.n):
        role = "calib" if i in calib else "train"
        out.write(f"{role},{ds.train_locations[i, 0]:.12g},{ds.train_locations[i, 1]:.12g},"
                  f"{ds.train_values[i]:.12g},{contaminated[i]}\n")
    for j in range(ds.test_locations.shape[0]):
        out.write(f"test,{ds.test_locations[j, 0]:.12g},{ds.test_locations[j, 1]:.12g},"
                  f"{ds.test_values[j]:.12g},0\n")
    return out.getvalue()


def from_csv(text: str) -> Dataset:
    """Parse the CSV layout back into a Dataset (domain set to the data box)."""
    lines = text.strip().split("\n")
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    train, test, flags, calib = [], [], [], []
    for line in lines[1:]:
        role, x, y, value, contaminated = line.split(",")
        if role in ("train", "calib"):
            if role == "calib":
                calib.append(len(train))
            train.append((float(x), float(y), float(value)))
            flags.append(int(contaminated))
        elif role == "test":
            test.append((float(x), float(y), float(value)))
        else:
            raise ValueError(f"unknown role {role!r}")
    train = np.asarray(train, dtype=float).reshape(-1, 3)
    test = np.asarray(test, dtype=float).reshape(-1, 3)
    locations = np.vstack([train[:, :2], test[:, :2]]) if train.size or test.size else np.empty((0, 2))
    domain = (float(locations[:, 0].min()), float(locations[:, 0].max()),
              float(locations[:, 1].min()), float(locations[:, 1].max()))
    return Dataset(train[:, :2], train[:, 2], test[:, :2], test[:, 2],
                   np.flatnonzero(np.asarray(flags, dtype=int)), domain,
                   np.asarray(calib, dtype=int) if calib else None)


def dataset_hash(ds: Dataset) -> str:
    """Stable content hash of the CSV serialization."""
    return hashlib.sha256(to_csv(ds).encode()).hexdigest()
