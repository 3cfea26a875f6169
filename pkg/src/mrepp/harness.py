"""Experiment driver: replicated method comparisons, convergence-slope
diagnostics, and influence-bound audits, all emitting stable CSV files plus a
JSON run manifest.

Each replicate generates one dataset (seed = base seed + replicate index),
fits every configured method on identical data, and scores on the test set.
Replicates can run in parallel worker processes; rows are sorted by
(method, seed) before writing, so serial and parallel runs produce identical
files up to the runtime column. Probabilistic scores are always computed on
the held-out test set.
"""

from __future__ import annotations

import json
import logging
import re
import time
from dataclasses import dataclass, replace
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import rng
from .config import EPP, GP, MREPP, PP, ExperimentConfig, MethodSpec, with_n, with_seed
from .ensemble import (calibration_split, epp_fit, epp_predict,
                       learn_resolution_weights, mrepp_fit, mrepp_predict)
from .errors import ConfigError
from .exact import gp_fit, gp_influence, gp_predict, gp_sample, gp_with_values
from .kernels import KernelParams
from .lowrank import pp_fit, pp_influence, pp_predict, pp_with_values
from .metrics import csv_header, csv_row, score
from .mixture import PredictiveMixture
from .simulate import Dataset, generate, dataset_hash
from .support_points import SPSolverConfig, support_points
from . import __version__

logger = logging.getLogger(__name__)

INFLUENCE_HEADER = "n,m,max_infl_gp,bound_gp,max_infl_pp,bound_pp,fd_max_err"
SLOPES_HEADER = "method,slope,stderr,n_points"


@dataclass(frozen=True)
class MethodResult:
    label: str
    seed: int
    report: object  # ScoreReport or None on failure
    runtime_s: float
    status: str
    weights: tuple | None = None  # learned resolution weights, mrepp only


@dataclass(frozen=True)
class RunResult:
    results_path: Path
    manifest_path: Path
    weights_paths: dict
    rows: tuple


def _solver_cfg(seed: int, method_index: int) -> SPSolverConfig:
    return SPSolverConfig(seed=rng.derive_seed(seed, rng.SOLVER, 1000 + method_index))


def _fit_predict(spec: MethodSpec, ds: Dataset, params: KernelParams,
                 seed: int, method_index: int):
    """Fit one method on the dataset and predict the test locations.

    Returns (mixture, learned_weights_or_None).
    """
    resolved = spec.resolve(ds.n, params.nu)
    solver = _solver_cfg(seed, method_index)
    if spec.kind == GP:
        fit = gp_fit(ds.train_locations, ds.train_values, params)
        return gp_predict(fit, ds.test_locations), None
    if spec.kind == PP:
        inducing = support_points(ds.train_locations, resolved["m"], solver)
        model = pp_fit(ds.train_locations, ds.train_values, inducing, params)
        return pp_predict(model, ds.test_locations), None
    if spec.kind == EPP:
        model = epp_fit(ds.train_locations, ds.train_values, resolved["K"],
                        resolved["m"], resolved["delta"], params, solver)
        return epp_predict(model, ds.test_locations), None
    # mrepp: the resolution weights come from a held-out calibration subset
    # (clean observations only), the final level models condition on all
    # observed data
    fit_idx, calib_idx = calibration_split(ds.n, spec.calib_fraction, seed,
                                           exclude=ds.contaminated_indices)
    levels = [(K, m, resolved["delta"]) for K, m in zip(resolved["K"], resolved["m"])]
    calib_model = mrepp_fit(ds.train_locations[fit_idx], ds.train_values[fit_idx],
                            levels, params, solver)
    weights = learn_resolution_weights(calib_model, ds.train_locations[calib_idx],
                                       ds.train_values[calib_idx])
    model = mrepp_fit(ds.train_locations, ds.train_values, levels, params, solver)
    model.p = weights
    return mrepp_predict(model, ds.test_locations), tuple(float(p) for p in weights)


def run_replicate(config: ExperimentConfig, replicate: int):
    """All method results for one replicate, plus the dataset hash."""
    _warm_solver()  # keep JIT compilation out of the timed sections
    seed = config.seed + replicate
    scenario = replace(config.scenario, seed=seed)
    ds = generate(scenario)
    results = []
    for index, spec in enumerate(config.methods):
        start = time.perf_counter()
        try:
            mixture, weights = _fit_predict(spec, ds, scenario.params, seed, index)
            report = score(mixture, ds.test_values)
            status = "ok"
        except Exception as exc:  # failures become rows, the run continues
            logger.warning("method %s failed on replicate %d: %s", spec.label,
                           replicate, exc)
            report, weights = None, None
            status = f"failed:{type(exc).__name__}"
        results.append(MethodResult(spec.label, seed, report,
                                    time.perf_counter() - start, status, weights))
    return results, dataset_hash(ds)


def _format_rows(config: ExperimentConfig, results) -> list[str]:
    scenario = config.scenario
    contamination = scenario.contamination_value or 0.0
    rows = []
    for res in sorted(results, key=lambda r: (r.label, r.seed)):
        if res.report is not None:
            row = csv_row(res.report, res.label, scenario.scenario, scenario.n,
                          contamination, res.seed, res.runtime_s)
        else:
            blanks = ",".join(["nan"] * 5)
            row = (f"{res.label},{scenario.scenario},{scenario.n},"
                   f"{contamination:.12g},{res.seed},{blanks},{res.runtime_s:.12g}")
        rows.append(f"{row},{res.status}")
    return rows


def _slug(label: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", label.lower()).strip("_")


def _warm_solver():
    """Trigger JIT compilation outside any timed section."""
    gen = np.random.default_rng(0)
    support_points(gen.uniform(0, 1, size=(8, 2)), 2, SPSolverConfig(max_iters=2))


def run(config: ExperimentConfig) -> RunResult:
    """Execute the configured experiment and write results + manifest."""
    if not config.methods:
        raise ConfigError("no methods configured")
    started = time.perf_counter()
    tasks = list(range(config.replicates))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(run_replicate, [config] * len(tasks), tasks))
    else:
        outcomes = [run_replicate(config, r) for r in tasks]

    all_results = [res for results, _ in outcomes for res in results]
    hashes = [h for _, h in outcomes]

    out_path = Path(config.output)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    lines = [csv_header() + ",status"] + _format_rows(config, all_results)
    out_path.write_text("\n".join(lines) + "\n")

    weights_paths = {}
    for spec in config.methods:
        if spec.kind != MREPP:
            continue
        rows = sorted((r for r in all_results if r.label == spec.label and r.weights),
                      key=lambda r: r.seed)
        if not rows:
            continue
        L = len(rows[0].weights)
        header = "method,scenario,n,contamination,seed," + ",".join(
            f"p{l}" for l in range(1, L + 1))
        body = [
            f"{r.label},{config.scenario.scenario},{config.scenario.n},"
            f"{config.scenario.contamination_value or 0.0:.12g},{r.seed},"
            + ",".join(f"{w:.12g}" for w in r.weights)
            for r in rows
        ]
        path = out_path.with_name(f"{out_path.stem}.weights.{_slug(spec.label)}.csv")
        path.write_text("\n".join([header] + body) + "\n")
        weights_paths[spec.label] = path

    manifest = {
        "version": __version__,
        "config": config.raw,
        "seed": config.seed,
        "replicates": config.replicates,
        "methods": {m.label: m.resolve(config.scenario.n, config.scenario.params.nu)
                    for m in config.methods},
        "dataset_hashes": hashes,
        "wall_time_s": time.perf_counter() - started,
        "mean_runtime_s": {
            m.label: float(np.mean([r.runtime_s for r in all_results
                                    if r.label == m.label]))
            for m in config.methods
        },
    }
    manifest_path = out_path.with_name(out_path.stem + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return RunResult(out_path, manifest_path, weights_paths, tuple(all_results))


def slope_diagnostic(results, method: str) -> tuple[float, float]:
    """OLS slope (with standard error) of log mean squared error vs log n.

    ``results`` is an iterable of mappings with at least 'method', 'n' and
    'rmse' keys; needs at least 3 distinct n values with 5+ replicates each.
    """
    by_n: dict[int, list[float]] = {}
    for row in results:
        if row["method"] == method:
            by_n.setdefault(int(row["n"]), []).append(float(row["rmse"]) ** 2)
    if len(by_n) < 3 or any(len(v) < 5 for v in by_n.values()):
        raise ValueError("need >= 3 distinct n values with >= 5 replicates each")
    ns = np.array(sorted(by_n))
    log_mse = np.log([np.mean(by_n[n]) for n in ns])
    log_n = np.log(ns)
    x = log_n - log_n.mean()
    slope = float(np.sum(x * log_mse) / np.sum(x * x))
    intercept = float(log_mse.mean())
    resid = log_mse - (intercept + slope * x)
    dof = max(len(ns) - 2, 1)
    stderr = float(np.sqrt(np.sum(resid ** 2) / dof / np.sum(x * x)))
    return slope, stderr


def rows_as_records(csv_text: str) -> list[dict]:
    """Parse a results CSV back into dict records (strings preserved)."""
    lines = csv_text.strip().split("\n")
    names = lines[0].split(",")
    return [dict(zip(names, line.split(","))) for line in lines[1:]]


def slopes(config: ExperimentConfig) -> tuple[list[str], dict]:
    """Run the n-grid experiment and fit per-method error slopes.

    Returns (combined CSV lines, {method: (slope, stderr)}).
    """
    all_lines = [csv_header() + ",status"]
    records = []
    for n in config.n_grid:
        sub = with_n(config, n)
        outcomes = ([run_replicate(sub, r) for r in range(sub.replicates)]
                    if config.jobs == 1 else _parallel_replicates(sub))
        results = [res for result, _ in outcomes for res in result]
        for line in _format_rows(sub, results):
            all_lines.append(line)
        for res in results:
            if res.report is not None:
                records.append({"method": res.label, "n": n, "rmse": res.report.rmse})
    fits = {m.label: slope_diagnostic(records, m.label) for m in config.methods}
    return all_lines, fits


def _parallel_replicates(config: ExperimentConfig):
    with ProcessPoolExecutor(max_workers=config.jobs) as pool:
        return list(pool.map(run_replicate, [config] * config.replicates,
                             range(config.replicates)))


def influence_audit(config: ExperimentConfig) -> list[str]:
    """Peak influences, analytic bounds, and finite-difference errors over a
    grid of (n, m); returns the audit CSV lines."""
    params = config.scenario.params
    lines = [INFLUENCE_HEADER]
    for n in config.influence_n:
        for m in config.influence_m:
            seed = rng.derive_seed(config.seed, rng.TARGETS, n, m)
            gen = rng.substream(seed, rng.LOCATIONS)
            locs = gen.uniform(-3.0, 3.0, size=(n, 2))
            y = gp_sample(locs, params, seed)
            target = gen.uniform(-3.0, 3.0, size=(1, 2))

            fit = gp_fit(locs, y, params)
            infl_gp, bound_gp = gp_influence(fit, target)
            inducing = support_points(locs, m, SPSolverConfig(seed=seed))
            model = pp_fit(locs, y, inducing, params)
            infl_pp, bound_pp, _ = pp_influence(model, target)

            fd_err = max(
                _fd_error(lambda v: gp_predict(gp_with_values(fit, v), target).mean[0],
                          y, infl_gp),
                _fd_error(lambda v: pp_predict(pp_with_values(model, v), target).mean[0],
                          y, infl_pp),
            )
            lines.append(
                f"{n},{m},{np.max(np.abs(infl_gp)):.12g},{bound_gp:.12g},"
                f"{np.max(np.abs(infl_pp)):.12g},{bound_pp:.12g},{fd_err:.12g}")
    return lines


def _fd_error(predict_mean, values: np.ndarray, influence: np.ndarray,
              h: float = 1e-6, checks: int = 5) -> float:
    """Max relative error of central differences against the analytic
    influence, on the largest-influence entries."""
    order = np.argsort(np.abs(influence))[::-1][:checks]
    scale = np.max(np.abs(influence))
    worst = 0.0
    for i in order:
        up, down = values.copy(), values.copy()
        up[i] += h
        down[i] -= h
        fd = (predict_mean(up) - predict_mean(down)) / (2.0 * h)
        worst = max(worst, abs(fd - influence[i]) / scale)
    return worst
