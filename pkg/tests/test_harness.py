import json

import numpy as np
import pytest
import yaml

from mrepp import ConfigError
from mrepp.cli import main
from mrepp.config import MethodSpec, load_config, parse_config
from mrepp.harness import (influence_audit, rows_as_records, run,
                           slope_diagnostic, slopes)

BASE_CONFIG = {
    "seed": 2024,
    "replicates": 3,
    "output": "results.csv",
    "scenario": {
        "scenario": "fixed_space",
        "n": 150,
        "n_test": 60,
        "params": {"eta2": 1.5, "phi": 0.21, "nu": 1.5, "tau2": 0.25},
    },
    "methods": [{"kind": "gp"}, {"kind": "pp", "m": 20}],
}


def _config(tmp_path, **overrides):
    data = json.loads(json.dumps(BASE_CONFIG))  # deep copy
    for key, value in overrides.items():
        if key == "scenario":
            data["scenario"].update(value)
        else:
            data[key] = value
    data["output"] = str(tmp_path / data.get("output", "results.csv"))
    return parse_config(data)


def _strip_runtime(text: str) -> list:
    rows = [line.split(",") for line in text.strip().split("\n")]
    idx = rows[0].index("runtime_s")
    return [row[:idx] + row[idx + 1:] for row in rows]


class TestConfig:
    def test_yaml_round_trip(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text(yaml.safe_dump(BASE_CONFIG))
        config = load_config(path)
        assert config.seed == 2024
        assert config.scenario.n == 150
        assert [m.label for m in config.methods] == ["GP", "PP"]

    def test_missing_file_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.yaml")

    def test_mrepp_count_rules(self):
        # alphas (0, 0.5) at n=1000: K = (1, 31); m capped by m_max
        spec = MethodSpec("mrepp", "MREPP(L=2)", alphas=(0.0, 0.5), m_max=200)
        resolved = spec.resolve(1000, nu=1.5)
        assert resolved["K"] == [1, 31]
        assert resolved["m"][0] == 200  # min(200, 1000^0.8, 500) hits the cap
        assert resolved["m"] == sorted(resolved["m"], reverse=True)

    def test_epp_count_rule(self):
        spec = MethodSpec("epp", "EPP(0.5)", alpha=0.5)
        resolved = spec.resolve(1000, nu=1.5)
        assert resolved["K"] == 31
        # min((1000/31)^0.8, 0.5*1000/31) floored
        assert resolved["m"] == int(min((1000 / 31) ** 0.8, 0.5 * 1000 / 31))

    def test_pp_default_m_rule(self):
        spec = MethodSpec("pp", "PP")
        assert spec.resolve(1000, nu=1.5)["m"] == int(min(1000 ** 0.8, 500.0))

    def test_rough_kernel_uses_half_region_size(self):
        # gamma = 1.5 for nu = 0.5 makes the 0.5*(n/K) branch bind
        spec = MethodSpec("epp", "EPP(0.2)", alpha=0.2)
        resolved = spec.resolve(1000, nu=0.5)
        assert resolved["m"] == int(0.5 * 1000 / resolved["K"])

    def test_bad_alpha_rejected(self):
        with pytest.raises(ConfigError):
            MethodSpec("epp", "EPP", alpha=1.0).resolve(100, nu=1.5)

    def test_colliding_region_counts_rejected(self):
        spec = MethodSpec("mrepp", "MREPP", alphas=(0.30, 0.31))
        with pytest.raises(ConfigError):
            spec.resolve(50, nu=1.5)

    def test_unknown_method_kind_rejected(self):
        data = json.loads(json.dumps(BASE_CONFIG))
        data["methods"] = [{"kind": "vecchia"}]
        with pytest.raises(ConfigError):
            parse_config(data)

    def test_duplicate_labels_rejected(self):
        data = json.loads(json.dumps(BASE_CONFIG))
        data["methods"] = [{"kind": "gp"}, {"kind": "gp"}]
        with pytest.raises(ConfigError):
            parse_config(data)


class TestRun:
    def test_row_accounting(self, tmp_path):
        config = _config(tmp_path)
        result = run(config)
        lines = result.results_path.read_text().strip().split("\n")
        assert len(lines) == 1 + 2 * 3  # header + methods x replicates
        assert lines[0].startswith("method,scenario,n,contamination,seed,rmse")
        assert lines[0].endswith(",status")
        assert all(line.endswith(",ok") for line in lines[1:])

    def test_rerun_reproduces_bytes_modulo_runtime(self, tmp_path):
        first = run(_config(tmp_path, output="a.csv"))
        second = run(_config(tmp_path, output="b.csv"))
        assert _strip_runtime(first.results_path.read_text()) == \
            _strip_runtime(second.results_path.read_text())

    def test_parallel_matches_serial(self, tmp_path):
        serial = run(_config(tmp_path, output="serial.csv"))
        parallel = run(_config(tmp_path, output="parallel.csv", jobs=2))
        assert _strip_runtime(serial.results_path.read_text()) == \
            _strip_runtime(parallel.results_path.read_text())

    def test_manifest_contents(self, tmp_path):
        config = _config(tmp_path, methods=[
            {"kind": "gp"},
            {"kind": "mrepp", "alphas": [0.0, 0.5], "m_max": 50},
        ], scenario={"n": 150})
        result = run(config)
        manifest = json.loads(result.manifest_path.read_text())
        assert manifest["methods"]["MREPP(L=2)"]["K"] == [1, 12]
        assert manifest["methods"]["MREPP(L=2)"]["m"][0] == 50
        assert len(manifest["dataset_hashes"]) == 3
        assert len(set(manifest["dataset_hashes"])) == 3

    def test_identical_data_across_methods(self, tmp_path):
        config = _config(tmp_path, replicates=2)
        result = run(config)
        records = rows_as_records(result.results_path.read_text())
        seeds = sorted({r["seed"] for r in records})
        assert seeds == ["2024", "2025"]

    def test_method_failure_becomes_status_row(self, tmp_path):
        config = _config(tmp_path, replicates=1,
                         methods=[{"kind": "gp"}, {"kind": "pp", "m": 500}])
        result = run(config)  # m=500 > n=150 cannot be fitted
        records = rows_as_records(result.results_path.read_text())
        by_label = {r["method"]: r for r in records}
        assert by_label["GP"]["status"] == "ok"
        assert by_label["PP"]["status"].startswith("failed:")
        assert by_label["PP"]["rmse"] == "nan"

    def test_mrepp_weights_csv(self, tmp_path):
        config = _config(tmp_path, replicates=2, methods=[
            {"kind": "mrepp", "alphas": [0.0, 0.4], "m_max": 30},
        ])
        result = run(config)
        path = result.weights_paths["MREPP(L=2)"]
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "method,scenario,n,contamination,seed,p1,p2"
        assert len(lines) == 3
        for line in lines[1:]:
            weights = [float(x) for x in line.split(",")[-2:]]
            assert sum(weights) == pytest.approx(1.0, abs=1e-9)


class TestSlopeDiagnostic:
    def test_exact_power_law(self):
        ns = [250, 500, 1000, 2000]
        rows = [{"method": "GP", "n": n, "rmse": n ** -0.3}
                for n in ns for _ in range(5)]
        slope, stderr = slope_diagnostic(rows, "GP")
        assert slope == pytest.approx(-0.6, abs=1e-6)
        assert stderr == pytest.approx(0.0, abs=1e-9)

    def test_insufficient_grid_rejected(self):
        rows = [{"method": "GP", "n": n, "rmse": 1.0} for n in (100, 200) for _ in range(5)]
        with pytest.raises(ValueError):
            slope_diagnostic(rows, "GP")


class TestInfluenceAudit:
    def test_bounds_and_fd_hold_on_small_grid(self, tmp_path):
        from dataclasses import replace

        config = replace(_config(tmp_path), influence_n=(100, 200), influence_m=(8,))
        lines = influence_audit(config)
        assert lines[0] == "n,m,max_infl_gp,bound_gp,max_infl_pp,bound_pp,fd_max_err"
        assert len(lines) == 3
        for line in lines[1:]:
            n, m, max_gp, bound_gp, max_pp, bound_pp, fd_err = map(float, line.split(","))
            assert max_gp <= bound_gp
            assert max_pp <= bound_pp
            assert fd_err < 1e-4


class TestCli:
    def test_simulate_and_run(self, tmp_path):
        cfg_path = tmp_path / "cfg.yaml"
        data = json.loads(json.dumps(BASE_CONFIG))
        data["replicates"] = 1
        cfg_path.write_text(yaml.safe_dump(data))
        out_csv = tmp_path / "data.csv"
        assert main(["simulate", "--config", str(cfg_path), "--out", str(out_csv)]) == 0
        assert out_csv.read_text().startswith("role,x,y,value,contaminated")
        results = tmp_path / "res.csv"
        assert main(["run", "--config", str(cfg_path), "--out", str(results)]) == 0
        assert results.exists()
        assert results.with_name("res.manifest.json").exists()

    def test_missing_config_gives_exit_2(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "missing.yaml")]) == 2

    def test_bad_method_gives_exit_2(self, tmp_path):
        cfg_path = tmp_path / "bad.yaml"
        data = json.loads(json.dumps(BASE_CONFIG))
        data["methods"] = [{"kind": "nope"}]
        cfg_path.write_text(yaml.safe_dump(data))
        assert main(["run", "--config", str(cfg_path)]) == 2

    def test_seed_override_changes_data(self, tmp_path):
        cfg_path = tmp_path / "cfg.yaml"
        cfg_path.write_text(yaml.safe_dump(BASE_CONFIG))
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        assert main(["simulate", "--config", str(cfg_path), "--out", str(a)]) == 0
        assert main(["simulate", "--config", str(cfg_path), "--seed", "9", "--out", str(b)]) == 0
        assert a.read_text() != b.read_text()


def test_slopes_on_tiny_grid(tmp_path):
    from dataclasses import replace

    config = _config(tmp_path, replicates=5, methods=[{"kind": "pp", "m": 15}])
    config = replace(config, n_grid=(60, 120, 240))
    lines, fits = slopes(config)
    assert len(lines) == 1 + 3 * 5
    slope, stderr = fits["PP"]
    assert np.isfinite(slope) and np.isfinite(stderr)
