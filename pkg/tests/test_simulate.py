import numpy as np
import pytest

from mrepp import ConfigError, KernelParams, generate, separation_radius
from mrepp.simulate import (CONTAMINATED, FIXED_RADIUS, FIXED_SPACE, Dataset,
                            ScenarioConfig, from_csv, to_csv, with_calibration)

PAPER_PARAMS = KernelParams(eta2=1.5, phi=0.21, nu=1.5, tau2=0.25)


def _cfg(**overrides):
    base = dict(scenario=FIXED_SPACE, n=200, n_test=50, params=PAPER_PARAMS, seed=7)
    base.update(overrides)
    return ScenarioConfig(**base)


class TestScenarioConfig:
    def test_paper_parameters_accepted(self):
        cfg = _cfg(scenario=CONTAMINATED, contamination_value=15.0)
        assert cfg.params.eta2 == 1.5
        assert cfg.params.tau2 == 0.25
        assert cfg.params.phi == 0.21 and cfg.params.nu == 1.5

    def test_contamination_levels_relative_to_noise(self):
        # 5, 10, 15 are 10, 20, 30 times the noise standard deviation
        sd = np.sqrt(PAPER_PARAMS.tau2)
        for value, multiple in [(5, 10), (10, 20), (15, 30)]:
            assert value / sd == pytest.approx(multiple, abs=1e-12)

    def test_validation(self):
        with pytest.raises(ConfigError):
            _cfg(n=5)
        with pytest.raises(ConfigError):
            _cfg(scenario="weird")
        with pytest.raises(ConfigError):
            _cfg(scenario=FIXED_RADIUS)  # missing r_s_target
        with pytest.raises(ConfigError):
            _cfg(contamination_fraction=0.5)


class TestGenerate:
    def test_deterministic_per_seed(self):
        a = generate(_cfg())
        b = generate(_cfg())
        assert np.array_equal(a.train_locations, b.train_locations)
        assert np.array_equal(a.train_values, b.train_values)
        assert np.array_equal(a.test_values, b.test_values)
        assert to_csv(a) == to_csv(b)

    def test_fixed_space_domain(self):
        ds = generate(_cfg())
        assert ds.domain == (-3.0, 3.0, -3.0, 3.0)
        assert np.all(np.abs(ds.train_locations) <= 3.0)
        assert ds.train_locations.shape == (200, 2)
        assert ds.test_locations.shape == (50, 2)

    def test_train_test_disjoint(self):
        ds = generate(_cfg())
        both = np.vstack([ds.train_locations, ds.test_locations])
        assert np.unique(both, axis=0).shape[0] == both.shape[0]

    def test_contamination_counts_and_twin(self):
        cfg = _cfg(scenario=CONTAMINATED, n=1000, contamination_value=15.0, seed=3)
        ds = generate(cfg)
        assert ds.contaminated_indices.size == 10  # ceil(0.01 * 1000)
        assert np.all(ds.train_values[ds.contaminated_indices] == 15.0)
        twin = generate(_cfg(scenario=CONTAMINATED, n=1000, seed=3))
        assert np.array_equal(twin.train_locations, ds.train_locations)
        assert np.array_equal(twin.test_values, ds.test_values)
        differs = np.flatnonzero(twin.train_values != ds.train_values)
        assert np.array_equal(differs, ds.contaminated_indices)

    @pytest.mark.parametrize("n", [500, 1000, 2000])
    def test_fixed_radius_keeps_separation(self, n):
        cfg = _cfg(scenario=FIXED_RADIUS, n=n, n_test=100, r_s_target=0.001, seed=n)
        ds = generate(cfg)
        assert separation_radius(ds.train_locations) >= 0.001 - 1e-12
        side = ds.domain[1]
        assert np.all(ds.train_locations >= 0.0) and np.all(ds.train_locations <= side)


class TestSeparationRadius:
    def test_two_points(self):
        assert separation_radius([(0.0, 0.0), (2.0, 0.0)]) == 1.0

    def test_grid_spacing(self):
        xs, ys = np.meshgrid(np.arange(5) * 0.25, np.arange(5) * 0.25)
        grid = np.column_stack([xs.ravel(), ys.ravel()])
        assert separation_radius(grid) == pytest.approx(0.125, abs=1e-12)

    def test_needs_two_locations(self):
        with pytest.raises(ValueError):
            separation_radius([(0.0, 0.0)])


class TestCsv:
    def test_round_trip(self):
        cfg = _cfg(scenario=CONTAMINATED, contamination_value=10.0)
        ds = with_calibration(generate(cfg), [0, 3, 7])
        text = to_csv(ds)
        assert text.splitlines()[0] == "role,x,y,value,contaminated"
        back = from_csv(text)
        assert np.allclose(back.train_locations, ds.train_locations)
        assert np.allclose(back.train_values, ds.train_values)
        assert np.allclose(back.test_values, ds.test_values)
        assert np.array_equal(back.contaminated_indices, ds.contaminated_indices)
        assert np.array_equal(back.calib_indices, [0, 3, 7])

    def test_header_enforced(self):
        with pytest.raises(ValueError):
            from_csv("x,y\n1,2\n")

    def test_role_accounting(self):
        ds = with_calibration(generate(_cfg()), np.arange(40))
        lines = to_csv(ds).splitlines()[1:]
        roles = [line.split(",")[0] for line in lines]
        assert roles.count("calib") == 40
        assert roles.count("train") == 160
        assert roles.count("test") == 50
