import numpy as np
import pytest

from mrepp import SPSolverConfig, energy_distance, support_points
from mrepp.support_points import _mm_step


class TestEnergyDistance:
    def test_identical_multisets_give_zero(self):
        gen = np.random.default_rng(1)
        pts = gen.uniform(-3, 3, size=(40, 2))
        assert abs(energy_distance(pts, pts)) < 1e-12

    def test_single_point_pair(self):
        # 2*1 - 0 - 0 = 2
        assert energy_distance([(0.0, 0.0)], [(1.0, 0.0)]) == pytest.approx(2.0, abs=1e-12)

    def test_duplicated_candidate_at_sample_point(self):
        # (2/2)(0+0) - 0 - 0 = 0
        value = energy_distance([(0.0, 0.0)], [(0.0, 0.0), (0.0, 0.0)])
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_nonnegative_on_random_pairs(self):
        gen = np.random.default_rng(2)
        for trial in range(20):
            sample = gen.uniform(-3, 3, size=(int(gen.integers(2, 60)), 2))
            cand = gen.uniform(-3, 3, size=(int(gen.integers(1, 20)), 2))
            assert energy_distance(sample, cand) >= -1e-12


def _iteration_energies(sample, m, cfg):
    """Energy after the init and after each MM sweep (oracle for monotonicity)."""
    from mrepp import rng as rngmod

    rng = rngmod.substream(cfg.seed, rngmod.SOLVER)
    idx = rng.choice(sample.shape[0], size=m, replace=False)
    points = sample[np.sort(idx)].copy()
    energies = [energy_distance(sample, points)]
    for _ in range(cfg.max_iters):
        points = _mm_step(points, sample)
        energies.append(energy_distance(sample, points))
    return energies


class TestSupportPoints:
    def test_two_point_segment_minimizer(self):
        # For two sample points the energy is constant along the connecting
        # segment (any point on it is optimal); the solver must return a
        # point on the segment at the optimal energy. A grid oracle over the
        # segment pins the optimal value.
        sample = np.array([[0.0, 0.0], [2.0, 0.0]])
        ts = np.linspace(0.0, 2.0, 2001)
        oracle = min(energy_distance(sample, [(t, 0.0)]) for t in ts)
        out = support_points(sample, 1, SPSolverConfig(seed=3))
        assert out.shape == (1, 2)
        assert abs(out[0, 1]) < 1e-9
        assert -1e-9 <= out[0, 0] <= 2.0 + 1e-9
        assert energy_distance(sample, out) <= oracle + 1e-6

    def test_full_sample_is_fixed_point(self):
        gen = np.random.default_rng(4)
        sample = gen.uniform(-3, 3, size=(15, 2))
        out = support_points(sample, 15, SPSolverConfig(seed=0))
        assert np.allclose(np.sort(out, axis=0), np.sort(sample, axis=0), atol=1e-12)
        assert abs(energy_distance(sample, out)) < 1e-12

    def test_m_exceeding_sample_rejected(self):
        with pytest.raises(ValueError):
            support_points(np.zeros((3, 2)) + np.arange(3)[:, None], 4)

    def test_energy_monotone_along_iterations(self):
        gen = np.random.default_rng(5)
        for trial in range(20):
            n = int(gen.integers(50, 200))
            m = int(gen.integers(2, 12))
            sample = gen.uniform(-3, 3, size=(n, 2))
            energies = _iteration_energies(sample, m, SPSolverConfig(max_iters=25, seed=trial))
            diffs = np.diff(energies)
            assert np.all(diffs <= 1e-10), f"energy increased on trial {trial}"

    def test_never_above_initialization_energy(self):
        gen = np.random.default_rng(6)
        for trial in range(10):
            sample = gen.uniform(0, 1, size=(100, 2))
            cfg = SPSolverConfig(seed=trial)
            out = support_points(sample, 10, cfg)
            init = _iteration_energies(sample, 10, SPSolverConfig(max_iters=1, seed=trial))[0]
            assert energy_distance(sample, out) <= init + 1e-12

    def test_beats_random_subsets(self):
        gen = np.random.default_rng(7)
        sample = gen.uniform(-3, 3, size=(2000, 2))
        out = support_points(sample, 50, SPSolverConfig(seed=11))
        sp_energy = energy_distance(sample, out)
        wins = 0
        for trial in range(100):
            subset = sample[gen.choice(2000, size=50, replace=False)]
            if sp_energy < energy_distance(sample, subset):
                wins += 1
        assert wins >= 90

    def test_stays_near_bounding_box(self):
        gen = np.random.default_rng(8)
        sample = gen.uniform(-2, 5, size=(300, 2))
        out = support_points(sample, 20, SPSolverConfig(seed=9))
        lo = sample.min(axis=0)
        hi = sample.max(axis=0)
        pad = 0.1 * (hi - lo)
        assert np.all(out >= lo - pad) and np.all(out <= hi + pad)

    def test_deterministic_given_seed(self):
        gen = np.random.default_rng(10)
        sample = gen.uniform(-3, 3, size=(200, 2))
        a = support_points(sample, 12, SPSolverConfig(seed=21))
        b = support_points(sample, 12, SPSolverConfig(seed=21))
        assert np.array_equal(a, b)

    def test_translation_equivariance(self):
        gen = np.random.default_rng(11)
        sample = gen.uniform(-1, 1, size=(150, 2))
        shift = np.array([10.0, -4.0])
        a = support_points(sample, 8, SPSolverConfig(seed=13))
        b = support_points(sample + shift, 8, SPSolverConfig(seed=13))
        assert np.max(np.abs(b - (a + shift))) < 1e-8
