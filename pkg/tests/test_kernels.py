import numpy as np
import pytest

from mrepp import ConfigError, KernelParams, cov_matrix, matern_cov
from mrepp.kernels import as_locations, jittered_cholesky


def test_zero_lag_returns_marginal_variance():
    params = KernelParams(eta2=1.5, phi=0.21, nu=1.5, tau2=0.25)
    assert matern_cov(0.0, params) == 1.5


def test_exponential_closed_form_at_unit_distance():
    # nu = 0.5, phi = 1: cov(1) = exp(-1)
    params = KernelParams(eta2=1.0, phi=1.0, nu=0.5)
    assert matern_cov(1.0, params) == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_matern32_closed_form_at_unit_distance():
    # (1 + 1/phi) * exp(-1/phi) with phi = 0.21
    params = KernelParams(eta2=1.0, phi=0.21, nu=1.5)
    a = 1.0 / 0.21
    expected = (1.0 + a) * np.exp(-a)
    assert matern_cov(1.0, params) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(0.0494, abs=5e-4)


@pytest.mark.parametrize("phi,nu", [(0.33, 0.5), (0.21, 1.5)])
def test_effective_range_one_convention(phi, nu):
    # correlation at distance 1 close to 0.05 for both parameterizations
    params = KernelParams(eta2=1.0, phi=phi, nu=nu)
    assert 0.045 <= matern_cov(1.0, params) <= 0.055


@pytest.mark.parametrize("nu", [0.5, 1.5, 2.5])
def test_nonincreasing_in_distance_and_bounded(nu):
    params = KernelParams(eta2=2.0, phi=0.7, nu=nu)
    d = np.linspace(0.0, 10.0, 500)
    cov = matern_cov(d, params)
    assert np.all(np.diff(cov) <= 0)
    assert np.all(cov > 0)
    assert np.all(cov <= params.eta2)


def test_invalid_nu_rejected():
    with pytest.raises(ConfigError):
        KernelParams(eta2=1.0, phi=1.0, nu=1.0)


@pytest.mark.parametrize("field,value", [("eta2", 0.0), ("phi", -1.0), ("tau2", -0.1)])
def test_invalid_positive_fields_rejected(field, value):
    kwargs = {"eta2": 1.0, "phi": 1.0, "nu": 0.5, "tau2": 0.0}
    kwargs[field] = value
    with pytest.raises(ConfigError):
        KernelParams(**kwargs)


class TestCovMatrix:
    def test_single_location(self):
        params = KernelParams(eta2=1.5, phi=0.21, nu=1.5)
        K = cov_matrix([(0.3, -0.2)], [(0.3, -0.2)], params)
        assert K.shape == (1, 1)
        assert K[0, 0] == 1.5

    def test_exact_symmetry(self):
        gen = np.random.default_rng(7)
        pts = gen.uniform(-3, 3, size=(40, 2))
        params = KernelParams(eta2=1.5, phi=0.21, nu=1.5)
        K = cov_matrix(pts, pts, params)
        assert np.array_equal(K, K.T)

    def test_positive_definite_with_nugget(self):
        # Cholesky as the oracle for positive definiteness
        gen = np.random.default_rng(11)
        params = KernelParams(eta2=1.0, phi=0.5, nu=1.5, tau2=0.1)
        for trial in range(10):
            pts = gen.uniform(-3, 3, size=(5, 2))
            K = cov_matrix(pts, pts, params) + params.tau2 * np.eye(5)
            np.linalg.cholesky(K)  # raises if not PD

    def test_rectangular_shape(self):
        params = KernelParams(eta2=1.0, phi=1.0, nu=0.5)
        K = cov_matrix(np.zeros((3, 2)), np.ones((5, 2)), params)
        assert K.shape == (3, 5)


def test_as_locations_validation():
    with pytest.raises(ValueError):
        as_locations(np.array([[1.0, 2.0, 3.0]]))
    with pytest.raises(ValueError):
        as_locations(np.array([[np.nan, 0.0]]))
    assert as_locations((1.0, 2.0)).shape == (1, 2)


def test_jittered_cholesky_rescues_singular_psd():
    # rank-1 PSD matrix factors once jitter is applied
    v = np.array([[1.0], [2.0]])
    factor, _ = jittered_cholesky(v @ v.T, scale=1.0)
    L = np.tril(factor)
    assert np.allclose(L @ L.T, v @ v.T, atol=1e-5)
