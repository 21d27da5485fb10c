import numpy as np
import numpy.testing as npt
import pytest

from reflectance_curves.colorimetry import system_from_transfer
from reflectance_curves.oracle import OracleError, brute_force_oracle, toy_system
from reflectance_curves.solvers import solve_llss_linear, solve_lss

SEEDS = range(24)


def test_toy_system_shape():
    T, rho = toy_system(3)
    assert T.shape == (3, 6)
    npt.assert_allclose(T.sum(axis=1), 1.0)
    assert np.all((rho > 0) & (rho < 1))
    npt.assert_array_equal(toy_system(3)[0], T)


def test_white_is_flat():
    T, _ = toy_system(0)
    rho = brute_force_oracle(np.ones(3), T)
    npt.assert_allclose(rho, 1.0, atol=1e-10)
    z = np.log(brute_force_oracle(np.ones(3), T, "log_slope", start=np.full(6, 0.5) + 0.5))
    npt.assert_allclose(z, 0.0, atol=1e-12)


def test_log_slope_needs_start():
    T, _ = toy_system(0)
    with pytest.raises(OracleError):
        brute_force_oracle(np.ones(3), T, "log_slope")


def test_rejects_rank_deficient():
    with pytest.raises(OracleError):
        brute_force_oracle(np.ones(3), np.ones((3, 6)))


def test_unknown_objective():
    T, _ = toy_system(0)
    with pytest.raises(ValueError):
        brute_force_oracle(np.ones(3), T, "curvature")


@pytest.mark.parametrize("seed", SEEDS)
def test_lss_matches_oracle(seed):
    T, rho = toy_system(seed)
    rgb = T @ rho
    sys = system_from_transfer(T)
    got = solve_lss(rgb, sys).rho
    npt.assert_allclose(got, brute_force_oracle(rgb, T), atol=1e-8)


@pytest.mark.parametrize("seed", SEEDS)
def test_llss_matches_oracle(seed):
    T, rho = toy_system(seed)
    rgb = T @ rho
    sys = system_from_transfer(T)
    out = solve_llss_linear(rgb, sys)
    assert out.converged
    ref = brute_force_oracle(rgb, T, "log_slope", start=rho)
    npt.assert_allclose(np.log(out.rho), np.log(ref), atol=1e-6)
