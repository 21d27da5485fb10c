"""Projected-gradient reference solver for small synthetic systems.

Deliberately shares no linear algebra with :mod:`solvers`: it never forms the
bordered stationarity system. Feasibility is maintained through an SVD
null-space basis (slope objective) or a minimum-norm Gauss-Newton retraction
(log-slope objective), and descent takes fixed gradient steps.
"""

import numpy as np
from scipy.linalg import null_space


class OracleError(RuntimeError):
    pass


# The slope Hessian has spectral norm < 8, so this step never overshoots.
STEP = 1.0 / 8.0


def _slope_objective(x):
    d = np.diff(x)
    return float(d @ d)


def _slope_gradient(x):
    d = np.diff(x)
    g = np.zeros_like(x)
    g[:-1] -= 2 * d
    g[1:] += 2 * d
    return g


def _minimize_slope(T, rgb, start, tol, max_iter):
    N = null_space(T)
    x0 = np.zeros(T.shape[1]) if start is None else np.asarray(start, dtype=float)
    x0 = x0 + np.linalg.lstsq(T, rgb - T @ x0, rcond=None)[0]
    y = np.zeros(N.shape[1])
    for _ in range(max_iter):
        g = N.T @ _slope_gradient(x0 + N @ y)
        if np.max(np.abs(g)) < tol:
            return x0 + N @ y
        y = y - STEP * g
    raise OracleError(f"slope oracle did not reach {tol:g} in {max_iter} iterations")


def _retract(T, rgb, z, tol=1e-15, max_iter=100):
    """Pull ``z`` back onto {z : T exp(z) = rgb} by minimum-norm corrections."""
    for _ in range(max_iter):
        r = rgb - T @ np.exp(z)
        if np.max(np.abs(r)) < tol:
            return z
        J = T * np.exp(z)
        z = z + np.linalg.lstsq(J, r, rcond=None)[0]
    if np.max(np.abs(rgb - T @ np.exp(z))) < 1e-13:
        return z
    raise OracleError("retraction onto the color constraint failed")


def _minimize_log_slope(T, rgb, start, tol, max_iter):
    if start is None:
        raise OracleError("log-slope oracle needs a strictly positive feasible start curve")
    z = _retract(T, rgb, np.log(np.asarray(start, dtype=float)))
    step = STEP
    for _ in range(max_iter):
        J = T * np.exp(z)
        g = _slope_gradient(z)
        g = g - J.T @ np.linalg.lstsq(J.T, g, rcond=None)[0]
        if np.max(np.abs(g)) < tol:
            return z
        f = _slope_objective(z)
        while True:
            try:
                z_new = _retract(T, rgb, z - step * g)
            except OracleError:
                z_new = None
            # only guard against divergence; near the optimum f is flat to roundoff
            if z_new is not None and _slope_objective(z_new) <= f * (1 + 1e-12):
                break
            step *= 0.5
            if step < 1e-12:
                raise OracleError("log-slope oracle step collapsed")
        z = z_new
        step = min(2 * step, STEP)
    raise OracleError(f"log-slope oracle did not reach {tol:g} in {max_iter} iterations")


def brute_force_oracle(rgb_target, T, objective="slope", start=None,
                       tol=1e-12, max_iter=200_000) -> np.ndarray:
    """Minimize the slope (or log-slope) objective subject to ``T @ rho = rgb``.

    Parameters
    ----------
    rgb_target : array-like, shape (3,)
    T : array-like, shape (3, n)
        Full-row-rank transfer matrix, ``n`` small.
    objective : {"slope", "log_slope"}
    start : array-like, shape (n,), optional
        Feasible starting curve. Required (and must be positive) for
        ``log_slope``; the slope objective starts from the least-norm solution.
    tol : float
        Stationarity tolerance on the projected gradient (max-norm).

    Returns
    -------
    numpy.ndarray
        The minimizing curve ``rho`` (``exp(z)`` for ``log_slope``).
    """
    T = np.asarray(T, dtype=float)
    rgb = np.asarray(rgb_target, dtype=float)
    if T.ndim != 2 or T.shape[0] != 3 or np.linalg.matrix_rank(T) < 3:
        raise OracleError("T must be 3 x n with full row rank")
    if objective == "slope":
        return _minimize_slope(T, rgb, start, tol, max_iter)
    if objective == "log_slope":
        return np.exp(_minimize_log_slope(T, rgb, start, tol, max_iter))
    raise ValueError(f"unknown objective {objective!r}")


def toy_system(seed: int, n: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """A small colorimetric-like system and a feasible positive curve.

    Rows of ``T`` are Gaussian bumps with sorted centers (a short-, mid- and
    long-wavelength channel), each normalized to sum to 1 so the flat unit
    curve maps to white. Returns ``(T, rho)``; use ``T @ rho`` as the target.
    """
    rng = np.random.default_rng(seed)
    x = np.arange(n)
    centers = np.sort(rng.uniform(0, n - 1, 3))
    widths = rng.uniform(0.8, 2.0, 3)
    T = np.exp(-0.5 * ((x[None, :] - centers[:, None]) / widths[:, None]) ** 2)
    T /= T.sum(axis=1, keepdims=True)
    return T, rng.uniform(0.05, 0.95, n)
