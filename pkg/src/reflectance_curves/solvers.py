"""Reflectance reconstruction from a target color.

Five methods, all returning a curve ``rho`` with ``T @ rho == rgb``:

``lls``    minimum ``rho . rho`` (pseudo-inverse)
``lss``    minimum sum of squared slopes
``llss``   minimum sum of squared slopes of ``log(rho)``; rho > 0
``illss``  as ``llss`` with bands above 1 iteratively pinned to 1
``ilss``   as ``lss`` with bands pinned to 1 or to a small floor

The iterative methods take full Newton steps (no damping) and stop only when
every residual and every step component is below tolerance.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .colorimetry import ColorSystem, SrgbTriplet, decode_gamma

logger = logging.getLogger(__name__)

METHODS = ("lls", "lss", "llss", "illss", "ilss")


class UnknownMethodError(ValueError):
    pass


@dataclass(frozen=True)
class SolverOptions:
    ftol: float = 1e-8
    deltatol: float = 1e-8
    max_newton_iters: int = 100
    max_inner_iters: int = 50
    max_outer_iters: int = 10
    rho_min_illss: float = 0.0001
    rho_min_ilss: float = 0.00001

    def __post_init__(self):
        if not (self.ftol > 0 and self.deltatol > 0):
            raise ValueError("tolerances must be positive")
        if min(self.max_newton_iters, self.max_inner_iters, self.max_outer_iters) < 1:
            raise ValueError("iteration caps must be at least 1")
        if not (0 < self.rho_min_illss < 1 and 0 < self.rho_min_ilss < 1):
            raise ValueError("reflectance floors must lie in (0, 1)")


DEFAULT_OPTIONS = SolverOptions()


@dataclass
class SolveOutcome:
    """A reconstructed curve plus convergence telemetry.

    ``inner_iterations`` is the Newton iteration count summed over all passes,
    counted from 0 so that a start point which already satisfies the system
    reports 0. ``outer_iterations`` counts constraint-update passes (0 for
    direct methods and special cases). Band indices are 0-based. ``unclamped`` is
    the first-pass curve, before any band was pinned, for the iterative
    clipping methods; ``fixed_history`` holds the pinned sets
    ``(at_one, at_min)`` used in each pass.
    """

    rho: np.ndarray
    converged: bool = True
    inner_iterations: int = 0
    outer_iterations: int = 0
    fixed_at_one: frozenset = frozenset()
    fixed_at_min: frozenset = frozenset()
    residual: float = 0.0
    message: str = ""
    unclamped: np.ndarray | None = field(default=None, repr=False)
    fixed_history: list = field(default_factory=list, repr=False)


def _residual(rho, rgb, sys):
    return float(np.max(np.abs(sys.T @ rho - rgb)))


def solve_lls(rgb, sys: ColorSystem) -> SolveOutcome:
    rgb = np.asarray(rgb, dtype=float)
    rho = sys.pinv_T @ rgb
    return SolveOutcome(rho=rho, residual=_residual(rho, rgb, sys))


def solve_lss(rgb, sys: ColorSystem) -> SolveOutcome:
    rgb = np.asarray(rgb, dtype=float)
    rho = sys.B12 @ rgb
    return SolveOutcome(rho=rho, residual=_residual(rho, rgb, sys))


def _newton_log_slope(rgb, sys, fixed, max_iters, ftol, deltatol):
    """Newton iteration on the stationarity system of the log-slope problem.

    Unknowns are ``z = log(rho)``, the color multipliers ``lam`` and one
    multiplier per entry of ``fixed`` (bands held at ``z = 0``). Returns
    ``(z, converged, count)`` where ``count`` is the 0-based index of the step
    at which both tolerances were met (the final step only confirms).
    """
    T, D = sys.T, sys.D
    n = sys.n_bands
    fixed = np.asarray(sorted(fixed), dtype=int)
    m = fixed.size
    size = n + 3 + m

    z = np.zeros(n)
    lam = np.zeros(3)
    mu = np.zeros(m)
    J = np.zeros((size, size))
    if m:
        J[fixed, n + 3 + np.arange(m)] = 1.0
        J[n + 3 + np.arange(m), fixed] = 1.0
    F = np.empty(size)

    for count in range(max_iters):
        r = np.exp(z)
        v = -r * (T.T @ lam)
        Tr = T * r
        F[:n] = D @ z + v
        if m:
            F[fixed] += mu
        F[n:n + 3] = rgb - Tr.sum(axis=1)
        F[n + 3:] = z[fixed]

        J[:n, :n] = D
        J[np.arange(n), np.arange(n)] += v
        J[:n, n:n + 3] = -Tr.T
        J[n:n + 3, :n] = -Tr
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return z, False, count
        if not np.all(np.isfinite(delta)):
            return z, False, count

        z = z + delta[:n]
        lam = lam + delta[n:n + 3]
        mu = mu + delta[n + 3:]
        if np.all(np.abs(F) < ftol) and np.all(np.abs(delta) < deltatol):
            return z, True, count
    return z, False, max_iters


def solve_llss_linear(rgb, sys: ColorSystem,
                      opts: SolverOptions = DEFAULT_OPTIONS) -> SolveOutcome:
    """Log-slope reconstruction for a linear rgb target (no special cases)."""
    rgb = np.asarray(rgb, dtype=float)
    z, ok, its = _newton_log_slope(rgb, sys, (), opts.max_newton_iters,
                                     opts.ftol, opts.deltatol)
    rho = np.exp(z)
    msg = "" if ok else f"no Newton solution after {its} iterations"
    return SolveOutcome(rho=rho, converged=ok, inner_iterations=its,
                        residual=_residual(rho, rgb, sys), message=msg)


def solve_llss(srgb, sys: ColorSystem, opts: SolverOptions = DEFAULT_OPTIONS) -> SolveOutcome:
    srgb = SrgbTriplet.of(srgb)
    if srgb == (0, 0, 0):
        return SolveOutcome(rho=np.full(sys.n_bands, opts.rho_min_illss))
    return solve_llss_linear(decode_gamma(srgb), sys, opts)


def solve_illss(srgb, sys: ColorSystem, opts: SolverOptions = DEFAULT_OPTIONS) -> SolveOutcome:
    """Log-slope reconstruction with every band capped at 1.

    Each pass re-solves from ``z = 0`` with all bands that reached 1 in any
    earlier pass pinned there, until no band exceeds 1.
    """
    srgb = SrgbTriplet.of(srgb)
    n = sys.n_bands
    if srgb == (0, 0, 0):
        return SolveOutcome(rho=np.full(n, opts.rho_min_illss))
    if srgb == (255, 255, 255):
        return SolveOutcome(rho=np.ones(n))
    rgb = decode_gamma(srgb)

    fixed: set[int] = set()
    history = []
    rho = None
    first = None
    total_its = 0
    outer = 0
    while outer < opts.max_outer_iters:
        if rho is not None:
            fixed |= set(np.flatnonzero(rho >= 1.0).tolist())
        history.append((frozenset(fixed), frozenset()))
        z, ok, its = _newton_log_slope(rgb, sys, fixed, opts.max_inner_iters,
                                         opts.ftol, opts.deltatol)
        total_its += its
        outer += 1
        rho = np.exp(z)
        if fixed:
            rho[list(fixed)] = 1.0
        if first is None:
            first = rho.copy()
        if not ok:
            return SolveOutcome(
                rho=rho, converged=False, inner_iterations=total_its,
                outer_iterations=outer, fixed_at_one=frozenset(fixed),
                residual=_residual(rho, rgb, sys), unclamped=first, fixed_history=history,
                message=f"no inner Newton solution after {its} iterations (pass {outer})")
        if not np.any(rho > 1.0):
            return SolveOutcome(
                rho=rho, inner_iterations=total_its, outer_iterations=outer,
                fixed_at_one=frozenset(fixed), residual=_residual(rho, rgb, sys),
                unclamped=first, fixed_history=history)
    return SolveOutcome(
        rho=rho, converged=False, inner_iterations=total_its, outer_iterations=outer,
        fixed_at_one=frozenset(fixed), residual=_residual(rho, rgb, sys), unclamped=first,
        fixed_history=history, message=f"bands still above 1 after {outer} passes")


def solve_ilss(srgb, sys: ColorSystem, opts: SolverOptions = DEFAULT_OPTIONS) -> SolveOutcome:
    """Slope reconstruction with every band clipped to [rho_min_ilss, 1].

    Starts from the unconstrained solution ``R = B12 @ rgb`` and repeatedly
    pins out-of-range bands to their bound, using only an m x m solve per
    pass (m = number of pinned bands).
    """
    srgb = SrgbTriplet.of(srgb)
    n = sys.n_bands
    lo = opts.rho_min_ilss
    if srgb == (255, 255, 255):
        return SolveOutcome(rho=np.ones(n))
    if srgb == (0, 0, 0):
        return SolveOutcome(rho=np.full(n, lo))
    rgb = decode_gamma(srgb)

    R = sys.B12 @ rgb
    B11 = sys.B11
    rho = np.full(n, 0.5)
    upper: set[int] = set()
    lower: set[int] = set()
    history = []
    first = None
    count = 0

    def outcome(converged=True, message=""):
        return SolveOutcome(rho=rho, converged=converged, outer_iterations=count,
                            fixed_at_one=frozenset(upper), fixed_at_min=frozenset(lower),
                            residual=_residual(rho, rgb, sys), message=message,
                            unclamped=first, fixed_history=history)

    while count == 0 or (np.any(rho > 1.0) or np.any(rho < lo)):
        if count >= opts.max_outer_iters:
            return outcome(False, f"bands still outside [{lo}, 1] after {count} passes")
        upper |= set(np.flatnonzero(rho >= 1.0).tolist())
        lower |= set(np.flatnonzero(rho <= lo).tolist())
        if upper & lower:
            return outcome(False, f"bands {sorted(upper & lower)} pinned at both bounds")
        history.append((frozenset(upper), frozenset(lower)))
        up = np.array(sorted(upper), dtype=int)
        dn = np.array(sorted(lower), dtype=int)
        if up.size or dn.size:
            K = np.concatenate([up, dn])
            target = np.concatenate([np.ones(up.size), np.full(dn.size, lo)])
            BK = B11[:, K]
            try:
                corr = np.linalg.solve(BK[K, :], R[K] - target)
            except np.linalg.LinAlgError:
                return outcome(False, "singular pinned-band system")
            rho = R - BK @ corr
            rho[up] = 1.0
            rho[dn] = lo
        else:
            rho = R.copy()
        if first is None:
            first = rho.copy()
        count += 1
    return outcome()


def solve(method: str, srgb, sys: ColorSystem,
          opts: SolverOptions = DEFAULT_OPTIONS) -> SolveOutcome:
    """Reconstruct a curve for an 8-bit sRGB triplet with the named method."""
    if method == "lls":
        return solve_lls(decode_gamma(srgb), sys)
    if method == "lss":
        return solve_lss(decode_gamma(srgb), sys)
    if method == "llss":
        return solve_llss(srgb, sys, opts)
    if method == "illss":
        return solve_illss(srgb, sys, opts)
    if method == "ilss":
        return solve_ilss(srgb, sys, opts)
    raise UnknownMethodError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
