"""Method comparison over the sRGB cube and against measured reflectances."""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .colorimetry import ColorSystem, InvalidInputError, SrgbTriplet, compand, encode_gamma
from .solvers import DEFAULT_OPTIONS, METHODS, SolverOptions, UnknownMethodError, solve

logger = logging.getLogger(__name__)

# Band values within this distance of 1 are clamp noise, not violations.
ABOVE_ONE_SLACK = 1e-12


def luminous_weights(sys: ColorSystem) -> np.ndarray:
    """Photopic luminous efficiency per band (the y-bar matching function)."""
    return np.array(sys.A_prime[1])


def rmm(measured, computed, weights) -> float:
    """Luminous-efficiency-weighted L1 distance between two curves."""
    measured = np.asarray(measured, dtype=float)
    computed = np.asarray(computed, dtype=float)
    return float(np.sum(np.asarray(weights) * np.abs(measured - computed)))


def count_regions_above(rho, level=1.0) -> int:
    """Number of maximal runs of consecutive bands strictly above ``level``."""
    above = np.concatenate([[False], np.asarray(rho) > level, [False]])
    return int(np.count_nonzero(above[1:] & ~above[:-1]))


def lattice_values(step: int) -> list[int]:
    if step < 1 or 255 % step:
        raise ValueError(f"step {step} must be a positive divisor of 255")
    return list(range(0, 256, step))


@dataclass
class MeasuredSample:
    sample_id: str
    rho_measured: np.ndarray
    srgb: SrgbTriplet | None = None
    in_gamut: bool | None = None

    def classify(self, sys: ColorSystem) -> "MeasuredSample":
        """Fill ``srgb`` and ``in_gamut`` from the measured curve."""
        rho = np.asarray(self.rho_measured, dtype=float)
        if rho.shape != (sys.n_bands,) or not np.all(np.isfinite(rho)):
            raise InvalidInputError(
                f"sample {self.sample_id!r}: need {sys.n_bands} finite reflectances")
        s = compand(sys.T @ rho)
        self.in_gamut = bool(np.all((s >= 0.0) & (s <= 1.0)))
        self.srgb = encode_gamma(sys.T @ rho)
        return self


class GamutSplit(NamedTuple):
    in_gamut: list
    out_of_gamut: list
    rejected: list  # (sample_id, reason)


def gamut_filter(samples, sys: ColorSystem) -> GamutSplit:
    split = GamutSplit([], [], [])
    for s in samples:
        try:
            s.classify(sys)
        except InvalidInputError as exc:
            split.rejected.append((s.sample_id, str(exc)))
            continue
        (split.in_gamut if s.in_gamut else split.out_of_gamut).append(s)
    return split


@dataclass
class SweepReport:
    method: str
    run_count: int = 0
    max_rho: float = -np.inf
    min_rho: float = np.inf
    num_curves_above_1: int = 0
    num_curves_below_0: int = 0
    max_iter: int = 0
    iter_sum: int = 0
    non_converged: int = 0
    # first-pass violations of the clipping methods, before any band is pinned
    pre_clamp_above_1: int = 0
    pre_clamp_below_0: int = 0
    # histogram: number of contiguous >1 regions -> number of curves
    regions_above_1: dict = field(default_factory=dict)

    @property
    def converged_count(self) -> int:
        return self.run_count - self.non_converged

    @property
    def mean_iter(self) -> float:
        n = self.converged_count
        return self.iter_sum / n if n else float("nan")

    def merge(self, other: "SweepReport") -> "SweepReport":
        if other.method != self.method:
            raise ValueError("cannot merge reports of different methods")
        regions = dict(self.regions_above_1)
        for k, v in other.regions_above_1.items():
            regions[k] = regions.get(k, 0) + v
        return SweepReport(
            method=self.method,
            run_count=self.run_count + other.run_count,
            max_rho=max(self.max_rho, other.max_rho),
            min_rho=min(self.min_rho, other.min_rho),
            num_curves_above_1=self.num_curves_above_1 + other.num_curves_above_1,
            num_curves_below_0=self.num_curves_below_0 + other.num_curves_below_0,
            max_iter=max(self.max_iter, other.max_iter),
            iter_sum=self.iter_sum + other.iter_sum,
            non_converged=self.non_converged + other.non_converged,
            pre_clamp_above_1=self.pre_clamp_above_1 + other.pre_clamp_above_1,
            pre_clamp_below_0=self.pre_clamp_below_0 + other.pre_clamp_below_0,
            regions_above_1=regions,
        )


@dataclass
class LatticeResult:
    report: SweepReport
    roundtrip_checks: int = 0
    roundtrip_failures: list = field(default_factory=list)  # (input, got)
    non_converged_inputs: list = field(default_factory=list)

    def merge(self, other: "LatticeResult") -> "LatticeResult":
        return LatticeResult(
            report=self.report.merge(other.report),
            roundtrip_checks=self.roundtrip_checks + other.roundtrip_checks,
            roundtrip_failures=sorted(self.roundtrip_failures + other.roundtrip_failures),
            non_converged_inputs=sorted(self.non_converged_inputs + other.non_converged_inputs),
        )


def iteration_count(method: str, outcome) -> int:
    """The iteration statistic reported per method: Newton iterations for
    ``llss``, constraint passes for the clipping methods, 0 otherwise."""
    if method == "llss":
        return outcome.inner_iterations
    if method in ("illss", "ilss"):
        return outcome.outer_iterations
    return 0


def _run_block(method, reds, values, sys, opts) -> LatticeResult:
    rep = SweepReport(method=method)
    res = LatticeResult(report=rep)
    for r in reds:
        for g in values:
            for b in values:
                srgb = SrgbTriplet(r, g, b)
                out = solve(method, srgb, sys, opts)
                rep.run_count += 1
                if not out.converged:
                    rep.non_converged += 1
                    res.non_converged_inputs.append(srgb)
                    continue
                rho = out.rho
                hi, lo = float(rho.max()), float(rho.min())
                rep.max_rho = max(rep.max_rho, hi)
                rep.min_rho = min(rep.min_rho, lo)
                if hi > 1.0 + ABOVE_ONE_SLACK:
                    rep.num_curves_above_1 += 1
                    k = count_regions_above(rho, 1.0 + ABOVE_ONE_SLACK)
                    rep.regions_above_1[k] = rep.regions_above_1.get(k, 0) + 1
                if lo < 0.0:
                    rep.num_curves_below_0 += 1
                first = out.unclamped if out.unclamped is not None else rho
                if first.max() > 1.0 + ABOVE_ONE_SLACK:
                    rep.pre_clamp_above_1 += 1
                if first.min() < 0.0:
                    rep.pre_clamp_below_0 += 1
                its = iteration_count(method, out)
                rep.max_iter = max(rep.max_iter, its)
                rep.iter_sum += its

                back = encode_gamma(sys.T @ rho)
                res.roundtrip_checks += 1
                if back != srgb:
                    res.roundtrip_failures.append((srgb, back))
    return res


def run_lattice(method: str, step: int, sys: ColorSystem,
                opts: SolverOptions = DEFAULT_OPTIONS, threads: int | None = None) -> LatticeResult:
    """Solve every triplet of the lattice {0, step, ..., 255}^3.

    Work is split by red value across ``threads`` worker processes (default:
    all cores). All aggregates are sums, counts or extrema, so the result
    does not depend on scheduling.
    """
    if method not in METHODS:
        raise UnknownMethodError(f"unknown method {method!r}")
    values = lattice_values(step)
    threads = threads or os.cpu_count() or 1
    if threads == 1 or len(values) == 1:
        total = _run_block(method, values, values, sys, opts)
    else:
        blocks = [values[i::threads] for i in range(threads)]
        blocks = [b for b in blocks if b]
        with ProcessPoolExecutor(max_workers=len(blocks)) as pool:
            parts = list(pool.map(_run_block, [method] * len(blocks), blocks,
                                  [values] * len(blocks), [sys] * len(blocks),
                                  [opts] * len(blocks)))
        total = parts[0]
        for p in parts[1:]:
            total = total.merge(p)
    total.roundtrip_failures.sort()
    total.non_converged_inputs.sort()
    logger.info("%s step %d: %d runs, %d non-converged", method, step,
                total.report.run_count, total.report.non_converged)
    return total


def sweep(method: str, step: int, sys: ColorSystem,
          opts: SolverOptions = DEFAULT_OPTIONS, threads: int | None = None) -> SweepReport:
    return run_lattice(method, step, sys, opts, threads).report


def roundtrip(method: str, step: int, sys: ColorSystem,
              opts: SolverOptions = DEFAULT_OPTIONS, threads: int | None = None) -> LatticeResult:
    return run_lattice(method, step, sys, opts, threads)


@dataclass
class RmmReport:
    method: str
    per_sample: list  # (sample_id, rmm)
    non_converged: list = field(default_factory=list)  # sample ids

    @property
    def max_rmm(self) -> float:
        return max((v for _, v in self.per_sample), default=float("nan"))

    @property
    def mean_rmm(self) -> float:
        if not self.per_sample:
            return float("nan")
        return float(np.mean([v for _, v in self.per_sample]))


def compare_dataset(samples, method: str, weights, sys: ColorSystem,
                    opts: SolverOptions = DEFAULT_OPTIONS) -> RmmReport:
    """Reconstruct each in-gamut sample from its 8-bit sRGB and score it."""
    if method not in METHODS:
        raise UnknownMethodError(f"unknown method {method!r}")
    report = RmmReport(method=method, per_sample=[])
    for s in samples:
        if s.srgb is None:
            s.classify(sys)
        out = solve(method, s.srgb, sys, opts)
        if not out.converged:
            report.non_converged.append(s.sample_id)
            continue
        report.per_sample.append((s.sample_id, rmm(s.rho_measured, out.rho, weights)))
    return report


__all__ = [
    "GamutSplit", "LatticeResult", "MeasuredSample", "RmmReport", "SweepReport",
    "compare_dataset", "count_regions_above", "gamut_filter", "lattice_values",
    "luminous_weights", "rmm", "roundtrip", "run_lattice", "sweep",
]
