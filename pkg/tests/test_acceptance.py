"""Acceptance criteria, one test per criterion.

Each test records PASS/FAIL (or SKIPPED) with the measured numbers; the
conftest terminal hook prints one line per criterion after the run. The
step-5 lattice sweeps are computed once per session and take a few minutes
on one core.
"""

import numpy as np
import pytest

import reference_tables as ref
import conftest
from reflectance_curves import io as rio
from reflectance_curves.colorimetry import (b12_closed_form, decode_gamma, encode_gamma,
                                            slope_matrix, system_from_transfer)
from reflectance_curves.harness import (compare_dataset, gamut_filter, luminous_weights, rmm,
                                        run_lattice)
from reflectance_curves.oracle import brute_force_oracle, toy_system
from reflectance_curves.solvers import (METHODS, solve_ilss, solve_illss, solve_llss,
                                        solve_llss_linear, solve_lss)

RUNS = 52 ** 3


def record(num, checks):
    """``checks`` maps a label to ``(ok, measured)``; records and asserts."""
    failed = [k for k, (ok, _) in checks.items() if not ok]
    detail = "; ".join(f"{k}={v}" for k, (_, v) in checks.items())
    conftest.ACCEPTANCE[num] = ("FAIL" if failed else "PASS", detail)
    print(f"criterion {num}: {'FAIL' if failed else 'PASS'}  {detail}")
    assert not failed, f"criterion {num} failed: {failed}"


def close(value, target, tol):
    shown = value if isinstance(value, int) else round(float(value), 6)
    return abs(value - target) <= tol, shown


def exact(value, target):
    return value == target, value


@pytest.fixture(scope="session")
def lattice(system):
    return {m: run_lattice(m, 5, system) for m in METHODS}


def sig6(x):
    return float(f"{x:.5e}")


def test_criterion_1_constants(system):
    T_ok = all(sig6(a) == sig6(b) for a, b in zip(system.T.ravel(), ref.T.ravel()))
    mism = sum(sig6(a) != sig6(b) for a, b in zip(system.T.ravel(), ref.T.ravel()))
    record(1, {
        "T_6sig_mismatches": (T_ok, mism),
        "pinvT_maxdiff": (np.max(np.abs(system.pinv_T - ref.PINV_T)) <= 5e-5,
                          f"{np.max(np.abs(system.pinv_T - ref.PINV_T)):.2e}"),
        "B12_maxdiff": (np.max(np.abs(system.B12 - ref.B12)) <= 5e-5,
                        f"{np.max(np.abs(system.B12 - ref.B12)):.2e}"),
        "w": close(system.w, 10.5677, 5e-5),
    })


def test_criterion_2_closed_form(system):
    d = float(np.max(np.abs(b12_closed_form(system) - system.B12)))
    record(2, {"B12_closed_vs_block": (d <= 1e-8, f"{d:.2e}")})


def test_criterion_3_sweep_statistics(lattice):
    r = {m: lattice[m].report for m in METHODS}
    record(3, {
        "runs": (all(x.run_count == RUNS for x in r.values()), r["lls"].run_count),
        "LLS_below0": exact(r["lls"].num_curves_below_0, 50_337),
        "LLS_above1": exact(r["lls"].num_curves_above_1, 26_317),
        "LSS_below0": exact(r["lss"].num_curves_below_0, 48_164),
        "LSS_above1": exact(r["lss"].num_curves_above_1, 9_316),
        "LLSS_above1": close(r["llss"].num_curves_above_1, 38_445, 20),
        "LLSS_max": close(r["llss"].max_rho, 3.09, 0.02),
        "LLS_max": close(r["lls"].max_rho, 1.36, 0.01),
        "LLS_min": close(r["lls"].min_rho, -0.28, 0.01),
        "LSS_max": close(r["lss"].max_rho, 1.17, 0.01),
        "LSS_min": close(r["lss"].min_rho, -0.17, 0.01),
        "ILSS_violations": exact(r["ilss"].num_curves_above_1 + r["ilss"].num_curves_below_0, 0),
        "ILLSS_violations": exact(r["illss"].num_curves_above_1
                                  + r["illss"].num_curves_below_0, 0),
    })


def test_criterion_4_iterations(lattice):
    r = {m: lattice[m].report for m in ("llss", "ilss", "illss")}
    record(4, {
        "LLSS_max": (r["llss"].max_iter <= 16, r["llss"].max_iter),
        "LLSS_mean": close(r["llss"].mean_iter, 6.77, 0.5),
        "ILSS_max": (r["ilss"].max_iter <= 5, r["ilss"].max_iter),
        "ILSS_mean": close(r["ilss"].mean_iter, 1.49, 0.1),
        "ILLSS_max": (r["illss"].max_iter <= 5, r["illss"].max_iter),
        "ILLSS_mean": close(r["illss"].mean_iter, 1.41, 0.1),
        "non_converged": exact(sum(x.non_converged for x in r.values()), 0),
    })


def test_criterion_5_regions(lattice):
    regions = lattice["llss"].report.regions_above_1
    record(5, {
        "one_region": close(regions.get(1, 0), 36_032, 20),
        "two_regions": close(regions.get(2, 0), 2_413, 20),
    })


def test_criterion_6_roundtrip(lattice):
    checks = sum(lattice[m].roundtrip_checks for m in METHODS)
    fails = sum(len(lattice[m].roundtrip_failures) + len(lattice[m].non_converged_inputs)
                for m in METHODS)
    record(6, {"matches": exact(checks - fails, 703_040), "failures": exact(fails, 0)})


def test_criterion_7_oracle():
    worst_lss = worst_llss = 0.0
    seeds = range(24)
    for seed in seeds:
        T, rho = toy_system(seed)
        rgb = T @ rho
        sys = system_from_transfer(T)
        worst_lss = max(worst_lss, np.max(np.abs(solve_lss(rgb, sys).rho
                                                 - brute_force_oracle(rgb, T))))
        ref = brute_force_oracle(rgb, T, "log_slope", start=rho)
        worst_llss = max(worst_llss, np.max(np.abs(solve_llss_linear(rgb, sys).rho - ref)))
    record(7, {
        "seeds": (len(seeds) >= 20, len(seeds)),
        "LSS_maxdiff": (worst_lss <= 1e-8, f"{worst_lss:.1e}"),
        "LLSS_maxdiff": (worst_llss <= 1e-6, f"{worst_llss:.1e}"),
    })


def test_criterion_8_properties(system):
    rng = np.random.default_rng(8)
    gamma = all(encode_gamma(decode_gamma((v, v, v))) == (v, v, v) for v in range(256))
    D = slope_matrix(36)
    tb12 = float(np.max(np.abs(system.T @ system.B12 - np.eye(3))))

    kkt = 0.0
    ranges = monotone = True
    for t in rng.integers(0, 256, size=(60, 3)):
        t = tuple(int(v) for v in t)
        out = solve_llss(t, system)
        if t != (0, 0, 0):
            A = out.rho[:, None] * system.T.T
            g = D @ np.log(out.rho)
            kkt = max(kkt, np.max(np.abs(g - A @ np.linalg.lstsq(A, g, rcond=None)[0])))
        for out, lo in ((solve_ilss(t, system), 1e-5), (solve_illss(t, system), 0.0)):
            ranges &= bool(np.all(out.rho >= lo) and np.all(out.rho <= 1.0))
            hist = out.fixed_history
            monotone &= all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(hist, hist[1:]))

    a, b, c = rng.uniform(-1, 1, (3, 36))
    w = luminous_weights(system)
    axioms = (rmm(a, a, w) == 0 and rmm(a, b, w) == rmm(b, a, w) and rmm(a, b, w) > 0
              and rmm(a, c, w) <= rmm(a, b, w) + rmm(b, c, w))

    one = run_lattice("illss", 51, system, threads=1)
    two = run_lattice("illss", 51, system, threads=2)
    record(8, {
        "gamma_roundtrip": (gamma, gamma),
        "D_nullspace": (bool(np.all(D.sum(axis=1) == 0)), True),
        "T_B12_eye": (tb12 < 1e-10, f"{tb12:.1e}"),
        "LLSS_kkt": (kkt < 1e-8, f"{kkt:.1e}"),
        "ranges": (ranges, ranges),
        "fixed_set_monotone": (monotone, monotone),
        "rmm_axioms": (axioms, axioms),
        "thread_determinism": (one.report == two.report, one.report == two.report),
    })


REFERENCE_RMM = {"lls": (0.88, 2.46), "lss": (0.17, 1.11), "ilss": (0.16, 1.04),
                 "llss": (0.15, 0.92), "illss": (0.15, 0.86)}


def test_criterion_9_munsell(system, munsell_csv):
    if munsell_csv is None:
        conftest.ACCEPTANCE[9] = ("SKIPPED", "Munsell 2007 glossy CSV not supplied "
                                  "(set MUNSELL_CSV or place tests/data/munsell_2007_glossy.csv)")
        pytest.skip("Munsell dataset not supplied")
    with open(munsell_csv, encoding="utf-8", newline="") as fh:
        samples, _ = rio.read_dataset(fh)
    split = gamut_filter(samples, system)
    checks = {"samples": exact(len(samples), 1485),
              "in_gamut": exact(len(split.in_gamut), 1296)}
    w = luminous_weights(system)
    for m, (mean, worst) in REFERENCE_RMM.items():
        rep = compare_dataset(split.in_gamut, m, w, system)
        checks[f"{m}_mean"] = close(rep.mean_rmm, mean, 0.05)
        checks[f"{m}_max"] = close(rep.max_rmm, worst, 0.15)
    record(9, checks)
