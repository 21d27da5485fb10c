"""Command-line interface.

    reflectance-curves solve 75,255,255 --method illss
    reflectance-curves sweep --step 5 --methods all --report sweep.csv
    reflectance-curves rmm munsell.csv --method ilss --report rmm.csv
    reflectance-curves matrices B12
    reflectance-curves roundtrip --step 51 --method lss

Data goes to the output path (``-`` for stdout); diagnostics and progress go
to stderr.
"""

import argparse
import logging
import sys
import time

from . import io as rio
from .colorimetry import GRID, InvalidInputError, default_system
from .harness import compare_dataset, gamut_filter, luminous_weights, run_lattice
from .solvers import METHODS, solve

logger = logging.getLogger("reflectance_curves")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNKNOWN = 3
EXIT_NOT_CONVERGED = 4
EXIT_DATA = 5
EXIT_MISMATCH = 6
EXIT_IO = 7


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _write(path, text):
    try:
        if path == "-":
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


def _method(name):
    if name not in METHODS:
        raise CliError(f"unknown method {name!r}; choose from {', '.join(METHODS)}",
                       EXIT_UNKNOWN)
    return name


def _methods(spec):
    if spec == "all":
        return sorted(METHODS)
    return sorted({_method(m.strip()) for m in spec.split(",") if m.strip()})


def _step(step):
    if step < 1 or 255 % step:
        raise CliError(f"--step {step} must be a positive divisor of 255", EXIT_USAGE)
    return step


def _nm(bands):
    return [int(GRID.wavelengths[i]) for i in sorted(bands)]


def cmd_solve(args):
    try:
        srgb = rio.parse_srgb(args.srgb)
    except InvalidInputError as exc:
        raise CliError(str(exc), EXIT_USAGE) from exc
    method = _method(args.method)
    out = solve(method, srgb, default_system())
    print(f"method={method} srgb={srgb.r},{srgb.g},{srgb.b} converged={out.converged} "
          f"inner_iterations={out.inner_iterations} outer_iterations={out.outer_iterations} "
          f"fixed_at_one_nm={_nm(out.fixed_at_one)} fixed_at_min_nm={_nm(out.fixed_at_min)} "
          f"residual={out.residual:.3g}", file=sys.stderr)
    _write(args.output, rio.format_reflectance(out.rho))
    if not out.converged:
        raise CliError(f"not converged: {out.message}", EXIT_NOT_CONVERGED)
    return EXIT_OK


def cmd_sweep(args):
    methods = _methods(args.methods)
    step = _step(args.step)
    system = default_system()
    reports = []
    for m in methods:
        t0 = time.perf_counter()
        res = run_lattice(m, step, system, threads=args.threads)
        logger.info("sweep %s: %d runs in %.1fs", m, res.report.run_count,
                    time.perf_counter() - t0)
        reports.append(res.report)
    _write(args.report, rio.sweep_rows(reports))
    bad = sum(r.non_converged for r in reports)
    if bad:
        raise CliError(f"{bad} solves did not converge", EXIT_NOT_CONVERGED)
    return EXIT_OK


def cmd_rmm(args):
    method = _method(args.method)
    system = default_system()
    try:
        with open(args.dataset, encoding="utf-8", newline="") as fh:
            samples, skipped = rio.read_dataset(fh)
    except OSError as exc:
        raise CliError(f"cannot read {args.dataset}: {exc}", EXIT_IO) from exc
    except InvalidInputError as exc:
        raise CliError(str(exc), EXIT_DATA) from exc
    for lineno, reason in skipped:
        logger.warning("line %d skipped: %s", lineno, reason)
    if skipped:
        logger.warning("%d malformed rows skipped", len(skipped))

    split = gamut_filter(samples, system)
    for sid, reason in split.rejected:
        logger.warning("sample %s rejected: %s", sid, reason)
    logger.info("%d out-of-gamut samples: %s", len(split.out_of_gamut),
                ", ".join(s.sample_id for s in split.out_of_gamut))
    if not split.in_gamut:
        raise CliError("0 in-gamut samples", EXIT_DATA)

    report = compare_dataset(split.in_gamut, method, luminous_weights(system), system)
    _write(args.report, rio.rmm_rows(report))
    summary = f"max={report.max_rmm:.6g},mean={report.mean_rmm:.6g}"
    print(summary, file=sys.stderr if args.report == "-" else sys.stdout)
    if report.non_converged:
        raise CliError(f"{len(report.non_converged)} reconstructions did not converge: "
                       + ", ".join(report.non_converged), EXIT_NOT_CONVERGED)
    return EXIT_OK


def cmd_matrices(args):
    try:
        a = rio.matrix(args.name, default_system())
    except KeyError as exc:
        raise CliError(exc.args[0], EXIT_UNKNOWN) from exc
    _write(args.output, rio.format_matrix(a))
    return EXIT_OK


def cmd_roundtrip(args):
    method = _method(args.method)
    step = _step(args.step)
    res = run_lattice(method, step, default_system(), threads=args.threads)
    for srgb, got in res.roundtrip_failures:
        print(f"mismatch {srgb.r},{srgb.g},{srgb.b} -> {got.r},{got.g},{got.b}")
    for srgb in res.non_converged_inputs:
        print(f"not converged {srgb.r},{srgb.g},{srgb.b}")
    ok = not res.roundtrip_failures and not res.non_converged_inputs
    print(f"{'pass' if ok else 'FAIL'} method={method} step={step} "
          f"checks={res.roundtrip_checks} mismatches={len(res.roundtrip_failures)} "
          f"non_converged={len(res.non_converged_inputs)}")
    if res.non_converged_inputs:
        return EXIT_NOT_CONVERGED
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser():
    p = argparse.ArgumentParser(prog="reflectance-curves",
                                description="Reflectance curves from sRGB triplets.")
    p.add_argument("-q", "--quiet", action="store_true", help="only print warnings")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="reconstruct one curve")
    s.add_argument("srgb", help="'r,g,b' (0-255) or '#RRGGBB'")
    s.add_argument("--method", default="ilss", help=f"one of {', '.join(METHODS)}")
    s.add_argument("--output", "-o", default="-")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", help="statistics over the sRGB lattice")
    s.add_argument("--step", type=int, default=5)
    s.add_argument("--methods", default="all", help="comma-separated list or 'all'")
    s.add_argument("--report", default="-")
    s.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("rmm", help="score reconstructions against measured curves")
    s.add_argument("dataset")
    s.add_argument("--method", default="ilss")
    s.add_argument("--report", default="-")
    s.set_defaults(func=cmd_rmm)

    s = sub.add_parser("matrices", help="dump an assembled constant matrix")
    s.add_argument("name", help=", ".join(rio.MATRIX_NAMES))
    s.add_argument("--output", "-o", default="-")
    s.set_defaults(func=cmd_matrices)

    s = sub.add_parser("roundtrip", help="check sRGB -> curve -> sRGB over the lattice")
    s.add_argument("--step", type=int, default=5)
    s.add_argument("--method", default="ilss")
    s.add_argument("--threads", type=int, default=None)
    s.set_defaults(func=cmd_roundtrip)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
