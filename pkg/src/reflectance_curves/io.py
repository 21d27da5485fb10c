"""Text formats: reflectance curves, measured datasets, reports, matrix dumps."""

import csv
import io
import logging
import math

import numpy as np

from .colorimetry import GRID, ColorSystem, InvalidInputError, SrgbTriplet
from .harness import MeasuredSample, RmmReport, SweepReport

logger = logging.getLogger(__name__)

REFLECTANCE_HEADER = ["wavelength_nm", "reflectance"]
DATASET_HEADER = ["sample_id"] + [f"r{nm}" for nm in GRID.wavelengths]
SWEEP_HEADER = ["method", "run_count", "max_rho", "min_rho", "num_above_1",
                "num_below_0", "max_iter", "mean_iter", "non_converged"]
RMM_HEADER = ["method", "sample_id", "rmm"]
MATRIX_NAMES = ("M", "Aprime", "W", "T", "pinvT", "B12")


def fmt(x: float) -> str:
    """Six significant digits, trailing zeros kept."""
    return f"{x:#.6g}"


def parse_srgb(text: str) -> SrgbTriplet:
    """Parse ``"r,g,b"`` or ``"#RRGGBB"``."""
    text = text.strip()
    if text.startswith("#"):
        h = text[1:]
        if len(h) != 6:
            raise InvalidInputError(f"hex color {text!r} must have 6 digits")
        try:
            return SrgbTriplet.of([int(h[i:i + 2], 16) for i in (0, 2, 4)])
        except ValueError as exc:
            raise InvalidInputError(f"bad hex color {text!r}") from exc
    parts = text.split(",")
    try:
        vals = [int(p.strip()) for p in parts]
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse sRGB triplet {text!r}") from exc
    return SrgbTriplet.of(vals)


def format_reflectance(rho) -> str:
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (GRID.band_count,):
        raise InvalidInputError(f"curve has {rho.size} bands, expected {GRID.band_count}")
    lines = [",".join(REFLECTANCE_HEADER)]
    lines += [f"{nm},{fmt(v)}" for nm, v in zip(GRID.wavelengths, rho)]
    return "\n".join(lines) + "\n"


def parse_reflectance(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != REFLECTANCE_HEADER:
        raise InvalidInputError("missing 'wavelength_nm,reflectance' header")
    data = [r for r in rows[1:] if r]
    if len(data) != GRID.band_count:
        raise InvalidInputError(f"expected {GRID.band_count} rows, got {len(data)}")
    nms = [int(r[0]) for r in data]
    if nms != GRID.wavelengths.tolist():
        raise InvalidInputError("wavelengths must run 380..730 in steps of 10")
    rho = np.array([float(r[1]) for r in data])
    if not np.all(np.isfinite(rho)):
        raise InvalidInputError("non-finite reflectance")
    return rho


def read_dataset(stream) -> tuple[list[MeasuredSample], list[tuple[int, str]]]:
    """Read a measured-reflectance CSV.

    Returns the parsed samples and a list of ``(line_number, reason)`` for
    rows that were skipped. A wrong header is fatal.
    """
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != DATASET_HEADER:
        raise InvalidInputError("dataset header must be sample_id,r380,r390,...,r730")
    samples, skipped = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(DATASET_HEADER):
            skipped.append((lineno, f"expected {len(DATASET_HEADER)} columns, got {len(row)}"))
            continue
        try:
            rho = np.array([float(c) for c in row[1:]])
        except ValueError:
            skipped.append((lineno, "non-numeric reflectance"))
            continue
        if not np.all(np.isfinite(rho)):
            skipped.append((lineno, "non-finite reflectance"))
            continue
        samples.append(MeasuredSample(sample_id=row[0].strip(), rho_measured=rho))
    return samples, skipped


def write_dataset(stream, samples) -> None:
    stream.write(",".join(DATASET_HEADER) + "\n")
    for s in samples:
        stream.write(s.sample_id + "," + ",".join(fmt(v) for v in s.rho_measured) + "\n")


def sweep_rows(reports: list[SweepReport]) -> str:
    lines = [",".join(SWEEP_HEADER)]
    for r in sorted(reports, key=lambda r: r.method):
        mean = r.mean_iter
        lines.append(",".join([
            r.method, str(r.run_count), fmt(r.max_rho), fmt(r.min_rho),
            str(r.num_curves_above_1), str(r.num_curves_below_0), str(r.max_iter),
            "nan" if math.isnan(mean) else f"{mean:.4f}", str(r.non_converged),
        ]))
    return "\n".join(lines) + "\n"


def rmm_rows(report: RmmReport) -> str:
    lines = [",".join(RMM_HEADER)]
    lines += [f"{report.method},{sid},{fmt(v)}" for sid, v in report.per_sample]
    return "\n".join(lines) + "\n"


def matrix(name: str, sys: ColorSystem) -> np.ndarray:
    table = {"M": sys.M, "Aprime": sys.A_prime, "W": sys.W, "T": sys.T,
             "pinvT": sys.pinv_T, "B12": sys.B12}
    if name not in table:
        raise KeyError(f"unknown matrix {name!r}; choose from {', '.join(MATRIX_NAMES)}")
    return np.asarray(table[name])


def format_matrix(a) -> str:
    """Row-major CSV with no header; a vector is written one value per row."""
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    return "".join(",".join(fmt(v) for v in row) + "\n" for row in a)


def parse_matrix(text: str) -> np.ndarray:
    rows = [line.split(",") for line in text.splitlines() if line.strip()]
    return np.array([[float(v) for v in r] for r in rows])
