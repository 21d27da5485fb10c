"""Spectral grid, sRGB companding, and the precomputed linear operators.

A reflectance curve ``rho`` (36 bands) maps to linear rgb through

    rgb = T @ rho,    T = M @ A' @ diag(W) / w,

with ``w`` the luminance of a perfect reflector under ``W``. The companding
functions convert between linear rgb and 8-bit sRGB.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import constants

LINEAR_BREAK = 0.0031308
ENCODED_BREAK = 0.04045


class InvalidInputError(ValueError):
    """An sRGB triplet, rgb vector, or curve failed validation."""


class AssemblyError(ValueError):
    """The color system matrices could not be assembled."""


@dataclass(frozen=True)
class SpectralGrid:
    start_nm: int = 380
    end_nm: int = 730
    step_nm: int = 10

    @property
    def band_count(self) -> int:
        return (self.end_nm - self.start_nm) // self.step_nm + 1

    @property
    def wavelengths(self) -> np.ndarray:
        return np.arange(self.start_nm, self.end_nm + 1, self.step_nm)

    def wavelength(self, band: int) -> int:
        """Wavelength (nm) of a 1-based band index."""
        if not 1 <= band <= self.band_count:
            raise IndexError(f"band {band} outside 1..{self.band_count}")
        return self.start_nm + self.step_nm * (band - 1)


GRID = SpectralGrid()
N_BANDS = GRID.band_count


class SrgbTriplet(NamedTuple):
    r: int
    g: int
    b: int

    @classmethod
    def of(cls, values) -> "SrgbTriplet":
        """Validate a length-3 sequence of integers in [0, 255]."""
        vals = list(values) if not isinstance(values, np.ndarray) else values.tolist()
        if len(vals) != 3:
            raise InvalidInputError(f"expected 3 sRGB components, got {len(vals)}")
        out = []
        for v in vals:
            if isinstance(v, bool) or not float(v).is_integer():
                raise InvalidInputError(f"sRGB component {v!r} is not an integer")
            v = int(v)
            if not 0 <= v <= 255:
                raise InvalidInputError(f"sRGB component {v} outside [0, 255]")
            out.append(v)
        return cls(*out)


def decode_gamma(srgb) -> np.ndarray:
    """Convert an 8-bit sRGB triplet to linear rgb in [0, 1]."""
    s = np.asarray(SrgbTriplet.of(srgb), dtype=float) / 255.0
    return np.where(s < ENCODED_BREAK, s / 12.92, ((s + 0.055) / 1.055) ** 2.4)


def compand(rgb) -> np.ndarray:
    """Apply the sRGB transfer function without clamping or quantizing.

    Negative inputs follow the linear segment, so out-of-gamut colors stay
    outside [0, 1] and can be detected by the caller.
    """
    v = np.asarray(rgb, dtype=float)
    with np.errstate(invalid="ignore"):
        curved = 1.055 * np.abs(v) ** (1 / 2.4) - 0.055
    return np.where(v <= LINEAR_BREAK, 12.92 * v, curved)


def encode_gamma(rgb) -> SrgbTriplet:
    """Convert linear rgb to an 8-bit sRGB triplet.

    Components are clamped to [0, 1] before companding; rounding is half away
    from zero.
    """
    v = np.asarray(rgb, dtype=float)
    if v.shape != (3,):
        raise InvalidInputError(f"expected 3 linear rgb components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"non-finite linear rgb {v.tolist()}")
    s = compand(np.clip(v, 0.0, 1.0))
    return SrgbTriplet(*(int(x) for x in np.floor(s * 255.0 + 0.5)))


def slope_matrix(n: int) -> np.ndarray:
    """Tridiagonal Hessian of sum((x[i+1] - x[i])**2) for ``n`` samples."""
    d = np.diag(np.full(n, 4.0)) - 2.0 * np.eye(n, k=1) - 2.0 * np.eye(n, k=-1)
    d[0, 0] = d[-1, -1] = 2.0
    return d


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ColorSystem:
    """Immutable bundle of every matrix the solvers need.

    ``B11`` and ``B12`` are the upper blocks of ``inv([[D, T.T], [T, 0]])``;
    ``pinv_T`` is the minimum-norm right inverse ``T.T @ inv(T @ T.T)``.
    """

    M: np.ndarray
    A_prime: np.ndarray
    W: np.ndarray
    w: float
    T: np.ndarray
    D: np.ndarray
    B11: np.ndarray
    B12: np.ndarray
    pinv_T: np.ndarray
    n_bands: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n_bands", self.T.shape[1])

    def to_rgb(self, rho) -> np.ndarray:
        return self.T @ np.asarray(rho, dtype=float)


def block_inverse(T: np.ndarray, D: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (B11, B12) of the inverse of the bordered matrix [[D, T.T], [T, 0]]."""
    m, n = T.shape
    block = np.zeros((n + m, n + m))
    block[:n, :n] = D
    block[:n, n:] = T.T
    block[n:, :n] = T
    try:
        B = np.linalg.solve(block, np.eye(n + m))
    except np.linalg.LinAlgError as exc:
        raise AssemblyError("bordered slope/constraint matrix is singular") from exc
    return B[:n, :n], B[:n, n:]


def assemble_system(M=constants.M, A_prime=constants.A_PRIME,
                    W=constants.W_D65) -> ColorSystem:
    """Build a :class:`ColorSystem` from the observer, illuminant and rgb matrix."""
    M = np.asarray(M, dtype=float)
    A_prime = np.asarray(A_prime, dtype=float)
    W = np.asarray(W, dtype=float)
    if M.shape != (3, 3) or A_prime.ndim != 2 or A_prime.shape[0] != 3:
        raise AssemblyError(f"bad shapes M{M.shape}, A'{A_prime.shape}")
    n = A_prime.shape[1]
    if W.shape != (n,):
        raise AssemblyError(f"illuminant has shape {W.shape}, expected ({n},)")
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(A_prime)) and np.all(np.isfinite(W))):
        raise AssemblyError("non-finite input matrix")
    if np.any(W < 0):
        raise AssemblyError("illuminant has negative entries")

    w = float(A_prime[1] @ W)
    if not w > 0:
        raise AssemblyError(f"normalizer w = {w} is not positive")
    return _build(M, A_prime, W, w, M @ A_prime * W / w)


def system_from_transfer(T) -> ColorSystem:
    """Wrap an arbitrary 3 x n reflectance-to-rgb matrix as a color system.

    Used for small synthetic systems; the observer and illuminant fields are
    filled with ``T`` and ones so the algebra is unchanged.
    """
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] != 3 or T.shape[1] < 4:
        raise AssemblyError(f"transfer matrix must be 3 x n with n > 3, got {T.shape}")
    return _build(np.eye(3), T, np.ones(T.shape[1]), 1.0, T)


def _build(M, A_prime, W, w, T) -> ColorSystem:
    if np.linalg.matrix_rank(T) < 3:
        raise AssemblyError("T is not full row rank")
    if np.allclose(T.sum(axis=1), 0.0):
        raise AssemblyError("T annihilates constant curves; slope system is singular")
    D = slope_matrix(T.shape[1])
    B11, B12 = block_inverse(T, D)
    pinv_T = T.T @ np.linalg.solve(T @ T.T, np.eye(3))
    return ColorSystem(M=_frozen(M), A_prime=_frozen(A_prime), W=_frozen(W), w=w,
                       T=_frozen(T), D=_frozen(D), B11=_frozen(B11),
                       B12=_frozen(B12), pinv_T=_frozen(pinv_T))


def b12_closed_form(sys: ColorSystem) -> np.ndarray:
    """B12 from the explicit elimination formula, independent of the block inverse."""
    T, D = sys.T, sys.D
    P = T.T @ np.linalg.solve(T @ T.T, T)
    H = D.T @ D + T.T @ T - D.T @ P @ D
    return np.linalg.solve(H, T.T)


def reflectance_to_srgb(rho, sys: ColorSystem) -> SrgbTriplet:
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (sys.n_bands,) or not np.all(np.isfinite(rho)):
        raise InvalidInputError("reflectance must be a finite curve on the band grid")
    return encode_gamma(sys.T @ rho)


_default = None


def default_system() -> ColorSystem:
    """The sRGB/D65/CIE 1931 system, assembled once per process."""
    global _default
    if _default is None:
        _default = assemble_system()
    return _default
