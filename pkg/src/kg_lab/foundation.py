"""Units, periodic spatial grids, and the spectral transform pair.

The grid is a uniform periodic sampling of [-L/2, L/2) and the transform
convention is fixed once here: the forward transform carries the 1/n
factor and coefficients are amplitudes of plane waves e^{i k_j x} on the
*centered* grid,

    a_j = (1/n) sum_i psi(x_i) exp(-i k_j x_i),    x_0 = -L/2,

so a pure mode e^{i k_j x} transforms to a unit coefficient at index j.
Relative to raw FFT indexing this folds in an exact (-1)^j twist, which
squares to one and keeps the round trip bit-reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BandwidthError

# Valid states must keep the unmatched -n/2 mode empty to this fraction
# of the spectral norm; above it the state is not band-limited on this grid.
NYQUIST_TOLERANCE = 1e-10


@dataclass(frozen=True)
class UnitSystem:
    """Physical constants for one run: hbar, light speed c, and mass m."""

    hbar: float = 1.0
    c: float = 1.0
    m: float = 1.0

    def __post_init__(self) -> None:
        for name in ("hbar", "c", "m"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
            object.__setattr__(self, name, float(value))

    @property
    def rest_omega(self) -> float:
        """Rest angular frequency m c^2 / hbar, the positive-branch cutoff."""
        return self.m * self.c**2 / self.hbar

    @property
    def compton_wavenumber(self) -> float:
        """m c / hbar, the scale separating non- and ultra-relativistic k."""
        return self.m * self.c / self.hbar

    @classmethod
    def natural(cls, m: float = 1.0) -> "UnitSystem":
        return cls(hbar=1.0, c=1.0, m=m)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Uniform periodic grid and its DFT-conjugate wavenumber lattice."""

    n: int
    length: float
    points: np.ndarray = field(repr=False)
    wavenumbers: np.ndarray = field(repr=False)

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def nyquist_index(self) -> int:
        """Array position of the unmatched -n/2 mode."""
        return self.n // 2

    def wavenumber_index(self, k: float, tol: float = 1e-9) -> int:
        """Array position of lattice wavenumber k; BandwidthError off-lattice.

        k must sit on 2*pi*j/L to within tol*(1 + |k|); the Nyquist mode
        itself is rejected because valid states must leave it empty.
        """
        j = int(round(k * self.length / (2.0 * math.pi)))
        if not -self.n // 2 <= j <= self.n // 2 - 1:
            raise BandwidthError(f"wavenumber {k} lies outside the resolvable lattice")
        snapped = 2.0 * math.pi * j / self.length
        if abs(k - snapped) > tol * (1.0 + abs(k)):
            raise BandwidthError(
                f"wavenumber {k} is off-lattice (nearest lattice value {snapped!r}); "
                "address modes by integer index for exact placement"
            )
        if j == -self.n // 2:
            raise BandwidthError("the Nyquist mode -n/2 must stay empty in valid states")
        return j % self.n


def make_grid(n: int, length: float) -> Grid1D:
    """Build the n-point periodic grid on [-L/2, L/2).

    n must be a power of two, at least 8; length must be positive finite.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"n must be an integer, got {n!r}")
    if n < 8 or n & (n - 1) != 0:
        raise ValueError(f"n must be a power of two >= 8, got {n}")
    if not (isinstance(length, (int, float)) and math.isfinite(length) and length > 0):
        raise ValueError(f"length must be positive and finite, got {length!r}")
    length = float(length)
    dx = length / n
    points = -0.5 * length + dx * np.arange(n)
    # Signed DFT index order [0 .. n/2-1, -n/2 .. -1]; k_j = 2*pi*j/L exactly.
    signed = np.concatenate([np.arange(0, n // 2), np.arange(-(n // 2), 0)])
    wavenumbers = (2.0 * math.pi / length) * signed
    return Grid1D(n=n, length=length, points=_readonly(points), wavenumbers=_readonly(wavenumbers))


def _check_length(grid: Grid1D, arr: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(arr)
    if arr.shape != (grid.n,):
        raise ValueError(f"{name} must have shape ({grid.n},), got {arr.shape}")
    return arr.astype(np.complex128, copy=False)


def _twist(n: int) -> np.ndarray:
    # exp(-i k_j x_0) with x_0 = -L/2 is exactly (-1)^j, alternating in
    # array order because index parity matches signed-j parity for even n.
    t = np.ones(n)
    t[1::2] = -1.0
    return t


def forward_transform(grid: Grid1D, values: np.ndarray) -> np.ndarray:
    """Spatial samples -> centered-grid plane-wave coefficients (1/n norm)."""
    values = _check_length(grid, values, "values")
    return _twist(grid.n) * np.fft.fft(values) / grid.n


def inverse_transform(grid: Grid1D, coefficients: np.ndarray) -> np.ndarray:
    """Centered-grid plane-wave coefficients -> spatial samples."""
    coefficients = _check_length(grid, coefficients, "coefficients")
    return np.fft.ifft(_twist(grid.n) * coefficients) * grid.n


def spectral_derivative(grid: Grid1D, values: np.ndarray) -> np.ndarray:
    """d/dx on the grid via ik multiplication in spectral space.

    Real input returns the real part (the residue is rounding noise for
    band-limited fields); complex input stays complex.
    """
    was_real = not np.iscomplexobj(values)
    out = inverse_transform(grid, 1j * grid.wavenumbers * forward_transform(grid, values))
    return out.real if was_real else out


def state_norm(grid: Grid1D, values: np.ndarray) -> float:
    """Riemann-sum L2 norm squared of psi: sum |psi|^2 dx."""
    values = np.asarray(values)
    return float(np.sum(np.abs(values) ** 2).real * grid.dx)


def spectral_norm_sq(grid: Grid1D, coefficients: np.ndarray) -> float:
    """Parseval partner of state_norm under the 1/n convention: L sum |a|^2."""
    return float(grid.length * np.sum(np.abs(np.asarray(coefficients)) ** 2).real)


def nyquist_fraction(grid: Grid1D, coefficients: np.ndarray) -> float:
    """Amplitude fraction |a_{-n/2}| / ||a||_2 carried by the Nyquist mode."""
    coefficients = np.asarray(coefficients)
    total = float(np.linalg.norm(coefficients))
    if total == 0.0:
        return 0.0
    return float(abs(coefficients[grid.nyquist_index]) / total)


def check_bandwidth(grid: Grid1D, coefficients: np.ndarray) -> None:
    """Raise BandwidthError when the Nyquist mode carries real amplitude."""
    frac = nyquist_fraction(grid, coefficients)
    if frac > NYQUIST_TOLERANCE:
        raise BandwidthError(
            f"Nyquist mode carries {frac:.3e} of the spectral norm "
            f"(limit {NYQUIST_TOLERANCE:.0e}); the state is not band-limited on this grid"
        )
