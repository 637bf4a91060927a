"""State construction: Gaussian packets, lattice-mode superpositions.

A SpectralState is one normalized wave function tied to a grid, a unit
system, and a dispersion branch. Values and coefficients are stored side
by side and must stay transform-consistent; construction enforces unit
norm (sum |psi|^2 dx = 1, equivalently L sum |a|^2 = 1) and an empty
Nyquist mode. States are immutable; evolution returns new ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .dispersion import DispersionKind
from .errors import BandwidthError, KindError
from .foundation import (
    Grid1D,
    UnitSystem,
    check_bandwidth,
    forward_transform,
    inverse_transform,
    state_norm,
)

_CONSISTENCY_TOL = 1e-10
_NORM_TOL = 1e-10
_UNITARITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralState:
    """Normalized wave function with paired spatial and spectral views."""

    grid: Grid1D
    units: UnitSystem
    kind: DispersionKind
    values: np.ndarray
    coefficients: np.ndarray
    time: float

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        coefficients = np.asarray(self.coefficients, dtype=np.complex128)
        if values.shape != (self.grid.n,) or coefficients.shape != (self.grid.n,):
            raise ValueError("values and coefficients must match the grid size")
        residual = np.linalg.norm(forward_transform(self.grid, values) - coefficients)
        scale = np.linalg.norm(coefficients)
        if scale == 0.0 or residual > _CONSISTENCY_TOL * scale:
            raise ValueError("values and coefficients are not transform-consistent")
        norm = state_norm(self.grid, values)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state norm must be 1, got {norm}")
        check_bandwidth(self.grid, coefficients)
        values.flags.writeable = False
        coefficients.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "time", float(self.time))

    @property
    def density_nonrel(self) -> np.ndarray:
        """The nonrelativistic density psi* psi."""
        return (self.values.real**2 + self.values.imag**2)


def from_coefficients(grid: Grid1D, units: UnitSystem, kind: DispersionKind,
                      coefficients: np.ndarray, time: float = 0.0) -> SpectralState:
    """Build a state from spectral coefficients (values derived)."""
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    return SpectralState(
        grid=grid, units=units, kind=kind,
        values=inverse_transform(grid, coefficients),
        coefficients=coefficients, time=time,
    )


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian packet parameters: center x0, carrier k0, width sigma."""

    x0: float
    k0: float
    sigma: float

    def __post_init__(self) -> None:
        for name in ("x0", "k0", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def validate_on(self, grid: Grid1D) -> None:
        """Support and bandwidth preconditions against a concrete grid."""
        if abs(self.x0) + 6.0 * self.sigma >= 0.5 * grid.length:
            raise BandwidthError(
                f"packet support |x0| + 6 sigma = {abs(self.x0) + 6 * self.sigma} "
                f"does not fit inside the box of length {grid.length}"
            )
        k_max = math.pi * grid.n / grid.length
        if abs(self.k0) + 2.0 / self.sigma >= k_max:
            raise BandwidthError(
                f"spectral support |k0| + 2/sigma = {abs(self.k0) + 2 / self.sigma} "
                f"reaches the grid bandwidth {k_max}"
            )


def gaussian_packet(spec: PacketSpec, grid: Grid1D, units: UnitSystem,
                    kind: DispersionKind) -> SpectralState:
    """Sampled Gaussian (1/(sqrt(2 pi) sigma))^{1/2} e^{-(x-x0)^2/4 sigma^2} e^{i k0 x}.

    The sampled profile is renormalized so the Riemann-sum norm is exactly
    one; for packets that satisfy the support rule the correction is at
    the rounding level.
    """
    spec.validate_on(grid)
    x = grid.points
    envelope = (2.0 * math.pi * spec.sigma**2) ** -0.25 \
        * np.exp(-((x - spec.x0) ** 2) / (4.0 * spec.sigma**2))
    values = envelope * np.exp(1j * spec.k0 * x)
    values = values / math.sqrt(state_norm(grid, values))
    return SpectralState(
        grid=grid, units=units, kind=kind,
        values=values, coefficients=forward_transform(grid, values), time=0.0,
    )


@dataclass(frozen=True)
class ModeSet:
    """Discrete plane-wave superposition: (amplitude, wavenumber) pairs.

    Amplitudes obey sum |a_j|^2 = 1 (unitarity) and wavenumbers must be
    distinct; whether each k sits on a concrete grid's lattice is checked
    at superposition time.
    """

    modes: Tuple[Tuple[complex, float], ...]

    def __init__(self, modes: Sequence[Tuple[complex, float]]) -> None:
        cleaned = []
        for amp, k in modes:
            amp = complex(amp)
            k = float(k)
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag) and math.isfinite(k)):
                raise ValueError("mode amplitudes and wavenumbers must be finite")
            cleaned.append((amp, k))
        if not cleaned:
            raise ValueError("a mode set needs at least one mode")
        ks = [k for _, k in cleaned]
        if len(set(ks)) != len(ks):
            raise ValueError("mode wavenumbers must be distinct")
        total = sum(abs(a) ** 2 for a, _ in cleaned)
        if abs(total - 1.0) > _UNITARITY_TOL:
            raise ValueError(
                f"mode amplitudes must satisfy sum |a|^2 = 1 (unitarity), got {total}"
            )
        object.__setattr__(self, "modes", tuple(cleaned))

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for a, _ in self.modes], dtype=np.complex128)

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.array([k for _, k in self.modes], dtype=np.float64)


def superposition(modes: ModeSet, grid: Grid1D, units: UnitSystem,
                  kind: DispersionKind) -> SpectralState:
    """State from lattice modes; box-normalized so a_j maps to a_j / sqrt(L).

    Every wavenumber must sit exactly on the grid lattice (BandwidthError
    otherwise), so the spectral array has one nonzero entry per mode.
    """
    coefficients = np.zeros(grid.n, dtype=np.complex128)
    root_l = math.sqrt(grid.length)
    seen = set()
    for amp, k in modes.modes:
        idx = grid.wavenumber_index(k)
        if idx in seen:
            raise ValueError("mode wavenumbers collide on the lattice")
        seen.add(idx)
        coefficients[idx] = amp / root_l
    return from_coefficients(grid, units, kind, coefficients, time=0.0)


def rest_phase_strip(state: SpectralState) -> SpectralState:
    """Remove the global rest phase e^{-i (m c^2/hbar) t} from a KG+ state.

    Returns a same-time snapshot suitable for direct comparison with a
    Schrodinger-evolved twin; do not evolve the result further (evolution
    would accumulate the rest phase again).
    """
    if state.kind is not DispersionKind.KLEIN_GORDON_POSITIVE:
        raise KindError("rest-phase stripping applies to positive-branch states only")
    phase = np.exp(1j * state.units.rest_omega * state.time)
    return SpectralState(
        grid=state.grid, units=state.units, kind=state.kind,
        values=state.values * phase,
        coefficients=state.coefficients * phase,
        time=state.time,
    )
