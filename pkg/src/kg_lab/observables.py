"""Densities, currents, amended fields, continuity, and moments.

Two densities coexist for a relativistic state: the nonrelativistic
psi* psi and the conserved bilinear

    rho = (-hbar / 2 i m c^2) (psi* dpsi/dt - psi dpsi*/dt),

which weights each mode by hbar*omega/(m c^2) and is therefore not
positive definite for superpositions. The amended pair divides both the
density and the standard current by the spectral-mean Lorentz factor,
restoring psi* psi for narrow spectra while keeping the continuity
equation intact (the rescaling is a constant).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .dispersion import (
    DEFAULT_GAMMA_SPREAD_TOL,
    DispersionKind,
    gamma_of_state,
    omega,
)
from .foundation import Grid1D, UnitSystem, spectral_derivative
from .propagation import EvolutionResult
from .states import ModeSet

_IMAG_RESIDUE_TOL = 1e-12


def _real_part(z: np.ndarray, what: str) -> np.ndarray:
    """Drop the imaginary residue of an analytically real field, loudly."""
    worst = float(np.max(np.abs(z.imag))) if z.size else 0.0
    scale = max(1.0, float(np.max(np.abs(z.real))) if z.size else 0.0)
    if worst > _IMAG_RESIDUE_TOL * scale:
        raise AssertionError(f"{what} has imaginary residue {worst:.3e}; expected real")
    return np.ascontiguousarray(z.real)


def density_kg(psi: np.ndarray, dpsi_dt: np.ndarray, units: UnitSystem) -> np.ndarray:
    """Conserved Klein-Gordon density; the formula is branch-agnostic."""
    prefactor = -units.hbar / (2j * units.m * units.c**2)
    z = prefactor * (np.conj(psi) * dpsi_dt - psi * np.conj(dpsi_dt))
    return _real_part(z, "density")


def current_std(psi: np.ndarray, dpsi_dx: np.ndarray, units: UnitSystem) -> np.ndarray:
    """Standard probability current, shared by both wave equations."""
    prefactor = units.hbar / (2j * units.m)
    z = prefactor * (np.conj(psi) * dpsi_dx - psi * np.conj(dpsi_dx))
    return _real_part(z, "current")


def amended_fields(psi: np.ndarray, dpsi_dt: np.ndarray, dpsi_dx: np.ndarray,
                   gamma_bar: float, units: UnitSystem) -> tuple[np.ndarray, np.ndarray]:
    """Density and current rescaled by 1/gamma_bar (effective mass gamma*m)."""
    if not (math.isfinite(gamma_bar) and gamma_bar >= 1.0 - 1e-12):
        raise ValueError(f"gamma_bar must be a Lorentz factor >= 1, got {gamma_bar}")
    rho = density_kg(psi, dpsi_dt, units) / gamma_bar
    current = current_std(psi, dpsi_dx, units) / gamma_bar
    return rho, current


@dataclass(frozen=True, eq=False)
class DensityCurrentFields:
    """Every density/current variant for one state at one time.

    For states without a Lorentz factor (Schrodinger, negative branch) the
    amended arrays and gamma statistics are NaN and the flag is set: the
    amended construction simply does not apply there.
    """

    rho_nonrel: np.ndarray
    rho_kg: np.ndarray
    rho_amended: np.ndarray
    j_std: np.ndarray
    j_amended: np.ndarray
    gamma_bar: float
    gamma_spread: float
    gamma_spread_flag: bool


def compute_fields(result: EvolutionResult,
                   spread_tol: float = DEFAULT_GAMMA_SPREAD_TOL) -> DensityCurrentFields:
    """Assemble all density/current fields for an evolved state."""
    state = result.state
    rho_nonrel = state.density_nonrel
    rho_kg = density_kg(state.values, result.dpsi_dt, state.units)
    j_std = current_std(state.values, result.dpsi_dx, state.units)
    if state.kind is DispersionKind.KLEIN_GORDON_POSITIVE:
        stats = gamma_of_state(state)
        rho_amended, j_amended = amended_fields(
            state.values, result.dpsi_dt, result.dpsi_dx, stats.gamma_bar, state.units
        )
        gamma_bar, gamma_spread = stats.gamma_bar, stats.gamma_spread
        flag = stats.relative_spread > spread_tol
    else:
        rho_amended = np.full(state.grid.n, math.nan)
        j_amended = np.full(state.grid.n, math.nan)
        gamma_bar = gamma_spread = math.nan
        flag = True
    return DensityCurrentFields(
        rho_nonrel=rho_nonrel, rho_kg=rho_kg, rho_amended=rho_amended,
        j_std=j_std, j_amended=j_amended,
        gamma_bar=gamma_bar, gamma_spread=gamma_spread, gamma_spread_flag=flag,
    )


def continuity_residual(rho_before: np.ndarray, rho_after: np.ndarray,
                        current: np.ndarray, dt: float, grid: Grid1D) -> float:
    """Dimensionless continuity defect max|drho/dt + dj/dx| * L / max|j|.

    The time derivative is a centered difference of two exactly evolved
    density snapshots at t -/+ dt (the only discretization anywhere, with
    quadratic dt convergence); the space derivative is spectral.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    drho_dt = (np.asarray(rho_after, dtype=np.float64)
               - np.asarray(rho_before, dtype=np.float64)) / (2.0 * dt)
    dj_dx = spectral_derivative(grid, np.asarray(current, dtype=np.float64))
    defect = float(np.max(np.abs(drho_dt + dj_dx)))
    scale = float(np.max(np.abs(current)))
    if scale == 0.0:
        return 0.0 if defect == 0.0 else math.inf
    return defect * grid.length / scale


class SuperpositionDensity(NamedTuple):
    """Amplitude-space density profile with its grid minimum."""

    rho: np.ndarray
    minimum: float
    argmin_x: float


def superposition_density(modes: ModeSet, t: float, grid: Grid1D,
                          units: UnitSystem) -> SuperpositionDensity:
    """Density of a lattice superposition evaluated directly in amplitude space:

        rho(x) = (hbar / m c^2) [ sum_j omega_j |A_j|^2
                 + sum_{j<l} (omega_j + omega_l) Re(A_j A_l* e^{i phi_jl}) ]

    with A_j = a_j / sqrt(L) and phi_jl the full phase difference between
    the modes at (x, t). No transform is involved, which makes this an
    independent cross-check of density_kg on the same state; the two agree
    elementwise to rounding. The positive branch supplies every omega.
    """
    ks = modes.wavenumbers
    for k in ks:
        grid.wavenumber_index(float(k))  # off-lattice modes cannot be cross-checked
    amps = modes.amplitudes / math.sqrt(grid.length)
    omegas = omega(DispersionKind.KLEIN_GORDON_POSITIVE, ks, units)
    bracket = _kernels.pair_density(amps, ks, np.asarray(omegas), grid.points, float(t))
    rho = (units.hbar / (units.m * units.c**2)) * bracket
    idx = int(np.argmin(rho))
    return SuperpositionDensity(rho=rho, minimum=float(rho[idx]), argmin_x=float(grid.points[idx]))


@dataclass(frozen=True)
class TwoModeSpec:
    """Two-mode interference configuration in amplitude space."""

    a1: complex
    a2: complex
    omega1: float
    omega2: float

    def __post_init__(self) -> None:
        a1, a2 = complex(self.a1), complex(self.a2)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        if not all(map(math.isfinite, (a1.real, a1.imag, a2.real, a2.imag,
                                       self.omega1, self.omega2))):
            raise ValueError("two-mode parameters must be finite")
        total = abs(a1) ** 2 + abs(a2) ** 2
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"amplitudes must satisfy |a1|^2 + |a2|^2 = 1, got {total}")


def _check_two_mode_omegas(spec: TwoModeSpec, units: UnitSystem) -> None:
    cutoff = units.rest_omega * (1.0 - 1e-12)
    if spec.omega1 < cutoff or spec.omega2 < cutoff:
        raise ValueError("two-mode frequencies must sit on or above the rest frequency")


def two_mode_min_density(spec: TwoModeSpec, units: UnitSystem) -> float:
    """Closed-form minimum of the two-mode density over relative phase:

        (hbar / m c^2) [omega1 |a1|^2 + omega2 |a2|^2 - (omega1 + omega2)|a1 a2|]

    attained at cos(phase) = -1. With r = |a1| / |a2| the bracket factors as
    (r - 1)(omega1 r - omega2) |a2|^2, so the minimum is zero for equal
    magnitudes and strictly negative exactly when r lies between 1 and
    omega2 / omega1.
    """
    _check_two_mode_omegas(spec, units)
    p1, p2 = abs(spec.a1) ** 2, abs(spec.a2) ** 2
    cross = abs(spec.a1) * abs(spec.a2)
    bracket = spec.omega1 * p1 + spec.omega2 * p2 - (spec.omega1 + spec.omega2) * cross
    return units.hbar / (units.m * units.c**2) * bracket


def two_mode_density_of_phase(spec: TwoModeSpec, units: UnitSystem,
                              phase: np.ndarray) -> np.ndarray:
    """Two-mode density as a function of the relative phase (amplitude space)."""
    _check_two_mode_omegas(spec, units)
    p1, p2 = abs(spec.a1) ** 2, abs(spec.a2) ** 2
    cross = abs(spec.a1) * abs(spec.a2)
    bracket = (spec.omega1 * p1 + spec.omega2 * p2
               + (spec.omega1 + spec.omega2) * cross * np.cos(np.asarray(phase)))
    return units.hbar / (units.m * units.c**2) * bracket


class Moments(NamedTuple):
    norm: float
    centroid: float
    variance: float


# When more than this fraction of the mass sits in the outer 5% of the box
# the plain first moment is wrap-biased and the circular mean takes over.
_EDGE_BAND = 0.05
_EDGE_MASS_SWITCH = 1e-9


def moments(rho: np.ndarray, grid: Grid1D) -> Moments:
    """Riemann-sum norm, centroid, and variance of a density profile.

    Near the periodic boundary the centroid switches to a circular mean
    (phase of the first Fourier moment) and displacements wrap to the
    minimal image, so a packet crossing the seam keeps a smooth track.
    """
    rho = np.asarray(rho, dtype=np.float64)
    if rho.shape != (grid.n,):
        raise ValueError(f"rho must have shape ({grid.n},), got {rho.shape}")
    mass = float(rho.sum())
    norm = mass * grid.dx
    if not (math.isfinite(norm) and norm > 0.0):
        raise ValueError(f"density must integrate to a positive value, got {norm}")
    weights = rho / mass
    x = grid.points
    edge = max(1, int(round(_EDGE_BAND * grid.n)))
    edge_mass = float(np.abs(weights[:edge]).sum() + np.abs(weights[-edge:]).sum())
    if edge_mass > _EDGE_MASS_SWITCH:
        angles = 2.0 * math.pi * (x + 0.5 * grid.length) / grid.length
        z = complex(np.sum(weights * np.exp(1j * angles)))
        angle = math.atan2(z.imag, z.real) % (2.0 * math.pi)
        centroid = -0.5 * grid.length + grid.length * angle / (2.0 * math.pi)
        disp = np.mod(x - centroid + 0.5 * grid.length, grid.length) - 0.5 * grid.length
    else:
        centroid = float(np.sum(weights * x))
        disp = x - centroid
    variance = float(np.sum(weights * disp**2))
    return Moments(norm=norm, centroid=centroid, variance=variance)
