"""Dispersion relations and Lorentz-factor statistics.

Three branches are supported: the positive Klein-Gordon branch
omega = +sqrt(c^2 k^2 + (m c^2/hbar)^2), its sign-flipped negative twin,
and the Schrodinger relation omega = hbar k^2 / 2m. The negative branch
exists only so its pathologies can be demonstrated; every API that treats
a state as physical rejects it, and the one sanctioned way to request it
is `unphysical_negative_branch()`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple, Union

import numpy as np

from .errors import BranchError, KindError
from .foundation import UnitSystem

if TYPE_CHECKING:  # pragma: no cover
    from .states import SpectralState

ArrayOrFloat = Union[float, np.ndarray]

# Relative gamma spread above which amended observables carry a validity
# warning: the single-gamma replacement m -> gamma*m is only as good as the
# packet is monochromatic.
DEFAULT_GAMMA_SPREAD_TOL = 0.01


class DispersionKind(enum.Enum):
    KLEIN_GORDON_POSITIVE = "kg+"
    KLEIN_GORDON_NEGATIVE = "kg-"
    SCHRODINGER = "schrodinger"


def unphysical_negative_branch() -> DispersionKind:
    """Explicit gateway to the negative-frequency branch.

    The branch is fine for demonstrating sign pathologies of the density
    but carries no physical states; request it only through this function
    so the intent is visible at the call site.
    """
    return DispersionKind.KLEIN_GORDON_NEGATIVE


def omega(kind: DispersionKind, k: ArrayOrFloat, units: UnitSystem) -> ArrayOrFloat:
    """Angular frequency of mode k under the given dispersion branch."""
    karr = np.asarray(k, dtype=np.float64)
    if kind is DispersionKind.SCHRODINGER:
        out = units.hbar * karr**2 / (2.0 * units.m)
    else:
        out = np.sqrt((units.c * karr) ** 2 + units.rest_omega**2)
        if kind is DispersionKind.KLEIN_GORDON_NEGATIVE:
            out = -out
    return float(out) if np.isscalar(k) else out


def group_velocity(kind: DispersionKind, k: ArrayOrFloat, units: UnitSystem) -> ArrayOrFloat:
    """d omega / d k. Rejects the negative branch: it has no physical packets."""
    if kind is DispersionKind.KLEIN_GORDON_NEGATIVE:
        raise BranchError("group velocity is defined only on the physical branches")
    karr = np.asarray(k, dtype=np.float64)
    if kind is DispersionKind.SCHRODINGER:
        out = units.hbar * karr / units.m
    else:
        out = units.c**2 * karr / omega(DispersionKind.KLEIN_GORDON_POSITIVE, karr, units)
    return float(out) if np.isscalar(k) else out


@dataclass(frozen=True)
class ModeFrequency:
    """A (k, omega) pair consistent with one dispersion branch."""

    kind: DispersionKind
    k: float
    omega: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.k) and math.isfinite(self.omega)):
            raise ValueError("k and omega must be finite")


def mode_frequency(kind: DispersionKind, k: float, units: UnitSystem) -> ModeFrequency:
    return ModeFrequency(kind=kind, k=float(k), omega=float(omega(kind, float(k), units)))


def gamma_of_omega(omega_value: ArrayOrFloat, units: UnitSystem) -> ArrayOrFloat:
    """Lorentz factor hbar*omega / (m c^2) of a positive-branch frequency.

    Frequencies below the rest frequency have no Lorentz factor; they are
    rejected rather than clamped. A hair of rounding slack is allowed so
    omega(k=0) itself always passes.
    """
    w = np.asarray(omega_value, dtype=np.float64)
    cutoff = units.rest_omega
    if np.any(w < cutoff * (1.0 - 1e-12)):
        bad = float(np.min(w))
        raise ValueError(
            f"omega {bad} is below the rest frequency {cutoff}; "
            "the Lorentz factor is defined on the positive branch only"
        )
    out = units.hbar * w / (units.m * units.c**2)
    return float(out) if np.isscalar(omega_value) else out


class GammaStats(NamedTuple):
    """Spectral-weighted Lorentz factor and its spread over a state."""

    gamma_bar: float
    gamma_spread: float

    @property
    def relative_spread(self) -> float:
        return self.gamma_spread / self.gamma_bar


def gamma_of_state(state: "SpectralState") -> GammaStats:
    """Weighted mean and standard deviation of gamma over |a_j|^2 weights.

    Only positive-branch Klein-Gordon states carry a Lorentz factor.
    """
    if state.kind is not DispersionKind.KLEIN_GORDON_POSITIVE:
        raise KindError("gamma statistics require a positive-branch Klein-Gordon state")
    weights = np.abs(state.coefficients) ** 2
    total = weights.sum()
    if total <= 0.0:
        raise ValueError("state carries no spectral weight")
    weights = weights / total
    gam = gamma_of_omega(
        omega(DispersionKind.KLEIN_GORDON_POSITIVE, state.grid.wavenumbers, state.units),
        state.units,
    )
    gamma_bar = float(np.sum(weights * gam))
    gamma_spread = float(math.sqrt(max(0.0, float(np.sum(weights * (gam - gamma_bar) ** 2)))))
    return GammaStats(gamma_bar=gamma_bar, gamma_spread=gamma_spread)
