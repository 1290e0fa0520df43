"""Atomic-beam velocity filtering and cooling-temperature bookkeeping.

A thermal wavenumber distribution is pushed through the cavity point by
point; the sharply velocity-dependent transmission carves out a narrow
final distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import constants

from .channels import outside_channels
from .core import ModelParams
from .modes import discretize_mode, from_identifier
from .observables import DEFAULT_SEGMENTS, half_wave_resonances, probabilities
from .scattering import solve_mesa, solve_piecewise

DEFAULT_GRID_POINTS = 2000


@dataclass(frozen=True, eq=False)
class VelocityDistribution:
    """Wavenumber grid (k/kappa units) with non-negative weights."""

    grid: np.ndarray
    weights: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "weights", weights)
        if grid.ndim != 1 or grid.shape != weights.shape or grid.size == 0:
            raise ValueError("grid and weights must be matching non-empty 1-d arrays")
        if np.any(grid <= 0) or not np.all(np.isfinite(grid)):
            raise ValueError("grid wavenumbers must be positive and finite")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be non-negative and finite")
        if self.normalized:
            total = float(np.trapezoid(weights, grid))
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"claimed normalized but integral is {total}")

    def integral(self) -> float:
        return float(np.trapezoid(self.weights, self.grid))


def maxwell_boltzmann(k0_over_kappa: float, grid) -> VelocityDistribution:
    """Thermal speed density k^2 exp(-k^2/k0^2), trapezoid-normalized on
    the grid.  The continuous density peaks at the most probable
    wavenumber k0."""
    if k0_over_kappa <= 0:
        raise ValueError("k0_over_kappa must be positive")
    grid = np.asarray(grid, dtype=float)
    w = grid**2 * np.exp(-((grid / k0_over_kappa) ** 2))
    total = np.trapezoid(w, grid)
    if total <= 0:
        raise ValueError("grid does not support the distribution")
    return VelocityDistribution(grid, w / total, normalized=True)


def default_beam_grid(k0_over_kappa: float, params: ModelParams | None = None,
                      base_points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Grid over [k0/20, 4 k0], locally thickened around the predicted
    cavity resonances when the cavity parameters are known."""
    if k0_over_kappa <= 0:
        raise ValueError("k0_over_kappa must be positive")
    lo, hi = k0_over_kappa / 20.0, 4.0 * k0_over_kappa
    grid = np.linspace(lo, hi, base_points)
    if params is not None and params.kappa_L > 0:
        step = (hi - lo) / (base_points - 1)
        extras = []
        for seed in half_wave_resonances(params, "k_over_kappa", lo, hi):
            extras.append(np.linspace(seed - 5 * step, seed + 5 * step, 64))
        if extras:
            grid = np.unique(np.concatenate([grid, *extras]))
            grid = grid[(grid >= lo) & (grid <= hi)]
    return grid


def filter_distribution(dist: VelocityDistribution, params: ModelParams) -> VelocityDistribution:
    """Apply the cavity transmission pointwise: P_f(k) = P_i(k) T_total(k).

    The output is deliberately not renormalized; its scale is the
    absolute beam throughput.  Solver failures abort the filter.
    """
    profile = None
    if params.mode != "mesa":
        profile = discretize_mode(from_identifier(params.mode, params.kappa_L),
                                  DEFAULT_SEGMENTS)
    out = np.empty_like(dist.weights)
    for i, k in enumerate(dist.grid):
        point = replace(params, k_over_kappa=float(k))
        if params.mode == "mesa":
            amps = solve_mesa(point)
        else:
            amps = solve_piecewise(point, profile)
        probs = probabilities(amps, outside_channels(point))
        out[i] = dist.weights[i] * probs.T_total
    return VelocityDistribution(dist.grid.copy(), out, normalized=False)


def effective_temperature(k_b_over_kappa: float, g_hz: float, mass_kg: float) -> float:
    """Kelvin temperature of an atom slowed to k_b after one emission.

    The coupling wavenumber is restored to SI units from the coupling
    frequency and atomic mass, then T = hbar^2 k_b^2 / (2 m k_B).
    """
    if g_hz <= 0 or mass_kg <= 0:
        raise ValueError("g_hz and mass_kg must be positive")
    if k_b_over_kappa < 0:
        raise ValueError("k_b_over_kappa must be non-negative")
    hbar = constants.hbar
    kappa_si = math.sqrt(2.0 * mass_kg * (2.0 * math.pi * g_hz) * hbar) / hbar
    k_b_si = k_b_over_kappa * kappa_si
    return hbar**2 * k_b_si**2 / (2.0 * mass_kg * constants.k)
