"""Two-channel energetics: asymptotic wavenumbers and dressed segment bases.

The scattering problem couples the channels |a,n> (excited atom) and
|b,n+1> (ground atom, one photon more).  The energy zero sits at the |a,n>
asymptotic threshold, so the |b,n+1> threshold lies at +delta_over_g in
coupling units.  Inside a constant-u segment the 2x2 interaction matrix

    [[0, u*sqrt(n+1)], [u*sqrt(n+1), delta_over_g]]

is diagonalized by the dressed basis; its eigenvalues act as decoupled
scalar potentials for the centre-of-mass motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ModelParams


@dataclass(frozen=True)
class ChannelSpec:
    """Asymptotic (outside-cavity) kinematics of the two channels.

    The b channel is open when the incident kinetic energy exceeds the
    detuning step, i.e. (k/kappa)**2 > delta_over_g; it is closed
    (evanescent, decay constant q_b) otherwise.  Exact threshold is treated
    as closed with q_b = 0 and flagged degenerate.
    """

    k_a: float
    delta_over_g: float
    n_photons: int
    b_open: bool
    k_b: float = 0.0
    q_b: float = 0.0
    degenerate: bool = False

    @property
    def flux_ratio(self) -> float:
        """k_b/k_a for open b channels, 0 otherwise (no asymptotic b flux)."""
        return self.k_b / self.k_a if self.b_open else 0.0


def outside_channels(params: ModelParams) -> ChannelSpec:
    """Classify the b channel and compute its asymptotic wavenumber."""
    k = params.k_over_kappa
    gap = k * k - params.delta_over_g
    if gap > 0:
        return ChannelSpec(k, params.delta_over_g, params.n_photons,
                           b_open=True, k_b=math.sqrt(gap))
    if gap < 0:
        return ChannelSpec(k, params.delta_over_g, params.n_photons,
                           b_open=False, q_b=math.sqrt(-gap))
    return ChannelSpec(k, params.delta_over_g, params.n_photons,
                       b_open=False, q_b=0.0, degenerate=True)


def cooling_wavenumber(k_over_kappa: float, delta_over_g: float) -> float | None:
    """Wavenumber of the atom after photon emission, or None when blocked.

    A positive detuning removes kinetic energy from the emitting atom; when
    (k/kappa)**2 <= delta_over_g there is no energy left for the transition
    and emission cannot occur.
    """
    if k_over_kappa <= 0:
        raise ValueError("k_over_kappa must be positive")
    gap = k_over_kappa ** 2 - delta_over_g
    if gap <= 0:
        return None
    return math.sqrt(gap)


@dataclass(frozen=True, eq=False)
class SegmentEigensystem:
    """Dressed-basis data for one constant-u segment.

    eigenvalues[i], vectors[:, i] and wavenumbers[i] belong together; for
    u > 0 the order is (plus, minus), for u = 0 the bare channels are kept
    in channel order (a, b) so that amplitude extraction in the outside
    regions is basis-stable for either detuning sign.

    Local wavenumbers obey (k_i)**2 = (k/kappa)**2 - eigenvalues[i] with the
    branch fixed to non-negative real part, and non-negative imaginary part
    for negative arguments, so that exp(+i k z) always propagates or decays
    to the right.
    """

    lambda_plus: float
    lambda_minus: float
    mixing_angle: float
    eigenvalues: np.ndarray
    vectors: np.ndarray
    wavenumbers: np.ndarray


def _branch_wavenumber(energy_gap: float) -> complex:
    """sqrt with non-negative real part, non-negative imaginary for gaps < 0."""
    if energy_gap >= 0:
        return complex(math.sqrt(energy_gap), 0.0)
    return complex(0.0, math.sqrt(-energy_gap))


def segment_eigensystem(u: float, delta_over_g: float, n_photons: int,
                        k_over_kappa: float) -> SegmentEigensystem:
    """Diagonalize the segment interaction matrix and derive local wavenumbers."""
    if u < 0:
        raise ValueError("mode value u must be non-negative")
    eps = k_over_kappa ** 2
    delta = delta_over_g
    coupling = u * math.sqrt(n_photons + 1)

    if coupling == 0.0:
        eigenvalues = np.array([0.0, delta])
        vectors = np.eye(2)
        mixing_angle = 0.0
    else:
        half = 0.5 * delta
        root = math.hypot(half, coupling)
        lam_p = half + root
        lam_m = half - root
        # Eigenvector of [[0, c], [c, delta]] for eigenvalue lam is (c, lam).
        v_p = np.array([coupling, lam_p])
        v_m = np.array([coupling, lam_m])
        vectors = np.column_stack([v_p / np.linalg.norm(v_p),
                                   v_m / np.linalg.norm(v_m)])
        eigenvalues = np.array([lam_p, lam_m])
        # Rotation of the dressed basis away from the bare channels; zero for
        # vanishing coupling regardless of the detuning sign, pi/4 at resonance.
        mixing_angle = 0.5 * math.atan2(2.0 * coupling, abs(delta))

    wavenumbers = np.array([_branch_wavenumber(eps - lam) for lam in eigenvalues],
                           dtype=complex)
    return SegmentEigensystem(
        lambda_plus=float(np.max(eigenvalues)),
        lambda_minus=float(np.min(eigenvalues)),
        mixing_angle=mixing_angle,
        eigenvalues=eigenvalues,
        vectors=vectors,
        wavenumbers=wavenumbers,
    )
