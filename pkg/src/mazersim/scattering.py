"""Stationary two-channel scattering across a piecewise-constant profile.

The solver composes scattering matrices with the Redheffer star product
instead of multiplying transfer matrices.  Transfer matrices carry exp(+q l)
factors for evanescent modes and overflow long before kappa_L ~ 1e5; the
S-matrix form only ever contains decaying exponentials, so arbitrarily long
interaction regions stay finite.

Conventions: 2 channels x 2 sides.  A 4x4 S-matrix maps incoming amplitudes
(in_left, in_right) to outgoing ones (out_left, out_right) in block form

    [[r, tp], [t, rp]]

where r reflects left input back to the left, t transmits it to the right,
and rp/tp act on right input.  Amplitudes live in the local eigenbasis of
the adjoining regions; transmission amplitudes are referenced to the region
faces (left face for r, right face for t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import segment_eigensystem, SegmentEigensystem
from .core import ModelParams
from .modes import ModeProfile

_THRESHOLD_TOL = 1e-12


class SolverError(Exception):
    """Base class for scattering-solver failures."""


class DegenerateThresholdError(SolverError):
    """A channel sits exactly at threshold; the mode basis is degenerate."""


class CompositionError(SolverError):
    """Star-product composition hit a numerically singular internal block."""

    def __init__(self, message: str, condition_estimate: float = float("inf")):
        super().__init__(message)
        self.condition_estimate = condition_estimate


@dataclass(frozen=True, eq=False)
class ScatteringAmplitudes:
    """Complex outcome amplitudes for a unit-amplitude incident |a,n> wave."""

    r_a: complex
    t_a: complex
    r_b: complex
    t_b: complex


@dataclass(frozen=True, eq=False)
class SMatrix:
    """4x4 scattering matrix in [[r, tp], [t, rp]] block layout."""

    matrix: np.ndarray

    @property
    def r(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def t(self) -> np.ndarray:
        return self.matrix[2:, :2]

    @property
    def rp(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    @property
    def tp(self) -> np.ndarray:
        return self.matrix[:2, 2:]

    @staticmethod
    def from_blocks(r, t, rp, tp) -> "SMatrix":
        m = np.empty((4, 4), dtype=complex)
        m[:2, :2] = r
        m[2:, :2] = t
        m[2:, 2:] = rp
        m[:2, 2:] = tp
        return SMatrix(m)

    @staticmethod
    def identity() -> "SMatrix":
        """Neutral element of the star product: full transmission, no reflection."""
        eye = np.eye(2, dtype=complex)
        zero = np.zeros((2, 2), dtype=complex)
        return SMatrix.from_blocks(zero, eye, zero, eye)


def propagation_smatrix(eigensystem: SegmentEigensystem, length: float) -> SMatrix:
    """Free flight across one segment in its own dressed basis.

    Open modes pick up a unimodular phase, evanescent ones a pure decay
    factor; nothing in this matrix can exceed unit modulus.
    """
    if length < 0:
        raise ValueError("propagation length must be non-negative")
    factors = np.exp(1j * eigensystem.wavenumbers * length)
    zero = np.zeros((2, 2), dtype=complex)
    diag = np.diag(factors)
    return SMatrix.from_blocks(zero, diag, zero, diag)


def interface_smatrix(left: SegmentEigensystem, right: SegmentEigensystem) -> SMatrix:
    """Match wavefunction and derivative across one potential discontinuity.

    Both spinor components and their first derivatives are continuous; the
    matching system is expressed in the two local eigenbases and solved
    directly.  It degenerates only when a local mode sits exactly at
    threshold (vanishing wavenumber).
    """
    if (np.min(np.abs(left.wavenumbers)) < _THRESHOLD_TOL
            or np.min(np.abs(right.wavenumbers)) < _THRESHOLD_TOL):
        raise DegenerateThresholdError(
            "channel exactly at threshold: interface matching is degenerate")
    ul = left.vectors.astype(complex)
    ur = right.vectors.astype(complex)
    ul_k = ul * left.wavenumbers[np.newaxis, :]
    ur_k = ur * right.wavenumbers[np.newaxis, :]
    m_out = np.block([[-ul, ur], [ul_k, ur_k]])
    m_in = np.block([[ul, -ur], [ul_k, ur_k]])
    try:
        s = np.linalg.solve(m_out, m_in)
    except np.linalg.LinAlgError as exc:
        raise DegenerateThresholdError(f"singular interface matching: {exc}") from exc
    return SMatrix(s)


def star_product(first: SMatrix, second: SMatrix) -> SMatrix:
    """Redheffer composition: S-matrix of `first` followed by `second`."""
    r1, t1, r1p, t1p = first.r, first.t, first.rp, first.tp
    r2, t2, r2p, t2p = second.r, second.t, second.rp, second.tp
    eye = np.eye(2, dtype=complex)
    a = eye - r1p @ r2
    b = eye - r2 @ r1p
    try:
        x = np.linalg.solve(a, t1)          # (I - r1p r2)^-1 t1
        y = np.linalg.solve(a, r1p @ t2p)   # (I - r1p r2)^-1 r1p t2p
        z = np.linalg.solve(b, t2p)         # (I - r2 r1p)^-1 t2p
    except np.linalg.LinAlgError as exc:
        raise CompositionError(
            f"singular star-product block: {exc}",
            condition_estimate=float(np.linalg.cond(a)),
        ) from exc
    r = r1 + t1p @ r2 @ x
    t = t2 @ x
    rp = r2p + t2 @ y
    tp = t1p @ z
    result = SMatrix.from_blocks(r, t, rp, tp)
    if not np.all(np.isfinite(result.matrix.view(float))):
        raise CompositionError(
            "non-finite star-product result",
            condition_estimate=float(np.linalg.cond(a)),
        )
    return result


def _unit_transmission() -> ScatteringAmplitudes:
    return ScatteringAmplitudes(r_a=0j, t_a=1 + 0j, r_b=0j, t_b=0j)


def _extract(total: SMatrix) -> ScatteringAmplitudes:
    # Unit |a,n> amplitude incident from the left; vacuum eigenbases are in
    # channel order, so row 0 is the a channel and row 1 the b channel.
    return ScatteringAmplitudes(
        r_a=complex(total.r[0, 0]),
        r_b=complex(total.r[1, 0]),
        t_a=complex(total.t[0, 0]),
        t_b=complex(total.t[1, 0]),
    )


def solve_piecewise(params: ModelParams, profile: ModeProfile) -> ScatteringAmplitudes:
    """Scatter an incident |a,n> wave across an arbitrary piecewise profile."""
    if profile.n_segments == 0:
        return _unit_transmission()
    vacuum = segment_eigensystem(0.0, params.delta_over_g, params.n_photons,
                                 params.k_over_kappa)
    segments = [
        segment_eigensystem(float(u), params.delta_over_g, params.n_photons,
                            params.k_over_kappa)
        for u in profile.u_values
    ]
    total = interface_smatrix(vacuum, segments[0])
    for j, (seg, length) in enumerate(zip(segments, profile.lengths)):
        total = star_product(total, propagation_smatrix(seg, float(length)))
        nxt = segments[j + 1] if j + 1 < len(segments) else vacuum
        total = star_product(total, interface_smatrix(seg, nxt))
    return _extract(total)


def solve_mesa(params: ModelParams) -> ScatteringAmplitudes:
    """Closed-path solver for the mesa mode: two interfaces, one propagation."""
    if params.mode != "mesa":
        raise ValueError("solve_mesa requires params.mode == 'mesa'")
    if params.kappa_L == 0:
        return _unit_transmission()
    vacuum = segment_eigensystem(0.0, params.delta_over_g, params.n_photons,
                                 params.k_over_kappa)
    interior = segment_eigensystem(1.0, params.delta_over_g, params.n_photons,
                                   params.k_over_kappa)
    total = star_product(
        star_product(interface_smatrix(vacuum, interior),
                     propagation_smatrix(interior, params.kappa_L)),
        interface_smatrix(interior, vacuum),
    )
    return _extract(total)


def flux_sum(amps: ScatteringAmplitudes, flux_ratio: float) -> float:
    """Total outgoing flux for unit incident flux; 1 for a lossless solve."""
    own = abs(amps.r_a) ** 2 + abs(amps.t_a) ** 2
    other = abs(amps.r_b) ** 2 + abs(amps.t_b) ** 2
    return own + flux_ratio * other


def unitarity_defect(amps: ScatteringAmplitudes, flux_ratio: float) -> float:
    """Absolute deviation of the outgoing flux from unity."""
    return abs(flux_sum(amps, flux_ratio) - 1.0)
