"""Observables, the fast-atom reference curve, sweeps and peak analysis.

Scattering amplitudes are converted to flux-normalized outcome
probabilities, swept along one coordinate at a time, and the resulting
curves searched for resonance peaks (position, amplitude, FWHM).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import signal
from scipy.optimize import brentq

from .channels import ChannelSpec, cooling_wavenumber, outside_channels
from .core import ModelParams
from .modes import ModeProfile, discretize_mode, from_identifier
from .scattering import (
    ScatteringAmplitudes,
    SolverError,
    solve_mesa,
    solve_piecewise,
)

SWEEP_AXES = ("kappa_L", "delta_over_g", "k_over_kappa")
PROBABILITY_FIELDS = ("R_a", "T_a", "R_b", "T_b", "P_em", "T_total")
DEFAULT_PROMINENCE = 1e-4
DEFAULT_SEGMENTS = 256


@dataclass(frozen=True)
class OutcomeProbabilities:
    """Flux-normalized exit probabilities for one parameter point.

    R_a/T_a: reflection/transmission with the atom still excited.
    R_b/T_b: reflection/transmission after depositing a photon.
    P_em = R_b + T_b is the photon emission probability and
    T_total = T_a + T_b the transmission regardless of internal state.
    """

    R_a: float
    T_a: float
    R_b: float
    T_b: float
    P_em: float
    T_total: float


def probabilities(amps: ScatteringAmplitudes, channels: ChannelSpec) -> OutcomeProbabilities:
    """Convert amplitudes to probabilities, weighting the lower-state
    channel by its flux ratio k_b/k (zero when that channel is closed)."""
    fr = channels.flux_ratio
    R_a = abs(amps.r_a) ** 2
    T_a = abs(amps.t_a) ** 2
    R_b = fr * abs(amps.r_b) ** 2
    T_b = fr * abs(amps.t_b) ** 2
    return OutcomeProbabilities(
        R_a=R_a, T_a=T_a, R_b=R_b, T_b=T_b, P_em=R_b + T_b, T_total=T_a + T_b
    )


def jc_emission_probability(params: ModelParams) -> float:
    """Emission probability of the classical-motion (fast atom) limit.

    P = [4(n+1)/(D^2 + 4(n+1))] sin^2(sqrt(D^2 + 4(n+1)) tau / 2) with the
    interaction phase tau = kappa_L / (2 k/kappa) fixed by the transit time.
    """
    n1 = params.n_photons + 1.0
    delta = params.delta_over_g
    tau = params.kappa_L / (2.0 * params.k_over_kappa)
    omega = math.sqrt(delta * delta + 4.0 * n1)
    return (4.0 * n1 / omega**2) * math.sin(omega * tau / 2.0) ** 2


def _axis_field(axis: str) -> str:
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    return axis


def _solve_point(params: ModelParams, profile) -> ScatteringAmplitudes:
    if params.mode == "mesa":
        return solve_mesa(params)
    return solve_piecewise(params, profile)


def _profile_for(params: ModelParams, n_segments: int) -> ModeProfile | None:
    if params.mode == "mesa":
        return None
    mode = from_identifier(params.mode, params.kappa_L)
    return discretize_mode(mode, n_segments)


@dataclass(frozen=True, eq=False)
class SweepTable:
    """One observable table: a coordinate axis plus probability columns.

    Rows whose solve failed carry NaN in every probability column; the
    failure message is kept in `errors` keyed by row index.
    """

    axis: str
    coordinates: np.ndarray
    R_a: np.ndarray
    T_a: np.ndarray
    R_b: np.ndarray
    T_b: np.ndarray
    P_em: np.ndarray
    T_total: np.ndarray
    errors: dict

    def __len__(self) -> int:
        return int(self.coordinates.size)

    def column(self, name: str) -> np.ndarray:
        if name not in PROBABILITY_FIELDS:
            raise ValueError(f"unknown column {name!r}")
        return getattr(self, name)

    def row(self, i: int) -> OutcomeProbabilities:
        return OutcomeProbabilities(
            R_a=float(self.R_a[i]), T_a=float(self.T_a[i]),
            R_b=float(self.R_b[i]), T_b=float(self.T_b[i]),
            P_em=float(self.P_em[i]), T_total=float(self.T_total[i]),
        )


def sweep(params: ModelParams, axis: str, grid,
          n_segments: int = DEFAULT_SEGMENTS) -> SweepTable:
    """Solve once per grid point along `axis`, holding the rest of
    `params` fixed.

    The grid must be finite and strictly increasing.  Solver failures do
    not abort the sweep; they are recorded per row.  Sweeping kappa_L
    with a tabulated custom mode is rejected since the table fixes its
    own spatial extent.
    """
    field = _axis_field(axis)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(grid)):
        raise ValueError("grid values must be finite")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid must be strictly increasing")
    if field == "kappa_L" and params.mode.startswith("custom"):
        raise ValueError("cannot sweep kappa_L with a tabulated custom mode")

    cols = {name: np.full(grid.size, np.nan) for name in PROBABILITY_FIELDS}
    errors: dict = {}
    # profile is L-independent unless kappa_L itself is swept
    profile = None if field == "kappa_L" else _profile_for(params, n_segments)
    for i, value in enumerate(grid):
        point = replace(params, **{field: float(value)})
        try:
            prof_i = _profile_for(point, n_segments) if field == "kappa_L" else profile
            amps = _solve_point(point, prof_i)
        except SolverError as exc:
            errors[i] = str(exc)
            continue
        probs = probabilities(amps, outside_channels(point))
        for name in PROBABILITY_FIELDS:
            cols[name][i] = getattr(probs, name)
    return SweepTable(axis=field, coordinates=grid, errors=errors, **cols)


def observable_function(params: ModelParams, axis: str, field: str = "P_em",
                        n_segments: int = DEFAULT_SEGMENTS):
    """Scalar observable along one coordinate, as a plain callable.

    Used for peak refinement, where the grid of a sweep table is too
    coarse to sit exactly on a resonance top.
    """
    axis_field = _axis_field(axis)
    if field not in PROBABILITY_FIELDS:
        raise ValueError(f"unknown field {field!r}")
    fixed_profile = None if axis_field == "kappa_L" else _profile_for(params, n_segments)

    def fn(value: float) -> float:
        point = replace(params, **{axis_field: float(value)})
        if axis_field == "kappa_L":
            prof = _profile_for(point, n_segments)
        else:
            prof = fixed_profile
        amps = _solve_point(point, prof)
        probs = probabilities(amps, outside_channels(point))
        return getattr(probs, field)

    return fn


@dataclass(frozen=True)
class Peak:
    """A located resonance: position and amplitude in sweep units, FWHM
    by half-maximum crossing.  `partial` marks peaks whose half-maximum
    crossings ran off the grid edge (the FWHM is then mirrored from the
    available side, or NaN if neither side crossed)."""

    position: float
    amplitude: float
    fwhm: float
    partial: bool = False


def _half_crossing(xs, ys, start: int, half: float, step: int):
    # walk from the peak until the curve dips below half maximum, then
    # linearly interpolate the crossing
    i = start
    while 0 <= i + step < len(ys):
        j = i + step
        if not np.isfinite(ys[j]):
            return None
        if ys[j] < half:
            x0, x1 = xs[i], xs[j]
            y0, y1 = ys[i], ys[j]
            return float(x0 + (half - y0) * (x1 - x0) / (y1 - y0))
        i = j
    return None


def find_peaks(table: SweepTable, min_prominence: float = DEFAULT_PROMINENCE,
               field: str = "P_em") -> list[Peak]:
    """Locate local maxima of one probability column and measure their
    FWHM by linear interpolation to the half-maximum crossings."""
    if len(table) < 3:
        raise ValueError("need at least 3 rows to locate peaks")
    xs = table.coordinates
    ys = np.array(table.column(field), dtype=float)
    ys_safe = np.where(np.isfinite(ys), ys, -np.inf)
    idx, _ = signal.find_peaks(ys_safe, prominence=min_prominence)
    peaks = []
    for p in idx:
        amp = float(ys[p])
        half = amp / 2.0
        left = _half_crossing(xs, ys, p, half, -1)
        right = _half_crossing(xs, ys, p, half, +1)
        partial = left is None or right is None
        if left is not None and right is not None:
            fwhm = right - left
        elif right is not None:
            fwhm = 2.0 * (right - float(xs[p]))
        elif left is not None:
            fwhm = 2.0 * (float(xs[p]) - left)
        else:
            fwhm = float("nan")
        peaks.append(Peak(position=float(xs[p]), amplitude=amp,
                          fwhm=fwhm, partial=partial))
    return peaks


def refine_peaks(peaks, fn, rel_resolution: float = 1e-3, bounds=None) -> list[Peak]:
    """Re-measure grid-located peaks against the continuous curve `fn`.

    Each peak top is re-found by iterative bracket shrinking and its
    FWHM re-measured by bisection on fn - amplitude/2, until position
    and width are resolved to `rel_resolution` of the width.  `bounds`
    clips the search to the callable's valid coordinate range; a peak
    whose half-maximum crossing escapes it comes back flagged partial.
    """
    b_lo = -np.inf if bounds is None else float(bounds[0])
    b_hi = np.inf if bounds is None else float(bounds[1])
    refined = []
    for peak in peaks:
        width = peak.fwhm if np.isfinite(peak.fwhm) and peak.fwhm > 0 else None
        span = width if width is not None else abs(peak.position) * 0.01 + 1e-6
        lo = max(peak.position - span, b_lo)
        hi = min(peak.position + span, b_hi)
        target = rel_resolution * span
        best_x, best_y = peak.position, peak.amplitude
        while hi - lo > target:
            xs = np.linspace(lo, hi, 17)
            ys = [fn(x) for x in xs]
            j = int(np.argmax(ys))
            best_x, best_y = float(xs[j]), float(ys[j])
            lo, hi = xs[max(j - 1, 0)], xs[min(j + 1, len(xs) - 1)]
        half = best_y / 2.0

        def below(x):
            return fn(x) - half

        sides = []
        ok = True
        for direction in (-1.0, +1.0):
            step = span / 4.0
            probe = best_x + direction * step
            for _ in range(60):
                if probe <= b_lo or probe >= b_hi:
                    probe = b_lo if direction < 0 else b_hi
                    if below(probe) >= 0:
                        ok = False
                    break
                if below(probe) < 0:
                    break
                step *= 1.6
                probe = best_x + direction * step
            else:
                ok = False
            if not ok:
                break
            inner = best_x if direction > 0 else probe
            outer = probe if direction > 0 else best_x
            sides.append(brentq(below, inner, outer, xtol=target))
        if ok:
            fwhm = sides[1] - sides[0]
            refined.append(Peak(position=best_x, amplitude=best_y,
                                fwhm=float(fwhm), partial=False))
        else:
            refined.append(Peak(position=best_x, amplitude=best_y,
                                fwhm=peak.fwhm, partial=True))
    return refined


def peak_amplitude_law(k_over_kappa: float, delta_over_g: float) -> float:
    """Resonance amplitude rule for the square profile: one half times
    the transmission factor of a free particle crossing the kinetic
    energy step left behind by the emitted photon.  Zero when the
    emission channel is closed."""
    k_b = cooling_wavenumber(k_over_kappa, delta_over_g)
    if k_b is None:
        return 0.0
    ratio = k_b / k_over_kappa
    return 0.5 * 4.0 * ratio / (1.0 + ratio) ** 2


def width_in_hz(width_delta: float, g_hz: float) -> float:
    """Convert a width in detuning units to Hz given the coupling in Hz:
    width_hz = (g / 2 pi) * width_delta."""
    if g_hz <= 0:
        raise ValueError("g_hz must be positive")
    return width_delta * g_hz / (2.0 * math.pi)


def _lambda_minus(delta_over_g: float, n_photons: int) -> float:
    c2 = n_photons + 1.0
    return delta_over_g / 2.0 - math.sqrt(delta_over_g**2 / 4.0 + c2)


def half_wave_resonances(params: ModelParams, axis: str, lo: float, hi: float) -> list[float]:
    """Coordinates in [lo, hi] where the interior lower dressed mode
    fits an integer number of half waves (its round trip is in phase).

    Exact resonance positions for the square profile up to a small
    shift; useful as search seeds.  Heuristic for smooth modes.
    """
    field = _axis_field(axis)
    if lo >= hi:
        raise ValueError("need lo < hi")
    n = params.n_photons

    def k_minus(k, d):
        gap = k * k - _lambda_minus(d, n)
        return math.sqrt(gap) if gap > 0 else 0.0

    out = []
    if field == "kappa_L":
        km = k_minus(params.k_over_kappa, params.delta_over_g)
        if km <= 0:
            return []
        m_lo = max(1, math.ceil(km * lo / math.pi))
        m_hi = math.floor(km * hi / math.pi)
        out = [m * math.pi / km for m in range(m_lo, m_hi + 1)]
    elif field == "k_over_kappa":
        L = params.kappa_L
        if L <= 0:
            return []
        lam = _lambda_minus(params.delta_over_g, n)
        m_lo = max(1, math.ceil(k_minus(lo, params.delta_over_g) * L / math.pi))
        m_hi = math.floor(k_minus(hi, params.delta_over_g) * L / math.pi)
        for m in range(m_lo, m_hi + 1):
            k2 = (m * math.pi / L) ** 2 + lam
            if k2 > 0 and lo <= math.sqrt(k2) <= hi:
                out.append(math.sqrt(k2))
        out.sort()
    else:
        L = params.kappa_L
        k = params.k_over_kappa
        if L <= 0:
            return []
        # k_minus falls monotonically with detuning: one root per index
        phase = lambda d: k_minus(k, d) * L / math.pi
        m_lo = max(1, math.ceil(phase(hi)))
        m_hi = math.floor(phase(lo))
        for m in range(m_lo, m_hi + 1):
            out.append(brentq(lambda d: phase(d) - m, lo, hi))
        out.sort()
    return out
