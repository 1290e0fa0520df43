"""Cavity mode functions u(z) and their piecewise-constant reduction.

The generic solver only consumes piecewise-constant profiles; smooth modes
are midpoint-sampled over their support.  Midpoint sampling is second-order
accurate for smooth u and exact for the mesa mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# sech2 tails are truncated where u drops below this value; the support is
# symmetric about the mode centre.
SECH2_TRUNCATION = 1e-8

MODE_KINDS = ("mesa", "sech2", "sin2", "custom")


@dataclass(frozen=True, eq=False)
class ModeFunction:
    """A cavity mode shape with finite support.

    Attributes:
        kind: one of "mesa", "sech2", "sin2", "custom".
        kappa_L: interaction length in 1/kappa units (characteristic length
            of the shape; the actual support of sech2 extends further).
        width: sech2 scale parameter (defaults to kappa_L).
        table: (z, u) sampling for custom modes, linearly interpolated.
    """

    kind: str
    kappa_L: float
    width: float | None = None
    table: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in MODE_KINDS:
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if not np.isfinite(self.kappa_L) or self.kappa_L < 0:
            raise ValueError("kappa_L must be finite and non-negative")
        if self.kind == "sech2":
            w = self.kappa_L if self.width is None else self.width
            if w <= 0:
                raise ValueError("sech2 width must be positive")
        if self.kind == "custom":
            if self.table is None:
                raise ValueError("custom modes require a (z, u) table")
            z, u = self.table
            if len(z) < 2 or len(z) != len(u):
                raise ValueError("custom table needs matching z and u columns")
            if not np.all(np.diff(z) > 0):
                raise ValueError("custom table z values must be strictly increasing")
            if np.any(u < 0) or not np.all(np.isfinite(u)):
                raise ValueError("custom table u values must be finite and non-negative")

    @property
    def support(self) -> tuple[float, float]:
        """Window outside of which u(z) is identically zero."""
        if self.kind == "sech2":
            w = self.kappa_L if self.width is None else self.width
            half = w * np.arccosh(1.0 / np.sqrt(SECH2_TRUNCATION))
            return (0.0, 2.0 * half)
        if self.kind == "custom":
            z = self.table[0]
            return (float(z[0]), float(z[-1]))
        return (0.0, self.kappa_L)


def mesa(kappa_L: float) -> ModeFunction:
    """Square profile: u = 1 on [0, kappa_L], 0 elsewhere."""
    return ModeFunction("mesa", kappa_L)


def sech_squared(kappa_L: float, width: float | None = None) -> ModeFunction:
    """Smooth bell profile u = sech^2((z - z_c)/width), width defaulting to kappa_L."""
    return ModeFunction("sech2", kappa_L, width=width)


def sinusoidal(kappa_L: float) -> ModeFunction:
    """Half-wave profile u = sin^2(pi z / kappa_L) on [0, kappa_L]."""
    return ModeFunction("sin2", kappa_L)


def custom(z, u) -> ModeFunction:
    """Tabulated profile, linearly interpolated between samples."""
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    return ModeFunction("custom", float(z[-1] - z[0]) if len(z) else 0.0, table=(z, u))


def load_custom(path) -> ModeFunction:
    """Read a two-column whitespace-separated `z  u` file into a custom mode."""
    data = np.loadtxt(path, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns `z  u`")
    return custom(data[:, 0], data[:, 1])


def from_identifier(identifier: str, kappa_L: float) -> ModeFunction:
    """Build a ModeFunction from a CLI-style identifier.

    Accepts "mesa", "sech2", "sin2" and "custom:<path>".
    """
    if identifier == "mesa":
        return mesa(kappa_L)
    if identifier == "sech2":
        return sech_squared(kappa_L)
    if identifier == "sin2":
        return sinusoidal(kappa_L)
    if identifier.startswith("custom:"):
        return load_custom(identifier.split(":", 1)[1])
    raise ValueError(f"unknown mode identifier {identifier!r}")


def evaluate_mode(mode: ModeFunction, z):
    """Evaluate u(z); scalar in, scalar out; arrays are mapped elementwise."""
    z_arr = np.asarray(z, dtype=float)
    lo, hi = mode.support
    inside = (z_arr >= lo) & (z_arr <= hi)
    if mode.kind == "mesa":
        u = np.where(inside, 1.0, 0.0)
    elif mode.kind == "sin2":
        with np.errstate(invalid="ignore"):
            u = np.where(inside & (mode.kappa_L > 0),
                         np.sin(np.pi * z_arr / max(mode.kappa_L, np.finfo(float).tiny)) ** 2,
                         0.0)
    elif mode.kind == "sech2":
        w = mode.kappa_L if mode.width is None else mode.width
        centre = 0.5 * (lo + hi)
        u = np.where(inside, 1.0 / np.cosh((z_arr - centre) / w) ** 2, 0.0)
    else:
        zt, ut = mode.table
        u = np.where(inside, np.interp(z_arr, zt, ut), 0.0)
    if np.isscalar(z) or z_arr.ndim == 0:
        return float(u)
    return u


@dataclass(frozen=True, eq=False)
class ModeProfile:
    """Ordered piecewise-constant sampling of a mode, left to right.

    Attributes:
        lengths: segment lengths in 1/kappa units, all strictly positive.
        u_values: mode value on each segment, all non-negative.
    """

    lengths: np.ndarray
    u_values: np.ndarray

    def __post_init__(self):
        lengths = np.asarray(self.lengths, dtype=float)
        u_values = np.asarray(self.u_values, dtype=float)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "u_values", u_values)
        if lengths.shape != u_values.shape or lengths.ndim != 1:
            raise ValueError("lengths and u_values must be 1-d arrays of equal size")
        if lengths.size and (np.any(lengths <= 0) or not np.all(np.isfinite(lengths))):
            raise ValueError("segment lengths must be positive and finite")
        if lengths.size and (np.any(u_values < 0) or not np.all(np.isfinite(u_values))):
            raise ValueError("segment u values must be non-negative and finite")

    @property
    def n_segments(self) -> int:
        return int(self.lengths.size)

    @property
    def total_length(self) -> float:
        return float(np.sum(self.lengths))

    def reversed(self) -> "ModeProfile":
        return ModeProfile(self.lengths[::-1].copy(), self.u_values[::-1].copy())


def discretize_mode(mode: ModeFunction, n_segments: int) -> ModeProfile:
    """Midpoint-sample a mode into n_segments equal slices of its support."""
    if n_segments < 1:
        raise ValueError("n_segments must be at least 1")
    lo, hi = mode.support
    span = hi - lo
    if span == 0:
        return ModeProfile(np.empty(0), np.empty(0))
    edges = np.linspace(lo, hi, n_segments + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    u = np.asarray(evaluate_mode(mode, mids), dtype=float)
    lengths = np.full(n_segments, span / n_segments)
    return ModeProfile(lengths, u)
