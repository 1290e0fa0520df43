"""Dimensionless unit system, parameter validation and regime classification.

Everything downstream works in cavity-coupling units: kappa is the wavenumber
at which the atomic kinetic energy equals the vacuum coupling energy, lengths
are measured in 1/kappa, wavenumbers in kappa and energies in units of the
coupling energy.  In these units the kinetic energy of an atom with incident
wavenumber k is exactly (k/kappa)**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

# Classifier thresholds on k/kappa.  Informational only: no solver branches
# on the regime tag.
HOT_THRESHOLD = 10.0
COLD_THRESHOLD = 0.1


class Regime(Enum):
    HOT = "hot"
    INTERMEDIATE = "intermediate"
    COLD = "cold"


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless configuration of a single cavity-crossing problem.

    Attributes:
        k_over_kappa: incident wavenumber of the excited atom, in kappa units.
        delta_over_g: cavity-minus-atom frequency detuning in coupling units.
        n_photons: photon number of the initial Fock state of the field.
        kappa_L: interaction length of the cavity mode, in 1/kappa units.
        mode: cavity mode identifier ("mesa", "sech2", "sin2" or
            "custom:<path>" for a tabulated profile).
    """

    k_over_kappa: float
    delta_over_g: float = 0.0
    n_photons: int = 0
    kappa_L: float = 0.0
    mode: str = "mesa"

    def __post_init__(self):
        for name in ("k_over_kappa", "delta_over_g", "kappa_L"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"{name} must be a finite number, got {value!r}")
        if self.k_over_kappa <= 0:
            raise ValueError("k_over_kappa must be positive")
        if self.kappa_L < 0:
            raise ValueError("kappa_L must be non-negative")
        if not isinstance(self.n_photons, int) or isinstance(self.n_photons, bool):
            raise ValueError("n_photons must be an integer")
        if self.n_photons < 0:
            raise ValueError("n_photons must be non-negative")
        if not isinstance(self.mode, str) or not self.mode:
            raise ValueError("mode must be a non-empty identifier string")

    @property
    def kinetic_energy(self) -> float:
        """Incident kinetic energy in coupling-energy units: (k/kappa)**2."""
        return self.k_over_kappa ** 2


def classify_regime(params: ModelParams) -> Regime:
    """Classify a parameter set as hot, intermediate or cold.

    The tag is purely informational; solvers treat all regimes identically.
    """
    if params.k_over_kappa >= HOT_THRESHOLD:
        return Regime.HOT
    if params.k_over_kappa <= COLD_THRESHOLD:
        return Regime.COLD
    return Regime.INTERMEDIATE
