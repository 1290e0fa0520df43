"""Quantized center-of-mass scattering of two-level atoms through a
single-mode cavity: emission, reflection and transmission probabilities
at arbitrary detuning, plus velocity-selection tools built on them."""

from .beams import (
    VelocityDistribution,
    default_beam_grid,
    effective_temperature,
    filter_distribution,
    maxwell_boltzmann,
)
from .channels import (
    ChannelSpec,
    SegmentEigensystem,
    cooling_wavenumber,
    outside_channels,
    segment_eigensystem,
)
from .core import ModelParams, Regime, classify_regime
from .modes import (
    ModeFunction,
    ModeProfile,
    custom,
    discretize_mode,
    evaluate_mode,
    from_identifier,
    load_custom,
    mesa,
    sech_squared,
    sinusoidal,
)
from .observables import (
    OutcomeProbabilities,
    Peak,
    SweepTable,
    find_peaks,
    half_wave_resonances,
    jc_emission_probability,
    observable_function,
    peak_amplitude_law,
    probabilities,
    refine_peaks,
    sweep,
    width_in_hz,
)
from .scattering import (
    CompositionError,
    DegenerateThresholdError,
    ScatteringAmplitudes,
    SMatrix,
    SolverError,
    flux_sum,
    interface_smatrix,
    propagation_smatrix,
    solve_mesa,
    solve_piecewise,
    star_product,
    unitarity_defect,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelSpec",
    "CompositionError",
    "DegenerateThresholdError",
    "ModeFunction",
    "ModeProfile",
    "ModelParams",
    "OutcomeProbabilities",
    "Peak",
    "Regime",
    "SMatrix",
    "ScatteringAmplitudes",
    "SegmentEigensystem",
    "SolverError",
    "SweepTable",
    "VelocityDistribution",
    "classify_regime",
    "cooling_wavenumber",
    "custom",
    "default_beam_grid",
    "discretize_mode",
    "effective_temperature",
    "evaluate_mode",
    "filter_distribution",
    "find_peaks",
    "flux_sum",
    "from_identifier",
    "half_wave_resonances",
    "interface_smatrix",
    "jc_emission_probability",
    "load_custom",
    "maxwell_boltzmann",
    "mesa",
    "observable_function",
    "outside_channels",
    "peak_amplitude_law",
    "probabilities",
    "propagation_smatrix",
    "refine_peaks",
    "sech_squared",
    "segment_eigensystem",
    "sinusoidal",
    "solve_mesa",
    "solve_piecewise",
    "star_product",
    "sweep",
    "unitarity_defect",
    "width_in_hz",
]
