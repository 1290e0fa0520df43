import numpy as np
import pytest

from mazersim import ModelParams, Regime, classify_regime
from mazersim.core import COLD_THRESHOLD, HOT_THRESHOLD


def test_defaults():
    p = ModelParams(k_over_kappa=1.0)
    assert p.delta_over_g == 0.0
    assert p.n_photons == 0
    assert p.kappa_L == 0.0
    assert p.mode == "mesa"


def test_kinetic_energy_is_square_of_wavenumber():
    p = ModelParams(k_over_kappa=0.3)
    assert p.kinetic_energy == pytest.approx(0.09)
    assert ModelParams(k_over_kappa=100.0).kinetic_energy == pytest.approx(1e4)


def test_validation_rejects_bad_inputs():
    with pytest.raises(ValueError):
        ModelParams(k_over_kappa=0.0)
    with pytest.raises(ValueError):
        ModelParams(k_over_kappa=-1.0)
    with pytest.raises(ValueError):
        ModelParams(k_over_kappa=np.nan)
    with pytest.raises(ValueError):
        ModelParams(k_over_kappa=1.0, kappa_L=-0.5)
    with pytest.raises(ValueError):
        ModelParams(k_over_kappa=1.0, n_photons=-1)
    with pytest.raises(ValueError):
        ModelParams(k_over_kappa=1.0, delta_over_g=np.inf)
    with pytest.raises(ValueError):
        ModelParams(k_over_kappa=1.0, mode="")


def test_params_frozen():
    p = ModelParams(k_over_kappa=1.0)
    with pytest.raises(AttributeError):
        p.k_over_kappa = 2.0


def test_regime_thresholds():
    assert classify_regime(ModelParams(k_over_kappa=100.0)) is Regime.HOT
    assert classify_regime(ModelParams(k_over_kappa=0.01)) is Regime.COLD
    assert classify_regime(ModelParams(k_over_kappa=1.0)) is Regime.INTERMEDIATE
    # boundaries belong to the extreme regimes
    assert classify_regime(ModelParams(k_over_kappa=HOT_THRESHOLD)) is Regime.HOT
    assert classify_regime(ModelParams(k_over_kappa=COLD_THRESHOLD)) is Regime.COLD
