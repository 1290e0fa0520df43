"""Acceptance suite: one test per shipped guarantee, each printing a
single pass/fail line with its measured numbers.

These are end-to-end checks at fixed tolerances; the per-module detail
lives in the other test files.
"""

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import signal

from mazersim import (
    ModelParams,
    ModeProfile,
    Peak,
    default_beam_grid,
    discretize_mode,
    filter_distribution,
    find_peaks,
    from_identifier,
    half_wave_resonances,
    jc_emission_probability,
    maxwell_boltzmann,
    observable_function,
    outside_channels,
    peak_amplitude_law,
    probabilities,
    refine_peaks,
    solve_mesa,
    solve_piecewise,
    sweep,
    unitarity_defect,
    width_in_hz,
)
from mazersim.cli import main as cli_main

from oracle import ode_amplitudes

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def report(capfd):
    """One always-visible pass/fail line per criterion, past fd capture."""

    def _report(number: int, ok: bool, detail: str):
        verdict = "PASS" if ok else "FAIL"
        with capfd.disabled():
            print(f"criterion {number}: {verdict} - {detail}",
                  file=sys.stderr, flush=True)

    return _report


def _criterion1_draws(count=1000, seed=0):
    """The shared randomized draw set: (params, mode identifier)."""
    rng = np.random.default_rng(seed)
    log_lo, log_hi = math.log(0.005), math.log(200.0)
    names = ("mesa", "sech2", "sin2")
    draws = []
    for _ in range(count):
        k = math.exp(rng.uniform(log_lo, log_hi))
        delta = float(rng.uniform(-2.0, 2.0))
        n = int(rng.integers(0, 6))
        length = float(rng.uniform(0.0, 50.0))
        mode = names[int(rng.integers(0, 3))]
        draws.append((ModelParams(k_over_kappa=k, delta_over_g=delta,
                                  n_photons=n, kappa_L=length, mode=mode), mode))
    return draws


def test_criterion_1_unitarity_suite(report):
    started = time.monotonic()
    worst = 0.0
    for params, mode in _criterion1_draws():
        if mode == "mesa":
            amps = solve_mesa(params)
        else:
            profile = discretize_mode(from_identifier(mode, params.kappa_L), 256)
            amps = solve_piecewise(params, profile)
        defect = unitarity_defect(amps, outside_channels(params).flux_ratio)
        worst = max(worst, defect)
    elapsed = time.monotonic() - started
    ok = worst <= 1e-9 and elapsed < 60.0
    report(1, ok, f"max flux defect {worst:.3e} over 1000 draws "
                   f"(tol 1e-9) in {elapsed:.1f} s (budget 60 s)")
    assert worst <= 1e-9
    assert elapsed < 60.0


def test_criterion_2_hot_atom_jc_agreement(report):
    k = 100.0
    worst = 0.0
    per_delta = []
    for delta in (0.0, 1.0, -1.0):
        omega = math.sqrt(delta * delta + 4.0)
        # two full population-oscillation periods in the transit phase
        l_max = 8.0 * math.pi * k / omega
        err = 0.0
        for length in np.linspace(0.0, l_max, 2000):
            params = ModelParams(k_over_kappa=k, delta_over_g=delta,
                                 kappa_L=float(length))
            p = probabilities(solve_mesa(params), outside_channels(params))
            err = max(err, abs(p.P_em - jc_emission_probability(params)))
        per_delta.append(f"D={delta:+g}: {err:.2e}")
        worst = max(worst, err)
    ok = worst <= 1e-3
    report(2, ok, f"max |P_em - P_JC| {worst:.3e} (tol 1e-3; {'; '.join(per_delta)})")
    assert worst <= 1e-3


def test_criterion_3_cold_resonant_peaks(report):
    params = ModelParams(k_over_kappa=0.01)
    grid = np.linspace(2.5, 16.0, 5000)
    table = sweep(params, "kappa_L", grid)
    raw = find_peaks(table)
    assert len(raw) >= 4
    fn = observable_function(params, "kappa_L")
    peaks = refine_peaks(raw, fn, bounds=(2.5, 16.0))
    worst_amp = max(abs(p.amplitude - 0.5) / 0.5 for p in peaks)
    # independent position check: dense local argmax scan around each peak
    worst_pos = 0.0
    for p in peaks:
        xs = np.linspace(p.position - 0.02, p.position + 0.02, 2001)
        ys = [fn(float(x)) for x in xs]
        worst_pos = max(worst_pos, abs(p.position - float(xs[int(np.argmax(ys))])))
    ok = worst_amp <= 0.01 and worst_pos <= 1e-4
    report(3, ok, f"{len(peaks)} peaks; worst amplitude deviation from 1/2: "
                   f"{100 * worst_amp:.3f}% (tol 1%); worst position offset vs "
                   f"fine scan {worst_pos:.2e} (tol 1e-4)")
    assert worst_amp <= 0.01
    assert worst_pos <= 1e-4


def test_criterion_4_peak_amplitude_law(report):
    worst_abs = 0.0
    worst_rel = 0.0
    for k in (0.05, 0.1):
        for delta in (-0.05, -0.01, -0.0075, -0.001):
            params = ModelParams(k_over_kappa=k, delta_over_g=delta)
            law = peak_amplitude_law(k, delta)
            fn = observable_function(params, "kappa_L")
            seeds = half_wave_resonances(params, "kappa_L", 1.0, 20.0)
            for seed in seeds[1:3]:  # second and third resonances
                start = Peak(position=seed, amplitude=fn(seed), fwhm=0.3)
                peak, = refine_peaks([start], fn,
                                     bounds=(seed - 1.5, seed + 1.5))
                worst_abs = max(worst_abs, abs(peak.amplitude - law))
                worst_rel = max(worst_rel, abs(peak.amplitude - law) / law)
    ok = worst_abs <= 0.02
    report(4, ok, f"peak amplitudes vs transmission-factor rule: worst "
                   f"absolute deviation {worst_abs:.4f} (tol 0.02), worst "
                   f"relative {100 * worst_rel:.2f}%")
    assert worst_abs <= 0.02


def test_criterion_5_emission_blocking(report):
    params = ModelParams(k_over_kappa=0.05, delta_over_g=0.01)
    worst = 0.0
    for length in np.linspace(0.0, 1e4, 200):
        point = ModelParams(k_over_kappa=0.05, delta_over_g=0.01,
                            kappa_L=float(length))
        amps = solve_mesa(point)
        assert np.isfinite([amps.r_a, amps.t_a, amps.r_b, amps.t_b]).all()
        p = probabilities(amps, outside_channels(point))
        worst = max(worst, p.P_em)
    ok = worst <= 1e-12
    report(5, ok, f"below-threshold emission: max P_em {worst:.3e} across "
                   f"kappa_L in [0, 1e4] (tol 1e-12)")
    assert worst <= 1e-12


def test_criterion_6_solver_cross_validation(report):
    # piecewise path vs closed mesa path on the shared draw set; the mesa
    # is split into four segments so the composition order really differs
    worst_piecewise = 0.0
    for params, _ in _criterion1_draws():
        a = solve_mesa(ModelParams(k_over_kappa=params.k_over_kappa,
                                   delta_over_g=params.delta_over_g,
                                   n_photons=params.n_photons,
                                   kappa_L=params.kappa_L))
        profile = ModeProfile(np.full(4, params.kappa_L / 4.0), np.ones(4))
        b = solve_piecewise(params, profile)
        diff = max(abs(a.r_a - b.r_a), abs(a.t_a - b.t_a),
                   abs(a.r_b - b.r_b), abs(a.t_b - b.t_b))
        worst_piecewise = max(worst_piecewise, diff)

    # independent ODE oracle on 20 spot checks
    rng = np.random.default_rng(123)
    worst_ode = 0.0
    for _ in range(20):
        params = ModelParams(
            k_over_kappa=math.exp(rng.uniform(math.log(0.01), math.log(50.0))),
            delta_over_g=float(rng.uniform(-1.5, 1.5)),
            n_photons=int(rng.integers(0, 4)),
            kappa_L=float(rng.uniform(0.5, 8.0)))
        amps = solve_mesa(params)
        r_a, t_a, r_b, t_b = ode_amplitudes(
            params.k_over_kappa, params.delta_over_g, params.n_photons,
            lambda z: 1.0, 0.0, params.kappa_L)
        diff = max(abs(amps.r_a - r_a), abs(amps.t_a - t_a),
                   abs(amps.r_b - r_b), abs(amps.t_b - t_b))
        worst_ode = max(worst_ode, diff)
    ok = worst_piecewise <= 1e-8 and worst_ode <= 1e-6
    report(6, ok, f"mesa vs piecewise: max amplitude diff {worst_piecewise:.3e} "
                   f"(tol 1e-8); mesa vs ODE oracle: {worst_ode:.3e} on 20 "
                   f"spot checks (tol 1e-6)")
    assert worst_piecewise <= 1e-8
    assert worst_ode <= 1e-6


def _refined_transmission_peaks(kappa_L, lo=-0.005, hi=0.03, points=3001):
    params = ModelParams(k_over_kappa=0.05, kappa_L=kappa_L)
    table = sweep(params, "delta_over_g", np.linspace(lo, hi, points))
    raw = find_peaks(table, min_prominence=0.05, field="T_total")
    fn = observable_function(params, "delta_over_g", field="T_total")
    refined = refine_peaks(raw, fn, bounds=(lo, hi))
    return [p for p in refined if not p.partial and np.isfinite(p.fwhm)]


def test_criterion_7_transmission_resonances(report):
    peaks_1e3 = _refined_transmission_peaks(1e3)
    peaks_1e4 = _refined_transmission_peaks(1e4)
    mean_1e3 = float(np.mean([p.fwhm for p in peaks_1e3]))
    mean_1e4 = float(np.mean([p.fwhm for p in peaks_1e4]))

    # extreme length: finite amplitudes, flux still conserved
    worst_defect = 0.0
    for delta in np.linspace(-0.005, 0.03, 9):
        point = ModelParams(k_over_kappa=0.05, delta_over_g=float(delta),
                            kappa_L=1e5)
        amps = solve_mesa(point)
        assert np.isfinite([amps.r_a, amps.t_a, amps.r_b, amps.t_b]).all()
        worst_defect = max(worst_defect, unitarity_defect(
            amps, outside_channels(point).flux_ratio))

    # physical width scale after restoring a 100 kHz coupling, for the
    # slowest atoms and the longest cavity
    slow = ModelParams(k_over_kappa=0.01, kappa_L=1e5)
    fn = observable_function(slow, "delta_over_g", field="T_total")
    seeds = half_wave_resonances(slow, "delta_over_g", 0.005, 0.0055)[:2]
    widths_hz = []
    for seed in seeds:
        start = Peak(position=seed, amplitude=fn(seed), fwhm=5e-6)
        peak, = refine_peaks([start], fn, bounds=(seed - 5e-5, seed + 5e-5))
        widths_hz.append(width_in_hz(peak.fwhm, 1e5))

    ok = (len(peaks_1e3) >= 1 and mean_1e4 < mean_1e3
          and worst_defect <= 1e-6
          and all(1e-3 < w < 1e-1 for w in widths_hz))
    report(7, ok, f"{len(peaks_1e3)} resonances at kappa_L=1e3 (mean FWHM "
                   f"{mean_1e3:.3e}) vs {len(peaks_1e4)} at 1e4 (mean "
                   f"{mean_1e4:.3e}); defect at 1e5 <= {worst_defect:.1e} "
                   f"(tol 1e-6); widths at g=100 kHz: "
                   f"{', '.join(f'{w:.2e} Hz' for w in widths_hz)} "
                   f"(order 1e-2 Hz)")
    assert len(peaks_1e3) >= 1
    assert mean_1e4 < mean_1e3
    assert worst_defect <= 1e-6
    for w in widths_hz:
        assert 1e-3 < w < 1e-1


def _dominant_filtered_peaks(delta):
    params = ModelParams(k_over_kappa=0.05, delta_over_g=delta, kappa_L=1000.0)
    grid = default_beam_grid(0.05, params)
    final = filter_distribution(maxwell_boltzmann(0.05, grid), params)
    w = final.weights
    top = float(np.max(w))
    idx, _ = signal.find_peaks(w, prominence=0.05 * top)
    heights = np.sort(w[idx])[::-1]
    runner_up = float(heights[1]) if heights.size > 1 else 0.0
    return float(final.grid[int(np.argmax(w))]), top, runner_up


def test_criterion_8_velocity_selection(report):
    results = {d: _dominant_filtered_peaks(d) for d in (0.0, 0.006, 0.010, 0.014)}
    dominance = max(r[2] / r[1] for r in results.values())
    positions = [results[d][0] for d in (0.006, 0.010, 0.014)]
    monotone = positions[0] < positions[1] < positions[2]
    enhancement = results[0.010][1] / results[0.0][1]
    ok = dominance <= 0.75 and monotone and enhancement > 1.0
    detail = "; ".join(
        f"D={d:g}: peak {results[d][1]:.2f} at k={results[d][0]:.4f}"
        for d in (0.0, 0.006, 0.010, 0.014))
    report(8, ok, f"single-peak dominance (runner-up/top <= {dominance:.2f}, "
                   f"tol 0.75); positions monotone in detuning: {monotone}; "
                   f"blocked-detuning enhancement x{enhancement:.2f}; {detail}")
    assert dominance <= 0.75
    assert monotone
    assert enhancement > 1.0


def _strip_timestamp(text: str) -> list[str]:
    return [line for line in text.splitlines()
            if not line.startswith("# timestamp:")]


def test_criterion_9_golden_file_determinism(tmp_path, report):
    configs = sorted(CONFIG_DIR.glob("*.cfg"))
    assert configs, f"no shipped configs under {CONFIG_DIR}"
    mismatches = []
    for cfg in configs:
        golden = GOLDEN_DIR / (cfg.stem + ".csv")
        assert golden.exists(), f"missing golden file {golden}"
        out = tmp_path / golden.name
        rc = cli_main([_command_of(cfg), "--config", str(cfg), "--out", str(out)])
        assert rc == 0
        if _strip_timestamp(out.read_text()) != _strip_timestamp(golden.read_text()):
            mismatches.append(cfg.name)
    ok = not mismatches
    report(9, ok, f"{len(configs)} shipped configs reproduce their golden "
                   f"CSVs modulo timestamp"
                   + (f"; mismatches: {mismatches}" if mismatches else ""))
    assert not mismatches


def _command_of(cfg_path: Path) -> str:
    for line in cfg_path.read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line.startswith("command"):
            raise AssertionError("command does not belong in the config body")
    # the subcommand is recorded in the config's leading comment
    first = cfg_path.read_text().splitlines()[0]
    assert first.startswith("# command:"), cfg_path
    return first.split(":", 1)[1].strip()
