from __future__ import annotations

import logging

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.fields.models import Grid3, RSField, UnitsConfig
from src.fields.rs import divergence_residual, energy_norm
from src.fields.sources import PlaneWave, random_transverse_field, synth_plane_waves
from src.propagation.crosscheck import crosscheck_report, relative_l2
from src.propagation.fdtd import evolve_fd_maxwell, fd_step_count, stable_step
from src.propagation.models import CFLViolationError, CrosscheckReport, Method, PropagationConfig
from src.propagation.spectral import (
    dirac_residual,
    evolve_spectral,
    spectral_propagate,
    spectral_time_derivative,
)
from src.spin.helicity import helicity_decompose


def _circular(grid: Grid3) -> RSField:
    z = grid.coordinates()[..., 2]
    return RSField(grid, np.exp(1j * z)[..., None] * np.array([1, 1j, 0]) / np.sqrt(2))


# ── Spectral evolver ──────────────────────────────────────────────────


def test_zero_time_returns_input(transverse_field, units):
    out = evolve_spectral(transverse_field, PropagationConfig(t_final=0.0), units)
    assert np.array_equal(out.F, transverse_field.F)


def test_single_mode_phase(cube, units):
    f0 = _circular(cube)
    t = 0.7
    out = evolve_spectral(f0, PropagationConfig(t_final=t), units)
    assert np.max(np.abs(out.F - f0.F * np.exp(-1j * t))) < 1e-10


def test_matches_exact_plane_wave_superposition(cube):
    units = UnitsConfig(c=1.3)
    waves = [PlaneWave(mode=(1, 2, 0), helicity=1), PlaneWave(mode=(0, 1, -1), helicity=-1, amplitude=0.4)]
    for sign in (1, -1):
        f0 = synth_plane_waves(waves, cube, 0.0, sign, units)
        exact = synth_plane_waves(waves, cube, 1.1, sign, units)
        out = evolve_spectral(f0, PropagationConfig(t_final=1.1, sign=sign), units)
        assert np.max(np.abs(out.F - exact.F)) < 1e-10


def test_unitarity_and_transversality(transverse_field, units):
    out = evolve_spectral(transverse_field, PropagationConfig(t_final=2.3), units)
    e0 = energy_norm(transverse_field)
    assert abs(energy_norm(out) - e0) / e0 < 1e-11
    assert abs(divergence_residual(out)[1] - divergence_residual(transverse_field)[1]) < 1e-10


def test_group_property_and_sign_flip(transverse_field, units):
    f = transverse_field
    two_steps = spectral_propagate(spectral_propagate(f, 0.4, 1, units), 0.9, 1, units)
    one_step = spectral_propagate(f, 1.3, 1, units)
    assert np.max(np.abs(two_steps.F - one_step.F)) < 1e-11

    backward = spectral_propagate(f, -0.8, 1, units)
    flipped = spectral_propagate(f, 0.8, -1, units)
    assert np.max(np.abs(backward.F - flipped.F)) < 1e-11


def test_helicity_amplitudes_are_conserved(transverse_field, units):
    before = helicity_decompose(transverse_field)
    after = helicity_decompose(evolve_spectral(transverse_field, PropagationConfig(t_final=1.7), units))
    assert_allclose(np.abs(after.a_plus), np.abs(before.a_plus), atol=1e-10)
    assert_allclose(np.abs(after.a_minus), np.abs(before.a_minus), atol=1e-10)


def test_non_transverse_input_warns(cube, units, caplog):
    z = cube.coordinates()[..., 2]
    f = RSField(cube, np.exp(1j * z)[..., None] * np.array([0, 0, 1.0]))
    with caplog.at_level(logging.WARNING, logger="src.propagation.spectral"):
        out = evolve_spectral(f, PropagationConfig(t_final=1.0), units)
    assert "not transverse" in caplog.text
    # the longitudinal part does not evolve
    assert_allclose(out.F, f.F, atol=1e-12)


def test_dirac_residual_vanishes_for_the_evolution_law(transverse_field, units):
    dFdt = spectral_time_derivative(transverse_field, units)
    _, norm = dirac_residual(transverse_field, dFdt, units)
    assert norm < 1e-12
    _, wrong = dirac_residual(transverse_field, -dFdt, units)
    assert wrong > 1.0


# ── Finite differences ────────────────────────────────────────────────


def test_fd_zero_field_stays_zero(cube, units):
    zero = RSField(cube, np.zeros((*cube.shape, 3)))
    out = evolve_fd_maxwell(zero, PropagationConfig(t_final=1.0, method=Method.FINITE_DIFFERENCE), units)
    assert np.all(out.F == 0)


def test_cfl_violation_is_rejected(cube, units):
    limit = 0.5 * cube.dx / units.c
    with pytest.raises(CFLViolationError, match="stability limit"):
        stable_step(cube, units, 1.01 * limit)
    assert stable_step(cube, units, None) == pytest.approx(0.25 * cube.dx)


def test_fd_step_count_lands_on_t_final(cube, units):
    cfg = PropagationConfig(t_final=1.0, dt=0.3)
    assert fd_step_count(_circular(cube), cfg, units) == 4
    assert fd_step_count(_circular(cube), PropagationConfig(t_final=0.0), units) == 0


def _fd_error(n: int, t: float = 0.5) -> float:
    grid = Grid3.cube(n, length=2.0 * np.pi)
    units = UnitsConfig()
    waves = [PlaneWave(mode=(1, 0, 1), helicity=1)]
    f0 = synth_plane_waves(waves, grid, 0.0, 1, units)
    exact = synth_plane_waves(waves, grid, t, 1, units)
    out = evolve_fd_maxwell(f0, PropagationConfig(t_final=t, dt=0.05 * grid.dx), units)
    return relative_l2(out, exact)


def test_fd_is_second_order_in_space():
    ratio = _fd_error(16) / _fd_error(32)
    assert ratio == pytest.approx(4.0, rel=0.2)


def test_fd_is_fourth_order_in_time():
    grid = Grid3.cube(16, length=2.0 * np.pi)
    units = UnitsConfig()
    f0 = _circular(grid)
    # step sizes divide t_final exactly
    fine = evolve_fd_maxwell(f0, PropagationConfig(t_final=1.0, dt=0.005), units)
    coarse = evolve_fd_maxwell(f0, PropagationConfig(t_final=1.0, dt=0.125), units)
    half = evolve_fd_maxwell(f0, PropagationConfig(t_final=1.0, dt=0.0625), units)
    # RK4: halving dt shrinks the temporal error by about 16
    ratio = relative_l2(coarse, fine) / relative_l2(half, fine)
    assert ratio == pytest.approx(16.0, rel=0.25)


# ── Crosscheck ────────────────────────────────────────────────────────


def test_crosscheck_report_fields(transverse_field, units):
    report = crosscheck_report(transverse_field, PropagationConfig(t_final=0.5), units)
    assert report.spectral.method is Method.SPECTRAL
    assert report.finite_difference.method is Method.FINITE_DIFFERENCE
    assert report.spectral.energy_drift < 1e-11
    assert report.spectral.divergence_drift < 1e-10
    assert report.finite_difference.steps > 0
    assert report.discrepancy > 0


def _crosscheck(n: int, t_final: float = 0.5) -> CrosscheckReport:
    grid = Grid3.cube(n, length=2.0 * np.pi)
    f0 = random_transverse_field(grid, seed=3, max_mode=2)
    return crosscheck_report(f0, PropagationConfig(t_final=t_final))


def test_crosscheck_discrepancy_halves_quadratically():
    ratio = _crosscheck(16).discrepancy / _crosscheck(32).discrepancy
    assert ratio == pytest.approx(4.0, rel=0.2)


@pytest.mark.slow
def test_crosscheck_full_size():
    # two crossing times of the 2 pi box
    t_final = 4.0 * np.pi
    coarse, fine = _crosscheck(32, t_final), _crosscheck(64, t_final)
    assert fine.spectral.energy_drift < 1e-11
    assert fine.spectral.divergence_drift < 1e-10
    assert coarse.discrepancy / fine.discrepancy == pytest.approx(4.0, rel=0.2)
