from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.fields.models import Grid3, GridMismatchError, RealEMField, RSField, UnitsConfig
from src.fields.rs import (
    divergence_residual,
    em_from_rs,
    energy_inner,
    energy_norm,
    mode_energy_norm,
    position_operator_leakage,
    rs_from_em,
    transverse_project,
)
from src.fields.sources import PlaneWave, plane_wave_values, random_transverse_field, synth_plane_waves
from src.spin.algebra import helicity_basis


def _const(grid: Grid3, vec) -> np.ndarray:
    return np.broadcast_to(np.asarray(vec), (*grid.shape, 3)).copy()


def _along_z(grid: Grid3, vec, k: float = 1.0) -> np.ndarray:
    z = grid.coordinates()[..., 2]
    return np.exp(1j * k * z)[..., None] * np.asarray(vec, dtype=np.complex128)


# ── Models ────────────────────────────────────────────────────────────


def test_grid_rejects_small_or_flat():
    with pytest.raises(ValueError):
        Grid3(nx=1, ny=4, nz=4)
    with pytest.raises(ValueError):
        Grid3(nx=4, ny=4, nz=4, dx=0.0)


def test_rsfield_rejects_wrong_shape(cube):
    with pytest.raises(GridMismatchError):
        RSField(grid=cube, F=np.zeros((4, 4, 4, 3)))
    with pytest.raises(ValueError):
        RSField(grid=cube, F=np.zeros((*cube.shape, 3)), helicity_sign=0)


def test_units_must_be_positive():
    with pytest.raises(ValueError):
        UnitsConfig(c=0.0)


# ── RS conversions ────────────────────────────────────────────────────


def test_rs_from_em_definitions(unit_grid):
    units = UnitsConfig(c=3.0)
    em = RealEMField(unit_grid, E=_const(unit_grid, (3.0, 0, 0)), B=np.zeros((*unit_grid.shape, 3)))
    assert_allclose(rs_from_em(em, 1, units).F, _const(unit_grid, (1.0, 0, 0)))

    em = RealEMField(unit_grid, E=np.zeros((*unit_grid.shape, 3)), B=_const(unit_grid, (0, 0, 1.0)))
    f = rs_from_em(em, 1, UnitsConfig())
    assert_allclose(f.F, _const(unit_grid, (0, 0, 1j)))
    assert f.helicity_sign == 1


def test_em_from_rs_examples(unit_grid):
    units = UnitsConfig(c=2.0)
    em = em_from_rs(RSField(unit_grid, _const(unit_grid, (1j, 0, 0))), units)
    assert_allclose(em.E, 0.0)
    assert_allclose(em.B, _const(unit_grid, (1.0, 0, 0)))

    em = em_from_rs(RSField(unit_grid, _const(unit_grid, (1, 1j, 0)), helicity_sign=-1), units)
    assert_allclose(em.E, _const(unit_grid, (2.0, 0, 0)))
    assert_allclose(em.B, _const(unit_grid, (0, -1.0, 0)))


@pytest.mark.parametrize("sign", [1, -1])
def test_rs_em_round_trip(cube, rng, sign):
    units = UnitsConfig(c=1.7)
    shape = (*cube.shape, 3)
    em = RealEMField(cube, E=rng.standard_normal(shape), B=rng.standard_normal(shape))
    back = em_from_rs(rs_from_em(em, sign, units), units)
    assert np.max(np.abs(back.E - em.E)) < 1e-13 * 10
    assert np.max(np.abs(back.B - em.B)) < 1e-13


def test_negative_branch_plane_wave_has_no_positive_helicity(cube):
    # E = x cos(kz), B = y cos(kz) / c; the sign - branch pairs with e- for k along +z
    units = UnitsConfig()
    z = cube.coordinates()[..., 2]
    E = np.zeros((*cube.shape, 3))
    B = np.zeros((*cube.shape, 3))
    E[..., 0] = np.cos(z)
    B[..., 1] = np.cos(z)
    f = rs_from_em(RealEMField(cube, E, B), -1, units)
    assert_allclose(f.F[..., 0], np.cos(z))
    assert_allclose(f.F[..., 1], -1j * np.cos(z))

    e_plus, _, _ = helicity_basis(np.array([0.0, 0.0, 1.0]))
    forward = np.sum(np.conj(e_plus) * f.F * np.exp(-1j * z)[..., None])
    assert abs(forward) < 1e-10


def test_rs_from_em_rejects_bad_sign(unit_grid):
    em = RealEMField(unit_grid, np.zeros((*unit_grid.shape, 3)), np.zeros((*unit_grid.shape, 3)))
    with pytest.raises(ValueError):
        rs_from_em(em, 0, UnitsConfig())


# ── Transversality ────────────────────────────────────────────────────


def test_divergence_of_transverse_and_longitudinal_waves(cube):
    transverse = RSField(cube, _along_z(cube, (1, 1j, 0)))
    assert divergence_residual(transverse)[1] < 1e-12

    longitudinal = RSField(cube, _along_z(cube, (0, 0, 1)))
    div, _ = divergence_residual(longitudinal)
    z = cube.coordinates()[..., 2]
    assert_allclose(div, 1j * np.exp(1j * z), atol=1e-12)


def test_transverse_project_examples(cube):
    assert np.max(np.abs(transverse_project(RSField(cube, _along_z(cube, (0, 0, 1)))).F)) < 1e-12
    wave = _along_z(cube, (1, 1j, 0))
    assert_allclose(transverse_project(RSField(cube, wave)).F, wave, atol=1e-12)


def test_transverse_project_is_idempotent_and_self_adjoint(cube, rng):
    shape = (*cube.shape, 3)
    f = RSField(cube, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    g = RSField(cube, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    pf = transverse_project(f)
    assert np.max(np.abs(transverse_project(pf).F - pf.F)) < 1e-12
    assert divergence_residual(pf)[1] < 1e-10
    lhs = energy_inner(pf, g)
    rhs = energy_inner(f, transverse_project(g))
    assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


def test_position_operator_leaves_transverse_subspace(transverse_field):
    assert divergence_residual(transverse_field)[1] < 1e-10
    assert position_operator_leakage(transverse_field, axis=0) > 0.1


# ── Energy ────────────────────────────────────────────────────────────


def test_energy_norm_examples(unit_grid, cube, rng):
    assert energy_norm(RSField(unit_grid, np.zeros((*unit_grid.shape, 3)))) == 0.0
    assert energy_norm(RSField(unit_grid, _const(unit_grid, (1, 0, 0)))) == pytest.approx(1.0)

    shape = (*cube.shape, 3)
    f = RSField(cube, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    assert mode_energy_norm(f) == pytest.approx(energy_norm(f), rel=1e-10)
    assert energy_norm(f) > 0


# ── Sources ───────────────────────────────────────────────────────────


def test_plane_wave_synthesis_matches_pointwise_evaluation(cube):
    waves = [PlaneWave(mode=(1, 0, 1), helicity=1), PlaneWave(mode=(0, -2, 1), helicity=-1, amplitude=0.5)]
    f = synth_plane_waves(waves, cube, t=0.3)
    direct = plane_wave_values(waves, cube, cube.coordinates(), t=0.3)
    assert_allclose(f.F, direct, atol=1e-12)
    assert divergence_residual(f)[1] < 1e-10


def test_plane_wave_rejects_unresolved_mode(cube):
    with pytest.raises(ValueError, match="not resolved"):
        synth_plane_waves([PlaneWave(mode=(4, 0, 0))], cube)


def test_random_transverse_field_is_grid_independent():
    coarse = random_transverse_field(Grid3.cube(8, 2 * np.pi), seed=5, max_mode=2)
    fine = random_transverse_field(Grid3.cube(16, 2 * np.pi), seed=5, max_mode=2)
    assert_allclose(fine.F[::2, ::2, ::2], coarse.F, atol=1e-12)
    assert divergence_residual(fine)[1] < 1e-10
