from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.spatial.transform import Rotation

from src.fields.models import RSField, UnitsConfig
from src.fields.rs import energy_norm, transverse_project
from src.spin.algebra import helicity_basis, mode_hamiltonian_eigensystem, spin_matrices
from src.spin.helicity import helicity_compose, helicity_decompose
from src.spin.models import DegenerateModeError


def test_spin_matrix_entries():
    s = spin_matrices()
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 1] = -1j
    expected[1, 0] = 1j
    assert_allclose(s.sz, expected)


def test_spin_algebra():
    s = spin_matrices()
    assert_allclose(s.sx @ s.sy - s.sy @ s.sx, 1j * s.sz, atol=1e-15)
    assert_allclose(s.sy @ s.sz - s.sz @ s.sy, 1j * s.sx, atol=1e-15)
    assert_allclose(s.sz @ s.sx - s.sx @ s.sz, 1j * s.sy, atol=1e-15)
    assert_allclose(s.sx @ s.sx + s.sy @ s.sy + s.sz @ s.sz, 2 * np.eye(3), atol=1e-15)
    for m in (s.sx, s.sy, s.sz):
        assert_allclose(m, m.conj().T)


def test_spin_projection_spectrum_and_minimal_polynomial(rng):
    s = spin_matrices()
    for _ in range(20):
        n = rng.standard_normal(3)
        n /= np.linalg.norm(n)
        sn = s.dot(n)
        assert_allclose(np.sort(np.linalg.eigvalsh(sn)), [-1.0, 0.0, 1.0], atol=1e-13)
        assert np.max(np.abs(sn @ sn @ sn - sn)) < 1e-13


def test_eigensystem_along_z():
    ham, pairs = mode_hamiltonian_eigensystem(np.array([0.0, 0.0, 1.0]), 1, UnitsConfig())
    assert [p.eigenvalue for p in pairs] == pytest.approx([1.0, 0.0, -1.0])
    assert [p.helicity for p in pairs] == [1, 0, -1]
    assert_allclose(pairs[0].vector, np.array([1, 1j, 0]) / np.sqrt(2), atol=1e-15)
    assert np.max(np.abs(ham.matrix - ham.matrix.conj().T)) < 1e-13


@pytest.mark.parametrize("sign", [1, -1])
def test_eigenpairs_solve_the_hamiltonian(rng, sign):
    units = UnitsConfig(c=2.5)
    for _ in range(1000):
        k = rng.standard_normal(3)
        ham, pairs = mode_hamiltonian_eigensystem(k, sign, units)
        kmag = np.linalg.norm(k)
        assert [p.eigenvalue for p in pairs] == pytest.approx([units.c * kmag, 0.0, -units.c * kmag])
        for p in pairs:
            assert np.max(np.abs(ham.matrix @ p.vector - p.eigenvalue * p.vector)) < 1e-12 * max(1, kmag)
            assert p.energy >= 0
        zero = pairs[1].vector.real
        assert np.linalg.norm(np.cross(zero, k / kmag)) < 1e-12
        basis = np.stack([p.vector for p in pairs])
        assert_allclose(basis.conj() @ basis.T, np.eye(3), atol=1e-12)


def test_zero_wavevector_is_rejected():
    with pytest.raises(DegenerateModeError):
        mode_hamiltonian_eigensystem(np.zeros(3), 1, UnitsConfig())


def test_helicity_basis_south_pole_and_rotation(rng):
    e_plus, e_minus, khat = helicity_basis(np.array([0.0, 0.0, -2.0]))
    assert_allclose(khat, [0, 0, -1])
    assert_allclose(e_plus, np.array([1, -1j, 0]) / np.sqrt(2), atol=1e-15)
    assert_allclose(e_minus, np.conj(e_plus))

    for _ in range(50):
        k = rng.standard_normal(3)
        R = Rotation.random(None, rng).as_matrix()
        moved, _, _ = helicity_basis(R @ k)
        original, _, _ = helicity_basis(k)
        assert abs(abs(np.vdot(moved, R @ original)) - 1.0) < 1e-10


def test_decompose_circular_wave(cube):
    z = cube.coordinates()[..., 2]
    F = np.exp(1j * z)[..., None] * np.array([1, 1j, 0]) / np.sqrt(2)
    spectrum = helicity_decompose(RSField(cube, F))
    energy = energy_norm(RSField(cube, F))
    assert abs(spectrum.a_plus[0, 0, 1]) ** 2 == pytest.approx(energy, rel=1e-10)
    assert np.max(np.abs(spectrum.a_minus)) < 1e-10
    assert np.max(np.abs(spectrum.a_zero)) < 1e-10


def test_decompose_longitudinal_wave(cube):
    z = cube.coordinates()[..., 2]
    F = np.exp(2j * z)[..., None] * np.array([0, 0, 1.0])
    spectrum = helicity_decompose(RSField(cube, F))
    assert np.sum(np.abs(spectrum.a_zero) ** 2) == pytest.approx(energy_norm(RSField(cube, F)), rel=1e-10)
    assert np.max(np.abs(spectrum.a_plus)) < 1e-10


def test_parseval_and_compose(cube, rng):
    shape = (*cube.shape, 3)
    f = RSField(cube, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    spectrum = helicity_decompose(f)
    assert spectrum.total_energy() == pytest.approx(energy_norm(f), rel=1e-10)

    projected = transverse_project(f)
    assert np.max(np.abs(helicity_decompose(projected).a_zero)) < 1e-10
    assert_allclose(helicity_compose(helicity_decompose(projected)).F, projected.F, atol=1e-12)
