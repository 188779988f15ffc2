from __future__ import annotations

import itertools

import numpy as np
import pytest

import src.lattice.action as action_module
from src.lattice.action import (
    assemble_first_order_action,
    doubled_sector_signature,
    euler_lagrange_residuals,
    lattice_momentum,
    reduced_action,
    reduced_residual_A,
    summation_by_parts_terms,
)
from src.lattice.gradient import GradientTarget, functional_gradient_check
from src.lattice.models import (
    ActionConfig,
    ContinuityError,
    CurrentField,
    FieldStrengthVar,
    GaugeField,
    Lattice4,
    LatticeFields,
    LatticeMismatchError,
)
from src.lattice.operators import (
    bianchi_defect,
    conserved_current,
    field_strength,
    gauge_transform,
    lattice_poisson_potential,
)

ETA_DIAG = (1.0, -1.0, -1.0, -1.0)


@pytest.fixture
def lattice() -> Lattice4:
    return Lattice4.hypercube(4, a=0.7)


@pytest.fixture
def fields(lattice, rng):
    A = GaugeField(lattice, rng.standard_normal((*lattice.shape, 4)))
    F = FieldStrengthVar(lattice, rng.standard_normal((*lattice.shape, 6)))
    j = conserved_current(lattice, rng)
    return A, F, j


def _brute_force_reduced_action(A: GaugeField, j: CurrentField) -> float:
    """Site-by-site loop over a^4 [G^{mu nu} G_{mu nu} / 2 + A_mu j^mu]."""
    lat = A.lattice
    shape = np.array(lat.shape)
    total = 0.0
    for site in itertools.product(*(range(n) for n in lat.shape)):
        x = np.array(site)

        def value(mu: int, step: int) -> float:
            shifted = x.copy()
            if step >= 0:
                shifted[step] = (shifted[step] + 1) % shape[step]
            return A.values[tuple(shifted)][mu]

        density = 0.0
        for m in range(4):
            for n in range(4):
                if m == n:
                    continue
                g = 0.5 * ((value(n, m) - value(n, -1)) - (value(m, n) - value(m, -1))) / lat.a
                density += 0.5 * ETA_DIAG[m] * ETA_DIAG[n] * g * g
        density += float(np.dot(A.values[site], j.values[site]))
        total += lat.site_volume * density
    return total


# ── Models ────────────────────────────────────────────────────────────


def test_rejects_shape_and_lattice_mismatch(lattice, rng):
    with pytest.raises(LatticeMismatchError):
        GaugeField(lattice, np.zeros((4, 4, 4, 4, 3)))
    other = Lattice4.hypercube(3)
    with pytest.raises(LatticeMismatchError):
        assemble_first_order_action(GaugeField.zeros(lattice), FieldStrengthVar.zeros(other), CurrentField.zeros(lattice))


def test_current_must_be_conserved(lattice, rng):
    with pytest.raises(ContinuityError):
        CurrentField(lattice, rng.standard_normal((*lattice.shape, 4)))
    # static uniform charge is conserved
    values = np.zeros((*lattice.shape, 4))
    values[..., 0] = 2.0
    CurrentField(lattice, values)


# ── First-order action ────────────────────────────────────────────────


def test_zero_potential_and_current(lattice, rng):
    F = FieldStrengthVar(lattice, rng.standard_normal((*lattice.shape, 6)))
    zero_A, zero_j = GaugeField.zeros(lattice), CurrentField.zeros(lattice)
    assert assemble_first_order_action(zero_A, FieldStrengthVar.zeros(lattice), zero_j) == 0.0
    assert reduced_action(zero_A, conserved_current(lattice, rng)) == 0.0
    # with A = 0 only the F.F term survives
    assert assemble_first_order_action(zero_A, F, zero_j) != 0.0


def test_constant_electric_component(lattice):
    f = 1.3
    values = np.zeros((*lattice.shape, 6))
    values[..., 0] = f
    F = FieldStrengthVar(lattice, values)
    action = assemble_first_order_action(GaugeField.zeros(lattice), F, CurrentField.zeros(lattice))
    # -1/2 (F^{01} F_{01} + F^{10} F_{10}) = f^2 per site
    expected = lattice.site_volume * np.prod(lattice.shape) * f**2
    assert action == pytest.approx(expected, rel=1e-13)


def test_reduced_action_matches_site_loop(rng):
    lat = Lattice4.hypercube(3, a=0.9)
    A = GaugeField(lat, rng.standard_normal((*lat.shape, 4)))
    j = conserved_current(lat, rng)
    assert reduced_action(A, j) == pytest.approx(_brute_force_reduced_action(A, j), rel=1e-12)


def test_summation_by_parts(fields):
    A, F, _ = fields
    lhs, rhs = summation_by_parts_terms(A, F)
    assert abs(lhs - rhs) < 1e-11 * max(1.0, abs(lhs))


def test_stationary_field_strength(fields):
    A, _, j = fields
    G = field_strength(A)
    residual_F, residual_A = euler_lagrange_residuals(A, G, j)
    assert np.max(np.abs(residual_F)) < 1e-12
    assert np.max(np.abs(residual_A - reduced_residual_A(A, j))) < 1e-10
    assert reduced_action(A, j) == pytest.approx(assemble_first_order_action(A, G, j), rel=1e-11)


def test_field_strength_residual_is_nonzero_away_from_stationarity(fields):
    A, F, j = fields
    residual_F, _ = euler_lagrange_residuals(A, F, j)
    assert np.max(np.abs(residual_F)) > 0.1


# ── Gauge invariance and identities ───────────────────────────────────


def test_gauge_invariance_with_conserved_current(fields, lattice, rng):
    A, _, j = fields
    gauge = rng.standard_normal(lattice.shape)
    shifted = gauge_transform(A, gauge)
    assert abs(reduced_action(shifted, j) - reduced_action(A, j)) < 1e-10


def test_gauge_change_tracks_continuity_violation(fields, lattice, rng):
    A, _, j = fields
    gauge = rng.standard_normal(lattice.shape)
    shifted = gauge_transform(A, gauge)
    defect = rng.standard_normal((*lattice.shape, 4))

    def change(delta: float) -> float:
        leaky = CurrentField(lattice, j.values + delta * defect, enforce_continuity=False)
        return reduced_action(shifted, leaky) - reduced_action(A, leaky)

    small, large = change(1e-3), change(2e-3)
    assert abs(small) > 1e-8
    assert large / small == pytest.approx(2.0, rel=1e-5)


def test_discrete_bianchi_identity(fields):
    A, F, _ = fields
    assert np.max(np.abs(bianchi_defect(field_strength(A)))) < 1e-12
    # a generic F is not a curl
    assert np.max(np.abs(bianchi_defect(F))) > 0.1


def test_static_charge_solves_poisson(rng):
    lat = Lattice4(n0=2, n1=6, n2=5, n3=4, a=0.5)
    j0 = rng.standard_normal(lat.shape[1:])
    j0 -= j0.mean()
    potential = lattice_poisson_potential(j0, lat)
    assert abs(potential.mean()) < 1e-12

    A = np.zeros((*lat.shape, 4))
    A[..., 0] = potential[None]
    j = np.zeros((*lat.shape, 4))
    j[..., 0] = j0[None]
    _, residual_A = euler_lagrange_residuals(
        GaugeField(lat, A), field_strength(GaugeField(lat, A)), CurrentField(lat, j)
    )
    assert np.max(np.abs(residual_A)) < 1e-9


def test_poisson_rejects_net_charge():
    lat = Lattice4.hypercube(4)
    with pytest.raises(ValueError, match="zero mean"):
        lattice_poisson_potential(np.ones(lat.shape[1:]), lat)
    with pytest.raises(LatticeMismatchError):
        lattice_poisson_potential(np.zeros((3, 3, 3)), lat)


def _plane_wave_residual(lat: Lattice4, k: np.ndarray, polarization: np.ndarray) -> float:
    """Max |residual_A| of a source-free plane wave eps_mu cos(k.x)."""
    phase = lat.coordinates() @ (k * np.array(ETA_DIAG))
    A = GaugeField(lat, np.cos(phase)[..., None] * polarization)
    _, residual_A = euler_lagrange_residuals(A, field_strength(A), CurrentField.zeros(lat))
    return float(np.max(np.abs(residual_A)))


def test_plane_wave_residual_is_second_order():
    # null k = (5; 3, 0, 4) on a 2 pi box; y polarization is in Lorenz gauge
    k = np.array([5.0, 3.0, 0.0, 4.0])
    eps = np.array([0.0, 0.0, 1.0, 0.0])

    def residual(n: int) -> float:
        a = 2.0 * np.pi / n
        return _plane_wave_residual(Lattice4(n0=n, n1=n, n2=2, n3=n, a=a), k, eps)

    ratio = residual(16) / residual(32)
    assert ratio == pytest.approx(4.0, rel=0.2)


@pytest.mark.slow
def test_plane_wave_residual_is_second_order_in_four_dimensions():
    k = np.array([3.0, 2.0, 1.0, 2.0])
    eps = np.array([0.0, 1.0, 0.0, -1.0])

    def residual(n: int) -> float:
        return _plane_wave_residual(Lattice4.hypercube(n, a=2.0 * np.pi / n), k, eps)

    ratio = residual(16) / residual(32)
    assert ratio == pytest.approx(4.0, rel=0.1)


# ── Doubled fields ────────────────────────────────────────────────────


def test_doubled_sector_signature(rng):
    assert doubled_sector_signature(lattice_momentum((1, 2, 0, 3), Lattice4.hypercube(8))) == (1, -1)
    lat = Lattice4.hypercube(4, a=0.8)
    for _ in range(10):
        mode = rng.integers(0, 4, size=4)
        if mode.any():
            assert doubled_sector_signature(lattice_momentum(mode, lat), lat) == (1, -1)


def test_doubled_sector_signature_on_the_light_cone():
    # E and B parts of the transverse polarizations cancel, the longitudinal ones do not
    lat = Lattice4.hypercube(6)
    assert doubled_sector_signature(lattice_momentum((1, 1, 0, 0), lat), lat) == (1, -1)


def test_doubled_sector_signature_reads_the_doubled_action(monkeypatch):
    lat = Lattice4.hypercube(4)
    k = lattice_momentum((1, 0, 2, 1), lat)
    original = action_module.doubled_action
    monkeypatch.setattr(action_module, "doubled_action", lambda *args: -original(*args))
    assert doubled_sector_signature(k, lat) == (-1, 1)


def test_doubled_sector_rejects_bad_momenta():
    lat = Lattice4.hypercube(4)
    with pytest.raises(ValueError, match="zero mode"):
        doubled_sector_signature(np.zeros(4), lat)
    with pytest.raises(ValueError, match="zero mode"):
        doubled_sector_signature(lattice_momentum((4, 0, -4, 0), lat), lat)
    with pytest.raises(ValueError, match="not periodic"):
        doubled_sector_signature(np.array([0.3, 0.7, -0.2, 1.1]), lat)
    with pytest.raises(ValueError, match="4 components"):
        doubled_sector_signature(np.zeros(3), lat)


def test_auxiliary_field_drops_out(fields, lattice, rng):
    A, _, j = fields
    B = GaugeField(lattice, rng.standard_normal((*lattice.shape, 4)))
    A_tilde = GaugeField(lattice, rng.standard_normal((*lattice.shape, 4)))
    check = functional_gradient_check(
        GradientTarget.DOUBLED_B,
        LatticeFields(A=A, j=j, B=B, A_tilde=A_tilde),
        rng.standard_normal((*lattice.shape, 4)),
    )
    assert abs(check.analytic) < 1e-11
    assert check.absolute_error < 1e-9


# ── Gradient checks ───────────────────────────────────────────────────


def test_reduced_action_gradient(fields, lattice, rng):
    A, _, j = fields
    check = functional_gradient_check(
        GradientTarget.REDUCED_A, LatticeFields(A=A, j=j), rng.standard_normal((*lattice.shape, 4))
    )
    assert check.relative_error < 1e-6


def test_first_order_action_gradients(fields, lattice, rng):
    A, F, j = fields
    bundle = LatticeFields(A=A, j=j, F=F)
    check_F = functional_gradient_check("first_order:F", bundle, rng.standard_normal((*lattice.shape, 6)))
    assert check_F.relative_error < 1e-10
    check_A = functional_gradient_check("first_order:A", bundle, rng.standard_normal((*lattice.shape, 4)))
    assert check_A.relative_error < 1e-6


def test_gradient_check_without_the_l0_term(fields, lattice, rng):
    A, F, j = fields
    bundle = LatticeFields(A=A, j=j, F=F, config=ActionConfig(include_l0=False))
    check = functional_gradient_check(GradientTarget.FIRST_ORDER_A, bundle, rng.standard_normal((*lattice.shape, 4)))
    assert check.relative_error < 1e-6


def test_gradient_check_validates_inputs(fields, lattice):
    A, _, j = fields
    with pytest.raises(ValueError, match="needs fields: F"):
        functional_gradient_check(GradientTarget.FIRST_ORDER_F, LatticeFields(A=A, j=j), np.zeros((*lattice.shape, 6)))
    with pytest.raises(ValueError, match="direction has shape"):
        functional_gradient_check(GradientTarget.REDUCED_A, LatticeFields(A=A, j=j), np.zeros((*lattice.shape, 6)))
