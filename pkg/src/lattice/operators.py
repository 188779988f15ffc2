from __future__ import annotations

import numpy as np
import scipy.fft

from src.config import get_settings
from src.covariant.algebra import epsilon_spinor
from src.lattice.models import (
    PAIRS,
    CurrentField,
    FieldStrengthVar,
    GaugeField,
    Lattice4,
    LatticeMismatchError,
)

# g_{mu nu} = eta^{mu mu} eta^{nu nu} for each stored pair
PAIR_METRIC = np.array([-1.0 if m == 0 else 1.0 for m, _ in PAIRS])
# eta^{mu mu}
METRIC_DIAGONAL = np.array([1.0, -1.0, -1.0, -1.0])


def same_lattice(*fields) -> Lattice4:
    lattices = {f.lattice for f in fields if f is not None}
    if len(lattices) != 1:
        raise LatticeMismatchError(f"fields live on {len(lattices)} different lattices")
    return lattices.pop()


def forward_diff(values: np.ndarray, mu: int, a: float) -> np.ndarray:
    return (np.roll(values, -1, axis=mu) - values) / a


def backward_diff(values: np.ndarray, mu: int, a: float) -> np.ndarray:
    """Minus the adjoint of forward_diff under the periodic site sum."""
    return (values - np.roll(values, 1, axis=mu)) / a


def field_strength(A: GaugeField) -> FieldStrengthVar:
    """G_{mu nu} = (d_mu A_nu - d_nu A_mu) / 2 with forward differences."""
    a = A.lattice.a
    comps = [
        0.5 * (forward_diff(A.values[..., n], m, a) - forward_diff(A.values[..., m], n, a))
        for m, n in PAIRS
    ]
    return FieldStrengthVar(A.lattice, np.stack(comps, axis=-1))


def contract(X: FieldStrengthVar, Y: FieldStrengthVar) -> np.ndarray:
    """Per-site X^{mu nu} Y_{mu nu}, both antisymmetric orderings counted."""
    return 2.0 * np.sum(PAIR_METRIC * X.values * Y.values, axis=-1)


def tensor_divergence(X: FieldStrengthVar) -> np.ndarray:
    """sum_mu d*_mu (g_{mu nu} X_{mu nu}) per site, shape (..., 4)."""
    a = X.lattice.a
    full = X.full()
    weights = METRIC_DIAGONAL[:, None] * METRIC_DIAGONAL[None, :]
    out = np.zeros((*X.lattice.shape, 4))
    for nu in range(4):
        for mu in range(4):
            if mu != nu:
                out[..., nu] += backward_diff(weights[mu, nu] * full[..., mu, nu], mu, a)
    return out


def current_divergence(j: CurrentField) -> np.ndarray:
    a = j.lattice.a
    return sum(backward_diff(j.values[..., mu], mu, a) for mu in range(4))


def bianchi_defect(X: FieldStrengthVar) -> np.ndarray:
    """eps^{mu nu rho sigma} d_nu X_{rho sigma} per site, shape (..., 4)."""
    eps = epsilon_spinor().four_up
    a = X.lattice.a
    full = X.full()
    grads = np.stack([forward_diff(full, nu, a) for nu in range(4)], axis=-3)
    return np.einsum("mnrs,...nrs->...m", eps, grads)


def gauge_transform(A: GaugeField, gauge: np.ndarray) -> GaugeField:
    """A_mu + d_mu lambda for a scalar lambda per site."""
    a = A.lattice.a
    shift = np.stack([forward_diff(gauge, mu, a) for mu in range(4)], axis=-1)
    return A.with_values(A.values + shift)


def conserved_current(lattice: Lattice4, rng: np.random.Generator, scale: float = 1.0) -> CurrentField:
    """j^mu = sum_nu d*_nu M^{mu nu} for a random antisymmetric M; divergence-free."""
    M = FieldStrengthVar(lattice, scale * rng.standard_normal((*lattice.shape, 6))).full()
    values = np.zeros((*lattice.shape, 4))
    for mu in range(4):
        for nu in range(4):
            if mu != nu:
                values[..., mu] += backward_diff(M[..., mu, nu], nu, lattice.a)
    return CurrentField(lattice, values)


def lattice_poisson_potential(j0: np.ndarray, lattice: Lattice4, coupling: float = 1.0) -> np.ndarray:
    """Static A_0 on the spatial lattice solving sum_i d*_i d_i A_0 = -2 j0 / coupling.

    ``j0`` has shape (n1, n2, n3) and must have zero mean; the returned
    potential has zero mean as well.
    """
    j0 = np.asarray(j0, dtype=np.float64)
    if j0.shape != lattice.shape[1:]:
        raise LatticeMismatchError(f"j0 has shape {j0.shape}, expected {lattice.shape[1:]}")
    if abs(j0.mean()) > 1e-12 * max(1.0, float(np.max(np.abs(j0)))):
        raise ValueError("a static charge density on a periodic lattice must have zero mean")
    a = lattice.a
    ks = np.meshgrid(
        *(2.0 * np.pi * scipy.fft.fftfreq(n, d=a) for n in lattice.shape[1:]), indexing="ij"
    )
    symbol = -sum((4.0 / a**2) * np.sin(k * a / 2.0) ** 2 for k in ks)
    workers = get_settings().threads
    rhs = scipy.fft.fftn(-2.0 * j0 / coupling, workers=workers)
    safe = np.where(symbol == 0, 1.0, symbol)
    potential_k = np.where(symbol == 0, 0.0, rhs / safe)
    return scipy.fft.ifftn(potential_k, workers=workers).real
