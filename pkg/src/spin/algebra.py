from __future__ import annotations

import numpy as np

from src.fields.models import UnitsConfig
from src.spin.models import DegenerateModeError, Eigenpair, ModeHamiltonian, SpinMatrices

LEVI_CIVITA_3 = np.zeros((3, 3, 3))
LEVI_CIVITA_3[0, 1, 2] = LEVI_CIVITA_3[1, 2, 0] = LEVI_CIVITA_3[2, 0, 1] = 1.0
LEVI_CIVITA_3[0, 2, 1] = LEVI_CIVITA_3[2, 1, 0] = LEVI_CIVITA_3[1, 0, 2] = -1.0


def spin_matrices() -> SpinMatrices:
    """(s_k)_ij = -i eps_kij, so that (s . k) v = i k x v."""
    s = -1j * LEVI_CIVITA_3
    return SpinMatrices(sx=s[0].copy(), sy=s[1].copy(), sz=s[2].copy())


def helicity_basis(k: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (e_plus, e_minus, khat) for an array of wavevectors (..., 3).

    e_plus(k) is (x + iy)/sqrt(2) carried from z to khat by the minimal
    rotation; for khat = -z the rotation is by pi about x. e_minus is the
    complex conjugate. Zero wavevectors are assigned khat = z.
    """
    k = np.asarray(k, dtype=float)
    kmag = np.linalg.norm(k, axis=-1)
    n = np.where(kmag[..., None] > 0, k / np.where(kmag > 0, kmag, 1.0)[..., None], 0.0)
    n[kmag == 0] = (0.0, 0.0, 1.0)
    nx, ny, nz = n[..., 0], n[..., 1], n[..., 2]

    # 1/(1 + nz) without cancellation in the southern hemisphere
    rho2 = nx * nx + ny * ny
    antipodal = (rho2 == 0) & (nz < 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(nz >= 0, 1.0 / (1.0 + nz), (1.0 - nz) / np.where(rho2 > 0, rho2, 1.0))

    u = np.stack([1.0 - nx * nx * q, -nx * ny * q, -nx], axis=-1)
    w = np.stack([-nx * ny * q, 1.0 - ny * ny * q, -ny], axis=-1)
    u[antipodal] = (1.0, 0.0, 0.0)
    w[antipodal] = (0.0, -1.0, 0.0)

    e_plus = (u + 1j * w) / np.sqrt(2.0)
    return e_plus, np.conj(e_plus), n


def mode_hamiltonian_eigensystem(
    k: np.ndarray,
    sign: int,
    units: UnitsConfig,
) -> tuple[ModeHamiltonian, list[Eigenpair]]:
    """Hamiltonian sign * c * (s . k) for one mode and its eigenpairs.

    Eigenpairs are ordered by eigenvalue: +c|k|, 0, -c|k|.
    """
    k = np.asarray(k, dtype=float)
    kmag = float(np.linalg.norm(k))
    if kmag == 0:
        raise DegenerateModeError("k = 0 has no helicity basis; project it out first")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")

    matrix = sign * units.c * spin_matrices().dot(k)
    e_plus, e_minus, khat = helicity_basis(k)
    energy = units.c * kmag

    plus = Eigenpair(sign * energy, e_plus, helicity=1, energy=energy)
    minus = Eigenpair(-sign * energy, e_minus, helicity=-1, energy=energy)
    zero = Eigenpair(0.0, khat.astype(np.complex128), helicity=0, energy=0.0)
    pairs = [plus, zero, minus] if sign == 1 else [minus, zero, plus]
    return ModeHamiltonian(k=k, sign=sign, matrix=matrix), pairs
