from __future__ import annotations

import itertools

import numpy as np
import scipy.linalg

from src.covariant.models import EpsilonSpinor, FourVector, LorentzMatrix, SigmaSet, SL2C

# ── Constants ─────────────────────────────────────────────────────────

ETA = np.diag([1.0, -1.0, -1.0, -1.0])

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

_IDENTITY2 = np.eye(2, dtype=np.complex128)


def minkowski_metric() -> np.ndarray:
    return ETA.copy()


def sigma_set() -> SigmaSet:
    sigma = np.concatenate([_IDENTITY2[None], PAULI])
    sigma_bar = np.concatenate([_IDENTITY2[None], -PAULI])
    return SigmaSet(sigma=sigma, sigma_bar=sigma_bar)


def _levi_civita_4() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inversions = sum(1 for i, j in itertools.combinations(range(4), 2) if perm[i] > perm[j])
        eps[perm] = -1.0 if inversions % 2 else 1.0
    return eps


def epsilon_spinor() -> EpsilonSpinor:
    up = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=np.complex128)
    four_up = _levi_civita_4()
    # lowering all four indices with diag(1,-1,-1,-1) flips the sign
    return EpsilonSpinor(up=up, low=-up, four_up=four_up, four_low=-four_up)


def raise_index(psi: np.ndarray) -> np.ndarray:
    """psi^a = eps^{ab} psi_b."""
    return epsilon_spinor().up @ psi


def lower_index(psi: np.ndarray) -> np.ndarray:
    """psi_a = eps_{ab} psi^b; inverse of raise_index."""
    return epsilon_spinor().low @ psi


# ── Four-vectors and SL(2,C) ──────────────────────────────────────────


def hermitian_map(x: FourVector | np.ndarray) -> tuple[np.ndarray, float]:
    """x-bar = x^0 I + x^i sigma_i, and its determinant (the interval)."""
    comps = x.components if isinstance(x, FourVector) else FourVector(x).components
    xbar = np.tensordot(comps, sigma_set().sigma, axes=(0, 0))
    return xbar, float(np.linalg.det(xbar).real)


def vector_from_hermitian(xbar: np.ndarray) -> np.ndarray:
    """Inverse of hermitian_map: x^mu = Re tr(sigma_mu x-bar) / 2."""
    sigma = sigma_set().sigma
    return np.array([np.trace(sigma[mu] @ xbar).real / 2.0 for mu in range(4)])


def lorentz_from_sl2c(A: SL2C | np.ndarray) -> LorentzMatrix:
    """Lambda with hermitian_map(Lambda x) = A hermitian_map(x) A^dagger.

    Columns are read off by sending each basis four-vector through the map;
    A and -A give the same Lambda.
    """
    a = A.matrix if isinstance(A, SL2C) else SL2C(A).matrix
    a_dag = a.conj().T
    sigma = sigma_set().sigma
    columns = [vector_from_hermitian(a @ sigma[mu] @ a_dag) for mu in range(4)]
    return LorentzMatrix(np.stack(columns, axis=1))


def random_sl2c(rng: np.random.Generator, scale: float = 0.5, unitary: bool = False) -> SL2C:
    """exp of a random traceless generator; ``unitary`` restricts to rotations."""
    theta = rng.normal(scale=scale, size=3)
    if unitary:
        generator = 0.5j * np.tensordot(theta, PAULI, axes=(0, 0))
    else:
        rapidity = rng.normal(scale=scale, size=3)
        generator = 0.5 * np.tensordot(rapidity + 1j * theta, PAULI, axes=(0, 0))
    return SL2C(scipy.linalg.expm(generator))


def boost_z(rapidity: float) -> SL2C:
    return SL2C(np.diag([np.exp(rapidity / 2.0), np.exp(-rapidity / 2.0)]).astype(np.complex128))
