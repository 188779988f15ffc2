from __future__ import annotations

import numpy as np

from src.covariant.algebra import PAULI, epsilon_spinor, sigma_set
from src.covariant.faraday import conjugate_spinor_from_vector, spinor_from_vector
from src.covariant.models import SpinorWaveResidual
from src.fields.models import RSField, UnitsConfig
from src.fields.spectral import spectral_gradient_component
from src.propagation.spectral import spectral_time_derivative


def wave_operator(dS: np.ndarray, dotted: bool = False) -> np.ndarray:
    """Apply d_0 + sigma^i d_i (sigma^* for dotted spinors) to spinor derivatives.

    ``dS[..., mu, :, :]`` holds d_mu S with d_0 = (1/c) d/dt.
    """
    sigma = PAULI.conj() if dotted else PAULI
    return dS[..., 0, :, :] + np.einsum("iab,...ibc->...ac", sigma, dS[..., 1:, :, :])


def saturate(R: np.ndarray, dotted: bool = False) -> np.ndarray:
    """Contract the wave-operator output with sigma^tau, tau = 0..3.

    Undotted: tr(sigma^tau R eps) / 2. Dotted: -tr(sigma-bar^tau eps^{-1} R) / 2.
    Either way component 0 is div F and components 1..3 are the first-order
    evolution residual of the matching helicity branch.
    """
    eps = epsilon_spinor()
    if dotted:
        inner = eps.low @ R
        return -0.5 * np.einsum("tab,...ba->...t", sigma_set().sigma_bar, inner)
    inner = R @ eps.up
    return 0.5 * np.einsum("tab,...ba->...t", sigma_set().sigma, inner)


def spinor_wave_residual(F: np.ndarray, dF: np.ndarray, sign: int = 1) -> SpinorWaveResidual:
    """Covariant residual for a helicity field given its spacetime derivatives.

    ``F`` is (..., 3) and ``dF`` is (..., 4, 3) with d_0 = (1/c) d/dt. The
    sign +1 field E/c + iB is carried by the undotted spinor, the sign -1
    field E/c - iB by the dotted one.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    dotted = sign == -1
    to_spinor = conjugate_spinor_from_vector if dotted else spinor_from_vector
    dS = to_spinor(np.asarray(dF, dtype=np.complex128))
    R = wave_operator(dS, dotted=dotted)
    return SpinorWaveResidual(residual=R, saturation=saturate(R, dotted=dotted))


def plane_wave_jet(
    k: np.ndarray,
    polarization: np.ndarray,
    x: np.ndarray,
    t: float,
    helicity: int,
    sign: int = 1,
    units: UnitsConfig | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Value and analytic derivatives of e * exp(i(k.x - sign*helicity*c|k| t)).

    ``x`` is (..., 3); returns F (..., 3) and dF (..., 4, 3).
    """
    units = units or UnitsConfig()
    k = np.asarray(k, dtype=float)
    kmag = float(np.linalg.norm(k))
    x = np.asarray(x, dtype=float)
    phase = np.exp(1j * (x @ k - sign * helicity * units.c * kmag * t))
    F = phase[..., None] * np.asarray(polarization, dtype=np.complex128)
    rates = np.concatenate([[-1j * sign * helicity * kmag], 1j * k])
    dF = rates[:, None] * F[..., None, :]
    return F, dF


def grid_spinor_wave_residual(
    f: RSField,
    units: UnitsConfig | None = None,
    dFdt: np.ndarray | None = None,
) -> SpinorWaveResidual:
    """Residual on a grid slice with spectral space derivatives.

    Without ``dFdt`` the time derivative is taken from the first-order
    evolution law, which makes the saturated evolution part vanish to
    roundoff and leaves div F in component 0.
    """
    units = units or UnitsConfig()
    if dFdt is None:
        dFdt = spectral_time_derivative(f, units)
    parts = [dFdt / units.c] + [
        spectral_gradient_component(f.F, f.grid, axis) for axis in range(3)
    ]
    dF = np.stack(parts, axis=-2)
    return spinor_wave_residual(f.F, dF, sign=f.helicity_sign)
