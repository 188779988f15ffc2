from __future__ import annotations

import logging

import numpy as np

from src.fields.models import RSField, UnitsConfig
from src.fields.rs import divergence_residual, energy_norm
from src.fields.spectral import fft3, ifft3, spectral_curl, wavevectors
from src.propagation.models import PropagationConfig
from src.spin.algebra import helicity_basis

logger = logging.getLogger(__name__)

# Relative divergence above which the input is reported as non-transverse
TRANSVERSE_TOLERANCE = 1e-8


def spectral_propagate(f0: RSField, t: float, sign: int, units: UnitsConfig) -> RSField:
    """Apply exp(-i t H) with H = sign * c * (s . k) to every Fourier mode.

    Each mode is expanded on the eigenvectors of H: the helicity pair picks up
    exp(-/+ i sign c|k| t) and the longitudinal part is left alone. ``t`` may be
    negative.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    k = wavevectors(f0.grid)
    e_plus, e_minus, khat = helicity_basis(k)
    omega = units.c * np.linalg.norm(k, axis=-1)

    Fk = fft3(f0.F)
    a_plus = np.sum(np.conj(e_plus) * Fk, axis=-1)
    a_minus = np.sum(np.conj(e_minus) * Fk, axis=-1)
    a_zero = np.sum(khat * Fk, axis=-1)

    phase = np.exp(-1j * sign * omega * t)
    Fk_t = (
        e_plus * (a_plus * phase)[..., None]
        + e_minus * (a_minus * np.conj(phase))[..., None]
        + khat * a_zero[..., None]
    )
    return f0.with_values(ifft3(Fk_t))


def evolve_spectral(f0: RSField, cfg: PropagationConfig, units: UnitsConfig) -> RSField:
    if cfg.sign != f0.helicity_sign:
        logger.warning(
            "Evolving a sign %+d field with the sign %+d generator", f0.helicity_sign, cfg.sign
        )
    _, div_norm = divergence_residual(f0)
    scale = np.sqrt(energy_norm(f0))
    if scale > 0 and div_norm / scale > TRANSVERSE_TOLERANCE:
        logger.warning(
            "Initial field is not transverse (relative divergence %.3e); "
            "the longitudinal part will be carried unchanged",
            div_norm / scale,
        )
    if cfg.t_final == 0:
        return f0
    logger.debug("Spectral evolution to t=%g on %s", cfg.t_final, f0.grid.shape)
    return spectral_propagate(f0, cfg.t_final, cfg.sign, units)


def spectral_time_derivative(f: RSField, units: UnitsConfig) -> np.ndarray:
    """dF/dt = -sign i c curl F, evaluated spectrally."""
    return -f.helicity_sign * 1j * units.c * spectral_curl(f.F, f.grid)


def dirac_residual(f: RSField, dFdt: np.ndarray, units: UnitsConfig) -> tuple[np.ndarray, float]:
    """Residual (1/c) dF/dt + sign i curl F of the first-order wave equation.

    Returns the per-point residual and its L2 norm. Multiplied by i hbar c it
    is the residual of i hbar dF/dt = H F.
    """
    r = dFdt / units.c + f.helicity_sign * 1j * spectral_curl(f.F, f.grid)
    return r, float(np.sqrt(np.sum(np.abs(r) ** 2) * f.grid.cell_volume))
