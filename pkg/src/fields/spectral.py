from __future__ import annotations

import numpy as np
import scipy.fft

from src.config import get_settings
from src.fields.models import Grid3

_SPATIAL_AXES = (0, 1, 2)


def fft3(values: np.ndarray) -> np.ndarray:
    """Forward transform over the three leading (spatial) axes."""
    return scipy.fft.fftn(values, axes=_SPATIAL_AXES, workers=get_settings().threads)


def ifft3(values: np.ndarray) -> np.ndarray:
    return scipy.fft.ifftn(values, axes=_SPATIAL_AXES, workers=get_settings().threads)


def wavevectors(grid: Grid3) -> np.ndarray:
    """Angular wavevector of every FFT mode, shape (nx, ny, nz, 3)."""
    kx, ky, kz = (
        2.0 * np.pi * scipy.fft.fftfreq(n, d=d) for n, d in zip(grid.shape, grid.spacing)
    )
    KX, KY, KZ = np.meshgrid(kx, ky, kz, indexing="ij")
    return np.stack([KX, KY, KZ], axis=-1)


def unit_wavevectors(grid: Grid3) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (k, |k|, k_hat); k_hat is zero on the k = 0 mode."""
    k = wavevectors(grid)
    kmag = np.linalg.norm(k, axis=-1)
    safe = np.where(kmag > 0, kmag, 1.0)
    khat = k / safe[..., None]
    khat[kmag == 0] = 0.0
    return k, kmag, khat


def spectral_gradient_component(values: np.ndarray, grid: Grid3, axis: int) -> np.ndarray:
    """d/dx_axis of a (nx, ny, nz, ...) array by spectral differentiation."""
    k = wavevectors(grid)[..., axis]
    shaped = k.reshape(k.shape + (1,) * (values.ndim - 3))
    return ifft3(1j * shaped * fft3(values))


def mode_energy_weight(grid: Grid3) -> float:
    """Factor turning sum(|fft|^2) into sum(|f|^2) dV (discrete Parseval)."""
    return grid.cell_volume / grid.num_points


def spectral_curl(values: np.ndarray, grid: Grid3) -> np.ndarray:
    """curl of a (nx, ny, nz, 3) vector field by spectral differentiation."""
    k = wavevectors(grid)
    return ifft3(1j * np.cross(k, fft3(values)))
