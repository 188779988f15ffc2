from __future__ import annotations

import logging

import numpy as np

from src.fields.models import GridMismatchError, RealEMField, RSField, UnitsConfig
from src.fields.spectral import (
    fft3,
    ifft3,
    mode_energy_weight,
    unit_wavevectors,
    wavevectors,
)

logger = logging.getLogger(__name__)


def rs_from_em(em: RealEMField, sign: int, units: UnitsConfig) -> RSField:
    """F = E/c + sign * i B, pointwise."""
    if em.E.shape != em.B.shape:
        raise GridMismatchError(f"E {em.E.shape} and B {em.B.shape} differ")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    F = em.E / units.c + sign * 1j * em.B
    return RSField(grid=em.grid, F=F.astype(np.complex128), helicity_sign=sign)


def em_from_rs(f: RSField, units: UnitsConfig) -> RealEMField:
    """Inverse of rs_from_em: E = c Re F, B = sign Im F."""
    return RealEMField(
        grid=f.grid,
        E=units.c * f.F.real,
        B=f.helicity_sign * f.F.imag,
    )


def divergence_residual(f: RSField) -> tuple[np.ndarray, float]:
    """Spectral div F per point and its L2 norm sqrt(sum |div F|^2 dV)."""
    k = wavevectors(f.grid)
    div = ifft3(1j * np.sum(k * fft3(f.F), axis=-1))
    norm = float(np.sqrt(np.sum(np.abs(div) ** 2) * f.grid.cell_volume))
    return div, norm


def transverse_project(f: RSField) -> RSField:
    """Remove khat (khat . F~) from every Fourier mode; the k = 0 mode is dropped."""
    _, kmag, khat = unit_wavevectors(f.grid)
    Fk = fft3(f.F)
    Fk -= khat * np.sum(khat * Fk, axis=-1, keepdims=True)
    Fk[kmag == 0] = 0.0
    return f.with_values(ifft3(Fk))


def energy_norm(f: RSField) -> float:
    return float(np.sum(np.abs(f.F) ** 2) * f.grid.cell_volume)


def mode_energy_norm(f: RSField) -> float:
    """energy_norm evaluated on the Fourier side."""
    return float(np.sum(np.abs(fft3(f.F)) ** 2) * mode_energy_weight(f.grid))


def energy_inner(f: RSField, g: RSField) -> complex:
    """<f, g> = sum conj(f) . g dV."""
    return complex(np.sum(np.conj(f.F) * g.F) * f.grid.cell_volume)


def position_operator_leakage(f: RSField, axis: int = 0) -> float:
    """||div(x_axis F)|| / sqrt(energy_norm(F)), with x measured from the grid centre.

    Transverse fields stay transverse under every operation that commutes with
    the projector; multiplication by a coordinate does not, so this ratio is
    O(1) for a generic transverse F.
    """
    x = f.grid.coordinates()[..., axis] - f.grid.center[axis]
    moved = f.with_values(x[..., None] * f.F)
    _, norm = divergence_residual(moved)
    scale = np.sqrt(energy_norm(f))
    if scale == 0:
        return 0.0
    return float(norm / scale)
