from __future__ import annotations

import numpy as np

from src.fields.models import RSField
from src.fields.spectral import fft3, ifft3, mode_energy_weight, wavevectors
from src.spin.algebra import helicity_basis
from src.spin.models import HelicitySpectrum


def helicity_decompose(f: RSField) -> HelicitySpectrum:
    """Project every Fourier mode of F onto e+(k), e-(k) and khat.

    The k = 0 mode has no direction; its whole content is reported as the
    (real, non-negative) longitudinal amplitude.
    """
    k = wavevectors(f.grid)
    e_plus, e_minus, khat = helicity_basis(k)
    scale = np.sqrt(mode_energy_weight(f.grid))
    Fk = fft3(f.F) * scale

    a_plus = np.sum(np.conj(e_plus) * Fk, axis=-1)
    a_minus = np.sum(np.conj(e_minus) * Fk, axis=-1)
    a_zero = np.sum(khat * Fk, axis=-1)

    a_plus[0, 0, 0] = 0.0
    a_minus[0, 0, 0] = 0.0
    a_zero[0, 0, 0] = np.linalg.norm(Fk[0, 0, 0])

    return HelicitySpectrum(
        grid=f.grid,
        k=k,
        a_plus=a_plus,
        a_minus=a_minus,
        a_zero=a_zero,
        helicity_sign=f.helicity_sign,
    )


def helicity_compose(spectrum: HelicitySpectrum) -> RSField:
    """Inverse of helicity_decompose; the k = 0 content is placed along z."""
    e_plus, e_minus, khat = helicity_basis(spectrum.k)
    Fk = (
        e_plus * spectrum.a_plus[..., None]
        + e_minus * spectrum.a_minus[..., None]
        + khat * spectrum.a_zero[..., None]
    )
    Fk /= np.sqrt(mode_energy_weight(spectrum.grid))
    return RSField(grid=spectrum.grid, F=ifft3(Fk), helicity_sign=spectrum.helicity_sign)
