from __future__ import annotations

import itertools
import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.fields.models import Grid3, RSField, UnitsConfig
from src.fields.spectral import ifft3
from src.spin.algebra import helicity_basis
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)


class PlaneWave(BaseModel):
    """Circular plane wave on integer grid mode ``mode``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: tuple[int, int, int]
    helicity: Literal[1, -1] = 1
    amplitude: float = 1.0
    phase: float = 0.0

    def wavevector(self, grid: Grid3) -> np.ndarray:
        return 2.0 * np.pi * np.asarray(self.mode, dtype=float) / np.asarray(grid.lengths)


def _from_mode_coefficients(
    grid: Grid3,
    coefficients: dict[tuple[int, int, int], np.ndarray],
    sign: int,
) -> RSField:
    """Evaluate sum_m c_m exp(i k_m . x) on the grid through one inverse FFT."""
    Fk = np.zeros((*grid.shape, 3), dtype=np.complex128)
    origin = np.asarray(grid.origin)
    lengths = np.asarray(grid.lengths)
    for mode, coeff in coefficients.items():
        k = 2.0 * np.pi * np.asarray(mode, dtype=float) / lengths
        index = tuple(m % n for m, n in zip(mode, grid.shape))
        Fk[index] += grid.num_points * coeff * np.exp(1j * np.dot(k, origin))
    return RSField(grid=grid, F=ifft3(Fk), helicity_sign=sign)


def _check_resolvable(grid: Grid3, mode: tuple[int, int, int]) -> None:
    for m, n in zip(mode, grid.shape):
        if 2 * abs(m) >= n:
            raise ValueError(f"mode {mode} is not resolved on a grid of shape {grid.shape}")


def _wave_coefficients(
    waves: list[PlaneWave],
    grid: Grid3,
    t: float,
    sign: int,
    units: UnitsConfig,
) -> dict[tuple[int, int, int], np.ndarray]:
    coefficients: dict[tuple[int, int, int], np.ndarray] = {}
    for wave in waves:
        _check_resolvable(grid, wave.mode)
        k = wave.wavevector(grid)
        e_plus, e_minus, _ = helicity_basis(k)
        e = e_plus if wave.helicity == 1 else e_minus
        omega = units.c * float(np.linalg.norm(k))
        amp = wave.amplitude * np.exp(1j * (wave.phase - sign * wave.helicity * omega * t))
        coefficients[wave.mode] = coefficients.get(wave.mode, 0) + amp * e
    return coefficients


def synth_plane_waves(
    waves: list[PlaneWave],
    grid: Grid3,
    t: float = 0.0,
    sign: int = 1,
    units: UnitsConfig | None = None,
) -> RSField:
    """Superpose circular plane waves, each an exact solution for the given branch.

    A wave of helicity h evolves as exp(-i sign h c|k| t).
    """
    units = units or UnitsConfig()
    return _from_mode_coefficients(grid, _wave_coefficients(waves, grid, t, sign, units), sign)


def plane_wave_values(
    waves: list[PlaneWave],
    grid: Grid3,
    points: np.ndarray,
    t: float = 0.0,
    sign: int = 1,
    units: UnitsConfig | None = None,
) -> np.ndarray:
    """The synth_plane_waves superposition evaluated at arbitrary points (..., 3)."""
    units = units or UnitsConfig()
    points = np.asarray(points, dtype=float)
    lengths = np.asarray(grid.lengths)
    out = np.zeros(points.shape, dtype=np.complex128)
    for mode, coeff in _wave_coefficients(waves, grid, t, sign, units).items():
        k = 2.0 * np.pi * np.asarray(mode, dtype=float) / lengths
        out += np.exp(1j * (points @ k))[..., None] * coeff
    return out


def random_transverse_field(
    grid: Grid3,
    seed: int,
    max_mode: int = 2,
    sign: int = 1,
) -> RSField:
    """Band-limited random transverse field.

    Modes are drawn in a fixed order over the integer cube |m_i| <= max_mode,
    so a given seed describes the same continuum field on every grid that
    resolves it.
    """
    rng = make_rng(seed)
    modes = [
        m
        for m in itertools.product(range(-max_mode, max_mode + 1), repeat=3)
        if any(m)
    ]
    coefficients: dict[tuple[int, int, int], np.ndarray] = {}
    norm = 1.0 / np.sqrt(2.0 * len(modes))
    for mode in modes:
        _check_resolvable(grid, mode)
        a = rng.standard_normal(4)
        k = 2.0 * np.pi * np.asarray(mode, dtype=float) / np.asarray(grid.lengths)
        e_plus, e_minus, _ = helicity_basis(k)
        coefficients[mode] = norm * ((a[0] + 1j * a[1]) * e_plus + (a[2] + 1j * a[3]) * e_minus)
    logger.debug("Random transverse field: %d modes on %s", len(modes), grid.shape)
    return _from_mode_coefficients(grid, coefficients, sign)
