from __future__ import annotations

import numpy as np
import pytest

from src.fields.models import Grid3, UnitsConfig
from src.fields.sources import PlaneWave, plane_wave_values, random_transverse_field
from src.utils.rng import make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(1234)


@pytest.fixture
def units() -> UnitsConfig:
    return UnitsConfig()


@pytest.fixture
def cube() -> Grid3:
    """8^3 points on a 2 pi box: integer modes have integer wavenumbers."""
    return Grid3.cube(8, length=2.0 * np.pi)


@pytest.fixture
def unit_grid() -> Grid3:
    """4^3 points with unit total volume."""
    return Grid3.cube(4, length=1.0)


@pytest.fixture
def transverse_field(cube):
    return random_transverse_field(cube, seed=11, max_mode=2)


def _w_values(waves: list[PlaneWave], grid: Grid3, points: np.ndarray) -> np.ndarray:
    F = plane_wave_values(waves, grid, points)
    return np.sum(F * F, axis=-1)


@pytest.fixture
def three_waves() -> list[PlaneWave]:
    """Same-helicity waves sharing k_z whose pairwise F.F terms have equal weight.

    F.F factors into exp(2iz) times a transverse pattern with isolated
    zeros, so every vortex line runs straight along z.
    """
    return [
        PlaneWave(mode=(1, 0, 1), amplitude=1.0),
        PlaneWave(mode=(0, 1, 1), amplitude=1.0),
        PlaneWave(mode=(-1, -1, 1), amplitude=0.5),
    ]


@pytest.fixture
def w_sampler():
    """Exact F.F of a plane-wave superposition, as a trace_vortex_lines sampler."""

    def make(waves: list[PlaneWave], grid: Grid3):
        return lambda points: _w_values(waves, grid, points)

    return make


@pytest.fixture
def dense_zeros():
    """Brute-force scan: centres of fine z = 0 plaquettes around which F.F winds."""

    def scan(waves: list[PlaneWave], grid: Grid3, factor: int = 8) -> np.ndarray:
        xs = grid.origin[0] + np.linspace(0.0, (grid.nx - 1) * grid.dx, factor * (grid.nx - 1) + 1)
        ys = grid.origin[1] + np.linspace(0.0, (grid.ny - 1) * grid.dy, factor * (grid.ny - 1) + 1)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        W = _w_values(waves, grid, np.stack([X, Y, np.zeros_like(X)], axis=-1))

        c0, c1, c2, c3 = W[:-1, :-1], W[1:, :-1], W[1:, 1:], W[:-1, 1:]
        turns = sum(np.angle(b * np.conj(a)) for a, b in ((c0, c1), (c1, c2), (c2, c3), (c3, c0)))
        winding = np.rint(turns / (2.0 * np.pi)).astype(int)
        zeros = []
        for i, j in np.argwhere(winding != 0):
            centre = (0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))
            zeros.extend([centre] * abs(int(winding[i, j])))
        return np.array(zeros).reshape(-1, 2)

    return scan
