from __future__ import annotations

import logging
import math

import numpy as np

from src.fields.models import Grid3, RSField, UnitsConfig
from src.propagation.models import CFLViolationError, PropagationConfig

logger = logging.getLogger(__name__)

DEFAULT_COURANT = 0.25
MAX_COURANT = 0.5


def _central_difference(values: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    return (np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)) / (2.0 * spacing)


def central_curl(values: np.ndarray, grid: Grid3) -> np.ndarray:
    """Collocated second-order curl of a periodic (nx, ny, nz, 3) field."""
    dx, dy, dz = grid.spacing
    fx, fy, fz = values[..., 0], values[..., 1], values[..., 2]
    return np.stack(
        [
            _central_difference(fz, 1, dy) - _central_difference(fy, 2, dz),
            _central_difference(fx, 2, dz) - _central_difference(fz, 0, dx),
            _central_difference(fy, 0, dx) - _central_difference(fx, 1, dy),
        ],
        axis=-1,
    )


def stable_step(grid: Grid3, units: UnitsConfig, requested: float | None) -> float:
    limit = MAX_COURANT * min(grid.spacing) / units.c
    dt = DEFAULT_COURANT * min(grid.spacing) / units.c if requested is None else requested
    if dt > limit:
        raise CFLViolationError(
            f"dt={dt:.6g} exceeds the stability limit {limit:.6g} "
            f"(0.5 * min spacing {min(grid.spacing):.6g} / c {units.c:.6g})"
        )
    return dt


def evolve_fd_maxwell(f0: RSField, cfg: PropagationConfig, units: UnitsConfig) -> RSField:
    """Method of lines on dF/dt = -sign i c curl F with classic RK4.

    The step is shrunk so that an integer number of steps lands on t_final.
    """
    dt = stable_step(f0.grid, units, cfg.dt)
    if cfg.t_final == 0:
        return f0
    n_steps = max(1, math.ceil(cfg.t_final / dt - 1e-12))
    dt = cfg.t_final / n_steps
    coeff = -cfg.sign * 1j * units.c
    grid = f0.grid

    def rhs(F: np.ndarray) -> np.ndarray:
        return coeff * central_curl(F, grid)

    F = f0.F.copy()
    for _ in range(n_steps):
        k1 = rhs(F)
        k2 = rhs(F + 0.5 * dt * k1)
        k3 = rhs(F + 0.5 * dt * k2)
        k4 = rhs(F + dt * k3)
        F = F + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    logger.debug("FD evolution: %d steps of dt=%.6g", n_steps, dt)
    return f0.with_values(F)


def fd_step_count(f0: RSField, cfg: PropagationConfig, units: UnitsConfig) -> int:
    if cfg.t_final == 0:
        return 0
    dt = stable_step(f0.grid, units, cfg.dt)
    return max(1, math.ceil(cfg.t_final / dt - 1e-12))
