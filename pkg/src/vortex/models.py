from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.fields.models import Grid3, GridMismatchError


class NullFieldError(ValueError):
    """Raised when F.F vanishes identically, so vortex lines are undefined."""


class LGBeamParams(BaseModel):
    """Paraxial Laguerre-Gaussian mode LG_{l,p} with circular polarization."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    w0: float = Field(gt=0)
    wavelength: float = Field(gt=0)
    l: int = 0
    p: int = Field(default=0, ge=0)
    # helicity of the circular polarization
    polarization: Literal[1, -1] = 1
    # +1 propagates along +z, -1 along -z
    direction: Literal[1, -1] = 1
    amplitude: float = 1.0
    # (x, y) of the beam axis; None puts it through the grid centre
    axis: tuple[float, float] | None = None
    # z of the waist; None uses the grid centre
    waist_z: float | None = None

    @property
    def wavenumber(self) -> float:
        return 2.0 * np.pi / self.wavelength

    @property
    def rayleigh_range(self) -> float:
        return np.pi * self.w0**2 / self.wavelength


@dataclass(frozen=True)
class VortexScalarField:
    """W = F.F on a grid.

    ``scale`` is the mean |F|^2 of the source field; residual bounds on
    traced vertices are relative to it.
    """

    grid: Grid3
    W: np.ndarray
    degenerate: bool
    scale: float

    def __post_init__(self) -> None:
        if self.W.shape != self.grid.shape:
            raise GridMismatchError(f"W has shape {self.W.shape}, expected {self.grid.shape}")

    @classmethod
    def from_values(cls, grid: Grid3, W: np.ndarray) -> VortexScalarField:
        """Wrap a prescribed complex scalar, e.g. an analytic test function."""
        W = np.asarray(W, dtype=np.complex128)
        return cls(grid=grid, W=W, degenerate=not np.any(W), scale=float(np.mean(np.abs(W))))


@dataclass(frozen=True)
class VortexLine:
    points: np.ndarray
    residuals: np.ndarray
    closed: bool = False

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class VortexLineSet:
    grid: Grid3
    lines: list[VortexLine] = field(default_factory=list)
    scale: float = 0.0

    @property
    def num_lines(self) -> int:
        return len(self.lines)

    def vertices(self) -> np.ndarray:
        if not self.lines:
            return np.zeros((0, 3))
        return np.concatenate([line.points for line in self.lines])

    def max_relative_residual(self) -> float:
        if not self.lines or self.scale == 0:
            return 0.0
        return float(max(np.max(line.residuals) for line in self.lines) / self.scale)
