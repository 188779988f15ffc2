from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class GridMismatchError(ValueError):
    """Raised when field arrays do not match their grid or each other."""


class UnitsConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    c: float = Field(default=1.0, gt=0)
    hbar: float = Field(default=1.0, gt=0)


class Grid3(BaseModel):
    """Periodic box sampled at ``origin + index * spacing`` along each axis."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    nx: int = Field(ge=2)
    ny: int = Field(ge=2)
    nz: int = Field(ge=2)
    dx: float = Field(default=1.0, gt=0)
    dy: float = Field(default=1.0, gt=0)
    dz: float = Field(default=1.0, gt=0)
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @classmethod
    def cube(cls, n: int, length: float = 1.0, centered: bool = False) -> Grid3:
        d = length / n
        o = -0.5 * (n - 1) * d if centered else 0.0
        return cls(nx=n, ny=n, nz=n, dx=d, dy=d, dz=d, origin=(o, o, o))

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    @property
    def spacing(self) -> tuple[float, float, float]:
        return (self.dx, self.dy, self.dz)

    @property
    def lengths(self) -> tuple[float, float, float]:
        return (self.nx * self.dx, self.ny * self.dy, self.nz * self.dz)

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy * self.dz

    @property
    def num_points(self) -> int:
        return self.nx * self.ny * self.nz

    @property
    def center(self) -> np.ndarray:
        """Coordinates of the grid point at index (n//2, n//2, n//2)."""
        return np.array(
            [o + (n // 2) * d for o, n, d in zip(self.origin, self.shape, self.spacing)]
        )

    def axes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(
            o + d * np.arange(n) for o, n, d in zip(self.origin, self.shape, self.spacing)
        )  # type: ignore[return-value]

    def coordinates(self) -> np.ndarray:
        """Point coordinates, shape (nx, ny, nz, 3)."""
        x, y, z = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([x, y, z], axis=-1)


def _check_vector_array(name: str, arr: np.ndarray, grid: Grid3) -> None:
    if arr.shape != (*grid.shape, 3):
        raise GridMismatchError(
            f"{name} has shape {arr.shape}, expected {(*grid.shape, 3)}"
        )


@dataclass(frozen=True)
class RealEMField:
    grid: Grid3
    E: np.ndarray
    B: np.ndarray

    def __post_init__(self) -> None:
        _check_vector_array("E", self.E, self.grid)
        _check_vector_array("B", self.B, self.grid)


@dataclass(frozen=True)
class RSField:
    """Complex 3-vector F on a periodic grid; the photon wavefunction."""

    grid: Grid3
    F: np.ndarray
    helicity_sign: int = 1

    def __post_init__(self) -> None:
        _check_vector_array("F", self.F, self.grid)
        if self.helicity_sign not in (1, -1):
            raise ValueError(f"helicity_sign must be +1 or -1, got {self.helicity_sign}")
        if self.F.dtype != np.complex128:
            object.__setattr__(self, "F", np.asarray(self.F, dtype=np.complex128))

    def with_values(self, F: np.ndarray) -> RSField:
        return RSField(grid=self.grid, F=F, helicity_sign=self.helicity_sign)
