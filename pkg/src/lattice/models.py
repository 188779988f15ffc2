from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

# Independent components of an antisymmetric 4x4 tensor, in storage order
PAIRS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

CONTINUITY_TOLERANCE = 1e-10


class LatticeMismatchError(ValueError):
    """Raised when lattice fields live on different lattices or have wrong shapes."""


class ContinuityError(ValueError):
    """Raised when a current that must be conserved has a discrete divergence."""


class Lattice4(BaseModel):
    """Periodic hypercubic lattice; axis 0 is time (x0 = ct)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n0: int = Field(ge=2)
    n1: int = Field(ge=2)
    n2: int = Field(ge=2)
    n3: int = Field(ge=2)
    a: float = Field(default=1.0, gt=0)

    @classmethod
    def hypercube(cls, n: int, a: float = 1.0) -> Lattice4:
        return cls(n0=n, n1=n, n2=n, n3=n, a=a)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return (self.n0, self.n1, self.n2, self.n3)

    @property
    def site_volume(self) -> float:
        return self.a**4

    def coordinates(self) -> np.ndarray:
        """Site coordinates, shape (n0, n1, n2, n3, 4)."""
        axes = [self.a * np.arange(n) for n in self.shape]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


class ActionConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    # weight of the G.F cross term when the F.F term is absent
    a_norm: float = 0.75
    include_l0: bool = True


def _check_values(name: str, lattice: Lattice4, values: np.ndarray, width: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    expected = (*lattice.shape, width)
    if arr.shape != expected:
        raise LatticeMismatchError(f"{name} has shape {arr.shape}, expected {expected}")
    return arr


@dataclass(frozen=True)
class GaugeField:
    """Real A_mu per site; also used for the doubled fields and B_mu."""

    lattice: Lattice4
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _check_values("A", self.lattice, self.values, 4))

    @classmethod
    def zeros(cls, lattice: Lattice4) -> GaugeField:
        return cls(lattice, np.zeros((*lattice.shape, 4)))

    def with_values(self, values: np.ndarray) -> GaugeField:
        return GaugeField(self.lattice, values)


@dataclass(frozen=True)
class FieldStrengthVar:
    """Lower-index F_{mu nu} stored as its six independent components (see PAIRS)."""

    lattice: Lattice4
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _check_values("F", self.lattice, self.values, 6))

    @classmethod
    def zeros(cls, lattice: Lattice4) -> FieldStrengthVar:
        return cls(lattice, np.zeros((*lattice.shape, 6)))

    @classmethod
    def from_full(cls, lattice: Lattice4, full: np.ndarray) -> FieldStrengthVar:
        return cls(lattice, np.stack([full[..., m, n] for m, n in PAIRS], axis=-1))

    def full(self) -> np.ndarray:
        """(..., 4, 4) antisymmetric array."""
        out = np.zeros((*self.lattice.shape, 4, 4))
        for p, (m, n) in enumerate(PAIRS):
            out[..., m, n] = self.values[..., p]
            out[..., n, m] = -self.values[..., p]
        return out

    def with_values(self, values: np.ndarray) -> FieldStrengthVar:
        return FieldStrengthVar(self.lattice, values)


@dataclass(frozen=True)
class CurrentField:
    """Prescribed classical j^mu.

    Continuity is enforced on construction unless ``enforce_continuity`` is
    off, which is only meant for sensitivity studies.
    """

    lattice: Lattice4
    values: np.ndarray
    enforce_continuity: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _check_values("j", self.lattice, self.values, 4))
        if self.enforce_continuity:
            # local import: operators depends on this module
            from src.lattice.operators import current_divergence

            defect = float(np.max(np.abs(current_divergence(self))))
            scale = max(1.0, float(np.max(np.abs(self.values))) / self.lattice.a)
            if defect > CONTINUITY_TOLERANCE * scale:
                raise ContinuityError(f"current is not conserved (max divergence {defect:.3e})")

    @classmethod
    def zeros(cls, lattice: Lattice4) -> CurrentField:
        return cls(lattice, np.zeros((*lattice.shape, 4)))


@dataclass(frozen=True)
class LatticeFields:
    """Bundle handed to the gradient check; unused members may be None."""

    A: GaugeField
    j: CurrentField
    F: FieldStrengthVar | None = None
    B: GaugeField | None = None
    A_tilde: GaugeField | None = None
    config: ActionConfig = field(default_factory=ActionConfig)
