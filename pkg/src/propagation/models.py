from __future__ import annotations

from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field


class CFLViolationError(ValueError):
    """Raised when a finite-difference step exceeds the stability limit."""


class Method(str, Enum):
    SPECTRAL = "spectral"
    FINITE_DIFFERENCE = "finite-difference"


class PropagationConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    t_final: float = Field(ge=0)
    # None selects 0.25 * min spacing / c
    dt: float | None = Field(default=None, gt=0)
    method: Method = Method.SPECTRAL
    sign: Literal[1, -1] = 1


class StepperReport(BaseModel):
    method: Method
    energy_drift: float = Field(ge=0)
    divergence_drift: float = Field(ge=0)
    l2_discrepancy_vs_reference: float = Field(default=0.0, ge=0)
    steps: int = 0


class CrosscheckReport(BaseModel):
    spectral: StepperReport
    finite_difference: StepperReport

    @property
    def discrepancy(self) -> float:
        return self.finite_difference.l2_discrepancy_vs_reference
