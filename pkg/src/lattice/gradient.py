from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.lattice.action import (
    assemble_first_order_action,
    doubled_action,
    doubled_residual_B,
    euler_lagrange_residuals,
    reduced_action,
    reduced_residual_A,
)
from src.lattice.models import LatticeFields

logger = logging.getLogger(__name__)


class GradientTarget(str, Enum):
    """Which action and which of its fields is varied."""

    REDUCED_A = "reduced:A"
    FIRST_ORDER_A = "first_order:A"
    FIRST_ORDER_F = "first_order:F"
    DOUBLED_B = "doubled:B"


@dataclass(frozen=True)
class GradientCheck:
    target: GradientTarget
    analytic: float
    numeric: float
    relative_error: float

    @property
    def absolute_error(self) -> float:
        return abs(self.numeric - self.analytic)


def _require(fields: LatticeFields, *names: str) -> None:
    missing = [n for n in names if getattr(fields, n) is None]
    if missing:
        raise ValueError(f"gradient check needs fields: {', '.join(missing)}")


def _action_and_gradient(
    target: GradientTarget, fields: LatticeFields
) -> tuple[Callable[[np.ndarray], float], np.ndarray, np.ndarray]:
    """Return (action as a function of the varied array, current array, analytic gradient)."""
    A, j, cfg = fields.A, fields.j, fields.config
    vol = A.lattice.site_volume

    if target is GradientTarget.REDUCED_A:
        return (
            lambda x: reduced_action(A.with_values(x), j),
            A.values,
            vol * reduced_residual_A(A, j),
        )

    if target is GradientTarget.FIRST_ORDER_A:
        _require(fields, "F")
        F = fields.F
        _, residual_A = euler_lagrange_residuals(A, F, j, cfg)
        return (
            lambda x: assemble_first_order_action(A.with_values(x), F, j, cfg),
            A.values,
            vol * residual_A,
        )

    if target is GradientTarget.FIRST_ORDER_F:
        _require(fields, "F")
        F = fields.F
        residual_F, _ = euler_lagrange_residuals(A, F, j, cfg)
        return (
            lambda x: assemble_first_order_action(A, F.with_values(x), j, cfg),
            F.values,
            vol * residual_F,
        )

    _require(fields, "B", "A_tilde")
    B, A_tilde = fields.B, fields.A_tilde
    return (
        lambda x: doubled_action(A, B.with_values(x), A_tilde, j),
        B.values,
        vol * doubled_residual_B(A_tilde),
    )


def functional_gradient_check(
    which: GradientTarget | str,
    fields: LatticeFields,
    direction: np.ndarray,
    h: float = 1e-3,
) -> GradientCheck:
    """Compare the analytic directional derivative with a Richardson-extrapolated
    central difference built from steps h and h/2."""
    target = GradientTarget(which)
    action, base, gradient = _action_and_gradient(target, fields)
    direction = np.asarray(direction, dtype=np.float64)
    if direction.shape != base.shape:
        raise ValueError(f"direction has shape {direction.shape}, expected {base.shape}")

    def central(step: float) -> float:
        return (action(base + step * direction) - action(base - step * direction)) / (2.0 * step)

    numeric = (4.0 * central(0.5 * h) - central(h)) / 3.0
    analytic = float(np.sum(gradient * direction))
    scale = max(abs(analytic), abs(numeric))
    relative = abs(numeric - analytic) / scale if scale > 0 else 0.0

    logger.debug("%s: analytic %.12g numeric %.12g", target.value, analytic, numeric)
    return GradientCheck(target=target, analytic=analytic, numeric=numeric, relative_error=relative)
