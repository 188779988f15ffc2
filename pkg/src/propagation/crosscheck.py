from __future__ import annotations

import logging

import numpy as np

from src.fields.models import RSField, UnitsConfig
from src.fields.rs import divergence_residual, energy_norm
from src.propagation.fdtd import evolve_fd_maxwell, fd_step_count
from src.propagation.models import CrosscheckReport, Method, PropagationConfig, StepperReport
from src.propagation.spectral import evolve_spectral

logger = logging.getLogger(__name__)


def relative_l2(a: RSField, b: RSField) -> float:
    """||a - b|| / ||b||; the absolute difference when b vanishes."""
    diff = float(np.sqrt(np.sum(np.abs(a.F - b.F) ** 2)))
    ref = float(np.sqrt(np.sum(np.abs(b.F) ** 2)))
    return diff / ref if ref > 0 else diff


def _report(
    method: Method,
    f0: RSField,
    f1: RSField,
    reference: RSField | None,
    steps: int,
) -> StepperReport:
    e0, e1 = energy_norm(f0), energy_norm(f1)
    _, d0 = divergence_residual(f0)
    _, d1 = divergence_residual(f1)
    return StepperReport(
        method=method,
        energy_drift=abs(e1 - e0) / e0 if e0 > 0 else abs(e1),
        divergence_drift=abs(d1 - d0),
        l2_discrepancy_vs_reference=relative_l2(f1, reference) if reference is not None else 0.0,
        steps=steps,
    )


def crosscheck_report(
    f0: RSField,
    cfg: PropagationConfig,
    units: UnitsConfig | None = None,
) -> CrosscheckReport:
    """Run both evolvers from f0; the spectral result is the reference."""
    units = units or UnitsConfig()
    spectral = evolve_spectral(f0, cfg, units)
    fd = evolve_fd_maxwell(f0, cfg, units)

    report = CrosscheckReport(
        spectral=_report(Method.SPECTRAL, f0, spectral, None, 1 if cfg.t_final > 0 else 0),
        finite_difference=_report(
            Method.FINITE_DIFFERENCE, f0, fd, spectral, fd_step_count(f0, cfg, units)
        ),
    )
    logger.info(
        "Crosscheck t=%g: discrepancy %.3e, spectral energy drift %.3e, FD energy drift %.3e",
        cfg.t_final,
        report.discrepancy,
        report.spectral.energy_drift,
        report.finite_difference.energy_drift,
    )
    return report
