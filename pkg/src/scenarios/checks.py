from __future__ import annotations

import logging

import numpy as np
from pydantic import BaseModel

from src.covariant.algebra import ETA, lorentz_from_sl2c, random_sl2c, sigma_set
from src.covariant.faraday import covariance_check, dual, selfdual_split, spinor_from_vector
from src.covariant.models import AntisymTensor
from src.covariant.wave import grid_spinor_wave_residual, plane_wave_jet, spinor_wave_residual
from src.fields.models import Grid3, UnitsConfig
from src.fields.rs import divergence_residual
from src.fields.sources import random_transverse_field
from src.lattice.action import (
    assemble_first_order_action,
    doubled_sector_signature,
    euler_lagrange_residuals,
    lattice_momentum,
    reduced_action,
    reduced_residual_A,
    summation_by_parts_terms,
)
from src.lattice.gradient import GradientTarget, functional_gradient_check
from src.lattice.models import GaugeField, LatticeFields
from src.lattice.operators import bianchi_defect, conserved_current, field_strength, gauge_transform
from src.propagation.fdtd import central_curl
from src.propagation.spectral import dirac_residual
from src.scenarios.config import ActionSection, ChecksSection
from src.spin.algebra import helicity_basis
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    name: str
    value: float
    # None marks a reported measurement without a pass/fail bound
    threshold: float | None = None
    passed: bool = True


def bound(name: str, value: float, threshold: float) -> CheckResult:
    value = float(value)
    return CheckResult(name=name, value=value, threshold=threshold, passed=bool(value <= threshold))


def measured(name: str, value: float) -> CheckResult:
    return CheckResult(name=name, value=float(value))


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


# ── Covariant layer ───────────────────────────────────────────────────


def _random_antisym(rng: np.random.Generator) -> AntisymTensor:
    X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    return AntisymTensor(components=X - X.T, lower=True)


def covariance_suite(checks: ChecksSection, units: UnitsConfig) -> list[CheckResult]:
    rng = make_rng(checks.seed)
    sigma = sigma_set()
    trace_defect = max(
        abs(np.trace(sigma.sigma[m] @ sigma.sigma_bar[n]) - 2.0 * ETA[m, n])
        for m in range(4)
        for n in range(4)
    )

    metric = det = neg = homo = inverse = cov = rotation = 0.0
    duality = reconstruction = 0.0
    for _ in range(checks.trials):
        A = random_sl2c(rng)
        B = random_sl2c(rng)
        L = lorentz_from_sl2c(A)
        metric = max(metric, L.metric_defect(ETA))
        det = max(det, abs(np.linalg.det(L.matrix) - 1.0), max(0.0, 1.0 - L.matrix[0, 0]))
        neg = max(neg, float(np.max(np.abs(lorentz_from_sl2c(-A).matrix - L.matrix))))
        LB = lorentz_from_sl2c(B).matrix
        homo = max(homo, float(np.max(np.abs(lorentz_from_sl2c(A @ B).matrix - L.matrix @ LB))))
        inverse = max(
            inverse,
            float(np.max(np.abs(lorentz_from_sl2c(A.inverse()).matrix - np.linalg.inv(L.matrix)))),
        )
        E, Bf = rng.standard_normal(3), rng.standard_normal(3)
        cov = max(cov, covariance_check(A, E, Bf, units))

        R = lorentz_from_sl2c(random_sl2c(rng, unitary=True)).matrix
        rotation = max(rotation, abs(R[0, 0] - 1.0), float(np.max(np.abs(R[0, 1:]))), float(np.max(np.abs(R[1:, 0]))))

        F = _random_antisym(rng)
        parts = selfdual_split(F)
        duality = max(
            duality,
            float(np.max(np.abs(dual(parts.plus).components - parts.plus.components))),
            float(np.max(np.abs(dual(parts.minus).components + parts.minus.components))),
        )
        rebuilt = 0.5 * (parts.plus.components + parts.minus.components)
        reconstruction = max(reconstruction, float(np.max(np.abs(rebuilt - F.components))))

    tol = checks.homomorphism_tol
    results = [
        bound("sigma trace identity", trace_defect, 0.0),
        bound("lorentz metric preservation", metric, tol),
        bound("lorentz proper orthochronous", det, tol),
        bound("lorentz(-A) equals lorentz(A)", neg, 0.0),
        bound("homomorphism lorentz(AB)", homo, tol),
        bound("homomorphism lorentz(A^-1)", inverse, tol),
        bound("unitary A gives rotation", rotation, 1e-12),
        bound("spinor covariance", cov, checks.covariance_tol),
        bound("dual eigenvalues of self-dual parts", duality, checks.duality_tol),
        bound("self-dual reconstruction", reconstruction, checks.duality_tol),
    ]
    results.extend(_wave_checks(rng, checks, units))
    return results


def _wave_checks(rng: np.random.Generator, checks: ChecksSection, units: UnitsConfig) -> list[CheckResult]:
    plane = rank = 0.0
    for _ in range(checks.trials):
        k = rng.standard_normal(3)
        x = rng.standard_normal((4, 3))
        t = float(rng.standard_normal())
        for sign in (1, -1):
            for helicity in (1, -1):
                e_plus, e_minus, _ = helicity_basis(k)
                e = e_plus if helicity == 1 else e_minus
                F, dF = plane_wave_jet(k, e, x, t, helicity, sign, units)
                plane = max(plane, spinor_wave_residual(F, dF, sign).max_abs)
                rank = max(rank, float(np.max(np.abs(np.linalg.det(spinor_from_vector(F))))))

    grid = Grid3.cube(8, length=2.0 * np.pi)
    f = random_transverse_field(grid, seed=checks.seed, max_mode=2)
    dFdt = -1j * units.c * central_curl(f.F, grid)
    sat = grid_spinor_wave_residual(f, units, dFdt=dFdt).saturation
    div, _ = divergence_residual(f)
    r, _ = dirac_residual(f, dFdt, units)
    saturation = max(
        float(np.max(np.abs(sat[..., 0] - div))),
        float(np.max(np.abs(sat[..., 1:] - r))),
    )
    return [
        bound("plane-wave covariant residual", plane, checks.wave_tol),
        bound("plane-wave spinor determinant", rank, checks.wave_tol),
        bound("saturation matches div and evolution residuals", saturation, checks.wave_tol),
    ]


# ── Lattice action ────────────────────────────────────────────────────


def action_suite(action: ActionSection, checks: ChecksSection) -> list[CheckResult]:
    lattice = action.to_lattice()
    cfg = action.to_config()
    rng = make_rng(action.seed)
    shape = (*lattice.shape, 4)

    A = GaugeField(lattice, rng.standard_normal(shape))
    j = conserved_current(lattice, rng)
    G = field_strength(A)
    results: list[CheckResult] = []

    residual_F, residual_A = euler_lagrange_residuals(A, G, j, cfg)
    if cfg.include_l0:
        results.append(bound("stationarity in F at F = G", float(np.max(np.abs(residual_F))), checks.stationarity_tol))
        results.append(
            bound(
                "first-order equals reduced at F = G",
                _relative(assemble_first_order_action(A, G, j, cfg), reduced_action(A, j)),
                checks.agreement_tol,
            )
        )
        results.append(
            bound(
                "residual_A consistency after elimination",
                float(np.max(np.abs(residual_A - reduced_residual_A(A, j)))),
                checks.gauge_tol,
            )
        )
    else:
        results.append(measured("F residual without F.F term", float(np.max(np.abs(residual_F)))))

    gauge = rng.standard_normal(lattice.shape)
    results.append(
        bound(
            "gauge invariance of reduced action",
            _relative(reduced_action(gauge_transform(A, gauge), j), reduced_action(A, j)),
            checks.gauge_tol,
        )
    )
    F_random = G.with_values(rng.standard_normal((*lattice.shape, 6)))
    lhs, rhs = summation_by_parts_terms(A, F_random)
    results.append(bound("summation by parts", _relative(lhs, rhs), checks.agreement_tol))
    results.append(bound("discrete Bianchi identity", float(np.max(np.abs(bianchi_defect(G)))), checks.stationarity_tol))

    mismatches = 0
    for _ in range(checks.trials):
        mode = rng.integers(0, lattice.shape)
        if not mode.any():
            mode[1] = 1
        if doubled_sector_signature(lattice_momentum(mode, lattice), lattice) != (1, -1):
            mismatches += 1
    results.append(bound("doubled sector signature mismatches", mismatches, 0.0))

    fields = LatticeFields(
        A=A,
        j=j,
        F=F_random,
        B=GaugeField(lattice, rng.standard_normal(shape)),
        A_tilde=GaugeField(lattice, rng.standard_normal(shape)),
        config=cfg,
    )
    b_check = functional_gradient_check(
        GradientTarget.DOUBLED_B, fields, rng.standard_normal(shape), h=1.0
    )
    results.append(bound("B gradient after substitution", abs(b_check.numeric), checks.b_gradient_tol))
    for target, width in (
        (GradientTarget.REDUCED_A, 4),
        (GradientTarget.FIRST_ORDER_A, 4),
        (GradientTarget.FIRST_ORDER_F, 6),
    ):
        direction = rng.standard_normal((*lattice.shape, width))
        check = functional_gradient_check(target, fields, direction)
        results.append(bound(f"gradient {target.value}", check.relative_error, checks.gradient_tol))

    logger.info("Action suite: %d checks on lattice %s", len(results), lattice.shape)
    return results
