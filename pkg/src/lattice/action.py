from __future__ import annotations

import logging
from collections.abc import Sequence

import numpy as np

from src.lattice.models import (
    ActionConfig,
    CurrentField,
    FieldStrengthVar,
    GaugeField,
    Lattice4,
)
from src.lattice.operators import (
    PAIR_METRIC,
    bianchi_defect,
    contract,
    field_strength,
    same_lattice,
    tensor_divergence,
)

logger = logging.getLogger(__name__)


def couplings(cfg: ActionConfig) -> tuple[float, float]:
    """(weight of G.F, weight of F.F / 2).

    With the F.F term the cross term has unit weight and F is fixed to G by
    stationarity; without it the cross term carries ``a_norm``.
    """
    if cfg.include_l0:
        return 1.0, 1.0
    return cfg.a_norm, 0.0


def _source_term(A: GaugeField, j: CurrentField) -> np.ndarray:
    return np.sum(A.values * j.values, axis=-1)


# ── First-order action ────────────────────────────────────────────────


def assemble_first_order_action(
    A: GaugeField,
    F: FieldStrengthVar,
    j: CurrentField,
    cfg: ActionConfig | None = None,
) -> float:
    """a^4 sum [kappa G.F - lambda/2 F.F + A_mu j^mu] with G the lattice curl of A."""
    cfg = cfg or ActionConfig()
    lattice = same_lattice(A, F, j)
    kappa, lam = couplings(cfg)
    G = field_strength(A)
    density = kappa * contract(G, F) - 0.5 * lam * contract(F, F) + _source_term(A, j)
    return float(lattice.site_volume * np.sum(density))


def euler_lagrange_residuals(
    A: GaugeField,
    F: FieldStrengthVar,
    j: CurrentField,
    cfg: ActionConfig | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-site gradients of the first-order action divided by a^4.

    residual_F (..., 6) is 2 g (kappa G - lambda F); residual_A (..., 4) is
    j^nu - kappa sum_mu d*_mu (g_{mu nu} F_{mu nu}).
    """
    cfg = cfg or ActionConfig()
    same_lattice(A, F, j)
    kappa, lam = couplings(cfg)
    G = field_strength(A)
    residual_F = 2.0 * PAIR_METRIC * (kappa * G.values - lam * F.values)
    residual_A = j.values - kappa * tensor_divergence(F)
    return residual_F, residual_A


def summation_by_parts_terms(A: GaugeField, F: FieldStrengthVar) -> tuple[float, float]:
    """Both sides of sum G.F = -sum eta^{nu nu} A_nu eta^{mu mu} d*_mu F_{mu nu}."""
    same_lattice(A, F)
    lhs = float(np.sum(contract(field_strength(A), F)))
    rhs = -float(np.sum(A.values * tensor_divergence(F)))
    return lhs, rhs


# ── Reduced action ────────────────────────────────────────────────────


def reduced_action(A: GaugeField, j: CurrentField) -> float:
    """a^4 sum [G.G / 2 + A_mu j^mu]; the first-order action at F = G."""
    lattice = same_lattice(A, j)
    G = field_strength(A)
    density = 0.5 * contract(G, G) + _source_term(A, j)
    return float(lattice.site_volume * np.sum(density))


def reduced_residual_A(A: GaugeField, j: CurrentField) -> np.ndarray:
    same_lattice(A, j)
    return j.values - tensor_divergence(field_strength(A))


# ── Doubled fields ────────────────────────────────────────────────────


def doubled_action(
    A: GaugeField,
    B: GaugeField,
    A_tilde: GaugeField,
    j: CurrentField,
) -> float:
    """Action with F replaced by the curl of a second potential.

    a^4 sum [A_mu d*_nu F^{mu nu} + B_mu eps^{mu nu rho sigma} d_nu F_{rho sigma}
    + A_mu j^mu] with F = G(A_tilde). The B term is a discrete Bianchi
    identity and vanishes to roundoff.
    """
    lattice = same_lattice(A, B, A_tilde, j)
    F = field_strength(A_tilde)
    # d*_nu F^{mu nu} = sum_nu d*_nu (g_{mu nu} F_{mu nu}) = -tensor_divergence(F)_mu
    divergence = -tensor_divergence(F)
    density = (
        np.sum(A.values * divergence, axis=-1)
        + np.sum(B.values * bianchi_defect(F), axis=-1)
        + _source_term(A, j)
    )
    return float(lattice.site_volume * np.sum(density))


def doubled_residual_B(A_tilde: GaugeField) -> np.ndarray:
    """Gradient density of doubled_action with respect to B."""
    return bianchi_defect(field_strength(A_tilde))


def lattice_momentum(mode: Sequence[int], lattice: Lattice4) -> np.ndarray:
    """k_mu = 2 pi m_mu / (n_mu a) for integer mode numbers m."""
    m = np.asarray(mode, dtype=float)
    if m.shape != (4,):
        raise ValueError(f"mode needs 4 components, got shape {m.shape}")
    return 2.0 * np.pi * m / (np.array(lattice.shape) * lattice.a)


def _cosine_mode(lattice: Lattice4, k: np.ndarray, polarization: np.ndarray) -> GaugeField:
    phase = lattice.coordinates() @ k
    return GaugeField(lattice, np.cos(phase)[..., None] * polarization)


def doubled_sector_signature(k: np.ndarray, lattice: Lattice4 | None = None) -> tuple[int, int]:
    """Kinetic signs of the A(+) ~ A + A_tilde and A(-) ~ A - A_tilde sectors.

    Each sector form is the second variation of doubled_action along a
    cosine mode of momentum k, compared with the Maxwell form that
    reduced_action gives along the same mode. k must be periodic on the
    lattice.
    """
    lattice = lattice or Lattice4.hypercube(8)
    k = np.asarray(k, dtype=float)
    if k.shape != (4,):
        raise ValueError(f"lattice momentum must have 4 components, got shape {k.shape}")
    sizes = np.array(lattice.shape)
    modes = k * sizes * lattice.a / (2.0 * np.pi)
    if np.max(np.abs(modes - np.rint(modes))) > 1e-9:
        raise ValueError(f"momentum {tuple(k)} is not periodic on lattice {lattice.shape}")
    if not np.any(np.rint(modes).astype(int) % sizes):
        raise ValueError(f"momentum {tuple(k)} is a zero mode of lattice {lattice.shape}")

    zero_A = GaugeField.zeros(lattice)
    zero_j = CurrentField.zeros(lattice)
    candidates = [_cosine_mode(lattice, k, e) for e in np.eye(4)]
    reference = [reduced_action(v, zero_j) for v in candidates]
    best = int(np.argmax(np.abs(reference)))
    v, maxwell = candidates[best], reference[best]
    if maxwell == 0.0:
        raise ValueError(f"momentum {tuple(k)} gives a vanishing kinetic form")

    half = GaugeField(lattice, 0.5 * v.values)
    plus = doubled_action(half, zero_A, half, zero_j)
    minus = doubled_action(half, zero_A, GaugeField(lattice, -0.5 * v.values), zero_j)

    # the sectors decouple when the A / A_tilde cross form is symmetric
    w = GaugeField(lattice, sum(c.values for i, c in enumerate(candidates) if i != best))
    asymmetry = doubled_action(v, zero_A, w, zero_j) - doubled_action(w, zero_A, v, zero_j)
    if abs(asymmetry) > 1e-10 * abs(maxwell):
        logger.warning("Doubled sectors did not decouple (cross form %.3e)", asymmetry)

    signs = (int(np.sign(plus / maxwell)), int(np.sign(minus / maxwell)))
    logger.debug(
        "Doubled sector forms at k=%s: %+.6e, %+.6e against Maxwell %+.6e",
        tuple(k), plus, minus, maxwell,
    )
    return signs
