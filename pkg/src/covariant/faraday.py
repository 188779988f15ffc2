from __future__ import annotations

import logging

import numpy as np

from src.covariant.algebra import ETA, PAULI, epsilon_spinor, lorentz_from_sl2c, sigma_set
from src.covariant.models import (
    AntisymTensor,
    NotSelfDualError,
    SelfDualParts,
    SL2C,
    SymmetricSpinor,
)
from src.fields.models import UnitsConfig
from src.spin.algebra import LEVI_CIVITA_3

logger = logging.getLogger(__name__)

SELF_DUAL_TOLERANCE = 1e-10


# ── Faraday tensor ────────────────────────────────────────────────────


def faraday_from_em(
    E: np.ndarray,
    B: np.ndarray,
    units: UnitsConfig | None = None,
    lower: bool = False,
) -> AntisymTensor:
    """F^{0i} = -E_i/c, F^{ij} = -eps^{ijk} B_k; complex E, B are accepted."""
    units = units or UnitsConfig()
    E = np.asarray(E, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    F = np.zeros((4, 4), dtype=np.complex128)
    F[0, 1:] = -E / units.c
    F[1:, 0] = E / units.c
    F[1:, 1:] = -np.einsum("ijk,k->ij", LEVI_CIVITA_3, B)
    tensor = AntisymTensor(components=F, lower=False)
    return lowered(tensor) if lower else tensor


def lowered(F: AntisymTensor) -> AntisymTensor:
    if F.lower:
        return F
    return AntisymTensor(components=ETA @ F.components @ ETA, lower=True)


def raised(F: AntisymTensor) -> AntisymTensor:
    if not F.lower:
        return F
    return AntisymTensor(components=ETA @ F.components @ ETA, lower=False)


def em_from_faraday(F: AntisymTensor, units: UnitsConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    units = units or UnitsConfig()
    up = raised(F).components
    E = -units.c * up[0, 1:]
    B = -0.5 * np.einsum("ijk,ij->k", LEVI_CIVITA_3, up[1:, 1:])
    return E, B


def transform_tensor(F: AntisymTensor, A: SL2C) -> AntisymTensor:
    """F'^{mu nu} = Lambda^mu_rho Lambda^nu_sigma F^{rho sigma}, index position kept."""
    L = lorentz_from_sl2c(A).matrix
    up = raised(F).components
    moved = AntisymTensor(components=L @ up @ L.T, lower=False)
    return lowered(moved) if F.lower else moved


# ── Duality ───────────────────────────────────────────────────────────


def dual(F: AntisymTensor) -> AntisymTensor:
    """(i/2) eps_{mu nu rho sigma} F^{rho sigma}; squares to the identity."""
    eps = epsilon_spinor()
    up = raised(F).components
    D = AntisymTensor(
        components=0.5j * np.einsum("mnrs,rs->mn", eps.four_low, up), lower=True
    )
    return D if F.lower else raised(D)


def selfdual_split(F: AntisymTensor) -> SelfDualParts:
    D = dual(F)
    return SelfDualParts(
        plus=F.with_components(F.components + D.components),
        minus=F.with_components(F.components - D.components),
    )


def _check_duality(F: AntisymTensor, eigenvalue: int) -> None:
    defect = np.max(np.abs(dual(F).components - eigenvalue * F.components))
    scale = max(1.0, float(np.max(np.abs(F.components))))
    if defect > SELF_DUAL_TOLERANCE * scale:
        kind = "self-dual" if eigenvalue == 1 else "anti-self-dual"
        raise NotSelfDualError(f"tensor is not {kind} (defect {defect:.3e})")


def helicity_vector(F: AntisymTensor) -> np.ndarray:
    """The three F_{0i} (lower) components; E/c + iB for the self-dual part."""
    return lowered(F).components[0, 1:].copy()


def selfdual_from_vector(Fvec: np.ndarray, eigenvalue: int = 1) -> AntisymTensor:
    """Rebuild a (anti-)self-dual tensor from its F_{0i}: F_{ij} = +/- i eps_ijk F_k."""
    Fvec = np.asarray(Fvec, dtype=np.complex128)
    T = np.zeros((4, 4), dtype=np.complex128)
    T[0, 1:] = Fvec
    T[1:, 0] = -Fvec
    T[1:, 1:] = eigenvalue * 1j * np.einsum("ijk,k->ij", LEVI_CIVITA_3, Fvec)
    return AntisymTensor(components=T, lower=True)


# ── Spinor form ───────────────────────────────────────────────────────


def spinor_from_vector(Fvec: np.ndarray) -> np.ndarray:
    """F_(ab) = F_i (sigma-bar^i eps)_ab for arrays of vectors (..., 3) -> (..., 2, 2)."""
    sb_eps = sigma_set().sigma_bar[1:] @ epsilon_spinor().up
    return np.tensordot(np.asarray(Fvec, dtype=np.complex128), sb_eps, axes=(-1, 0))


def conjugate_spinor_from_vector(Fvec: np.ndarray) -> np.ndarray:
    """F-bar_(a'b') = F_i (eps sigma^i), the dotted partner for the anti-self-dual vector."""
    eps_sigma = epsilon_spinor().up @ PAULI
    return np.tensordot(np.asarray(Fvec, dtype=np.complex128), eps_sigma, axes=(-1, 0))


def vector_from_spinor(S: np.ndarray) -> np.ndarray:
    """Inverse of spinor_from_vector: F_i = tr(sigma_i S eps) / 2."""
    S_eps = np.asarray(S) @ epsilon_spinor().up
    return 0.5 * np.einsum("iab,...ba->...i", PAULI, S_eps)


def vector_from_conjugate_spinor(S_bar: np.ndarray) -> np.ndarray:
    eps_S = epsilon_spinor().low @ np.asarray(S_bar)
    return 0.5 * np.einsum("iab,...ba->...i", PAULI, eps_S)


def spinor_from_selfdual(Fplus: AntisymTensor) -> SymmetricSpinor:
    _check_duality(Fplus, 1)
    return SymmetricSpinor(matrix=spinor_from_vector(helicity_vector(Fplus)))


def conjugate_spinor_from_antiselfdual(Fminus: AntisymTensor) -> SymmetricSpinor:
    _check_duality(Fminus, -1)
    return SymmetricSpinor(
        matrix=conjugate_spinor_from_vector(helicity_vector(Fminus)), dotted=True
    )


def selfdual_from_spinor(S: SymmetricSpinor) -> AntisymTensor:
    """Lower-index tensor whose spinor (or dotted spinor) is S."""
    if S.dotted:
        return selfdual_from_vector(vector_from_conjugate_spinor(S.matrix), eigenvalue=-1)
    return selfdual_from_vector(vector_from_spinor(S.matrix), eigenvalue=1)


# ── Covariance ────────────────────────────────────────────────────────


def covariance_check(
    A: SL2C,
    E: np.ndarray,
    B: np.ndarray,
    units: UnitsConfig | None = None,
) -> float:
    """Max discrepancy between transforming spinors by A and tensors by Lambda(A).

    Undotted spinors go as A S A^T, dotted ones as conj(A) S A^dagger.
    """
    F = faraday_from_em(E, B, units, lower=True)
    parts = selfdual_split(F)
    S = spinor_from_selfdual(parts.plus).matrix
    S_bar = conjugate_spinor_from_antiselfdual(parts.minus).matrix

    moved = selfdual_split(transform_tensor(F, A))
    S_moved = spinor_from_selfdual(moved.plus).matrix
    S_bar_moved = conjugate_spinor_from_antiselfdual(moved.minus).matrix

    a = A.matrix
    undotted = np.max(np.abs(a @ S @ a.T - S_moved))
    dotted = np.max(np.abs(a.conj() @ S_bar @ a.conj().T - S_bar_moved))
    discrepancy = float(max(undotted, dotted))
    logger.debug("Covariance discrepancy %.3e", discrepancy)
    return discrepancy
