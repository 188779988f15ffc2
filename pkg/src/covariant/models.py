from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.config import get_settings


class NotUnimodularError(ValueError):
    """Raised when a 2x2 matrix offered as an SL(2,C) element has det != 1."""


class NotSelfDualError(ValueError):
    """Raised when a tensor is not in the eigenspace of the dual the caller asked for."""


def _as_fixed(name: str, values: np.ndarray, shape: tuple[int, ...], dtype: type) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class FourVector:
    """Contravariant components (x0, x1, x2, x3) with x0 = ct."""

    components: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "components", _as_fixed("FourVector", self.components, (4,), np.float64)
        )


@dataclass(frozen=True)
class SL2C:
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_fixed("SL2C", self.matrix, (2, 2), np.complex128)
        det = np.linalg.det(m)
        scale = max(1.0, float(np.linalg.norm(m)) ** 2)
        if abs(det - 1.0) > get_settings().det_tolerance * scale * 10.0:
            raise NotUnimodularError(f"det A = {det:.6g}, expected 1")
        object.__setattr__(self, "matrix", m)

    def inverse(self) -> SL2C:
        a, b, c, d = self.matrix.ravel()
        return SL2C(np.array([[d, -b], [-c, a]]))

    def __matmul__(self, other: SL2C) -> SL2C:
        return SL2C(self.matrix @ other.matrix)

    def __neg__(self) -> SL2C:
        return SL2C(-self.matrix)


@dataclass(frozen=True)
class LorentzMatrix:
    """Real 4x4 matrix acting on contravariant components."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _as_fixed("Lorentz", self.matrix, (4, 4), np.float64))

    def metric_defect(self, eta: np.ndarray) -> float:
        """max |L^T eta L - eta|."""
        return float(np.max(np.abs(self.matrix.T @ eta @ self.matrix - eta)))

    def is_proper_orthochronous(self, eta: np.ndarray, tol: float = 1e-10) -> bool:
        return (
            self.metric_defect(eta) <= tol
            and abs(np.linalg.det(self.matrix) - 1.0) <= tol
            and self.matrix[0, 0] >= 1.0 - tol
        )


@dataclass(frozen=True)
class SigmaSet:
    """sigma^mu and sigma-bar^mu stacked along the first axis, each (4, 2, 2)."""

    sigma: np.ndarray
    sigma_bar: np.ndarray


@dataclass(frozen=True)
class EpsilonSpinor:
    # eps^{ab} with eps^{12} = +1, and eps_{ab} = -eps^{ab}
    up: np.ndarray
    low: np.ndarray
    # eps^{mu nu rho sigma} with eps^{0123} = +1
    four_up: np.ndarray
    four_low: np.ndarray


@dataclass(frozen=True)
class AntisymTensor:
    """Complex antisymmetric F_{mu nu} (``lower``) or F^{mu nu}."""

    components: np.ndarray
    lower: bool = True

    def __post_init__(self) -> None:
        c = _as_fixed("AntisymTensor", self.components, (4, 4), np.complex128)
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.max(np.abs(c + c.T)) > 1e-12 * scale:
            raise ValueError("tensor is not antisymmetric")
        object.__setattr__(self, "components", c)

    def with_components(self, components: np.ndarray) -> AntisymTensor:
        return AntisymTensor(components=components, lower=self.lower)


@dataclass(frozen=True)
class SelfDualParts:
    plus: AntisymTensor
    minus: AntisymTensor


@dataclass(frozen=True)
class SymmetricSpinor:
    """F_(ab) or, when ``dotted``, its conjugate-type partner."""

    matrix: np.ndarray
    dotted: bool = False

    def __post_init__(self) -> None:
        m = _as_fixed("SymmetricSpinor", self.matrix, (2, 2), np.complex128)
        scale = max(1.0, float(np.max(np.abs(m))))
        if abs(m[0, 1] - m[1, 0]) > 1e-12 * scale:
            raise ValueError("spinor is not symmetric")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class SpinorWaveResidual:
    """Covariant wave-operator output and its sigma-saturated components.

    ``saturation[..., 0]`` is the divergence part and ``saturation[..., 1:]``
    the first-order evolution part.
    """

    residual: np.ndarray
    saturation: np.ndarray

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.residual))) if self.residual.size else 0.0
