from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.fields.models import Grid3


class DegenerateModeError(ValueError):
    """Raised for the k = 0 mode, where khat and the helicity basis are undefined."""


@dataclass(frozen=True)
class SpinMatrices:
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    def as_array(self) -> np.ndarray:
        """Stacked (3, 3, 3) array, first index is the spatial direction."""
        return np.stack([self.sx, self.sy, self.sz])

    def dot(self, n: np.ndarray) -> np.ndarray:
        """s . n for a real 3-vector n."""
        return np.tensordot(np.asarray(n, dtype=float), self.as_array(), axes=(0, 0))


@dataclass(frozen=True)
class ModeHamiltonian:
    k: np.ndarray
    sign: int
    matrix: np.ndarray


@dataclass(frozen=True)
class Eigenpair:
    eigenvalue: float
    vector: np.ndarray
    # +1 / -1 for the transverse pair, 0 for the longitudinal vector
    helicity: int
    # c|k| for the transverse pair regardless of the eigenvalue's sign
    energy: float


@dataclass(frozen=True)
class HelicitySpectrum:
    """Per-mode amplitudes on the e+(k), e-(k), khat basis.

    Amplitudes are scaled so that the sum of |a|^2 over all modes and all
    three channels equals energy_norm of the source field.
    """

    grid: Grid3
    k: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    a_zero: np.ndarray
    helicity_sign: int = 1

    def total_energy(self) -> float:
        return float(
            np.sum(np.abs(self.a_plus) ** 2)
            + np.sum(np.abs(self.a_minus) ** 2)
            + np.sum(np.abs(self.a_zero) ** 2)
        )
