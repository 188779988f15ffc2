from __future__ import annotations

import logging
from collections.abc import Callable
from math import factorial

import numpy as np
from scipy.special import eval_genlaguerre

from src.fields.models import Grid3, RealEMField, RSField, UnitsConfig
from src.fields.rs import rs_from_em
from src.vortex.models import LGBeamParams

logger = logging.getLogger(__name__)


def phase_winding(values: np.ndarray) -> int:
    """Net number of 2 pi turns of arg(values) around a closed loop.

    ``values`` is ordered along the loop; the last sample connects back to
    the first.
    """
    values = np.asarray(values, dtype=np.complex128)
    steps = np.angle(np.roll(values, -1) * np.conj(values))
    return int(np.rint(np.sum(steps) / (2.0 * np.pi)))


def lg_envelope(
    params: LGBeamParams,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
    t: float = 0.0,
    units: UnitsConfig | None = None,
) -> np.ndarray:
    """Paraxial LG_{l,p} amplitude including the carrier exp(i(d k z - omega t)).

    Coordinates are measured from the waist centre on the beam axis.
    """
    units = units or UnitsConfig()
    k = params.wavenumber
    zr = params.rayleigh_range
    al = abs(params.l)
    # a beam running along -z is the mirror image in z
    zd = params.direction * np.asarray(z, dtype=float)

    rho2 = np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2
    phi = np.arctan2(y, x)
    w = params.w0 * np.sqrt(1.0 + (zd / zr) ** 2)
    inv_r = zd / (zd**2 + zr**2)
    gouy = np.arctan2(zd, zr)

    norm = np.sqrt(2.0 * factorial(params.p) / (np.pi * factorial(params.p + al)))
    radial = (np.sqrt(2.0 * rho2) / w) ** al * eval_genlaguerre(params.p, al, 2.0 * rho2 / w**2)
    envelope = (
        norm
        / w
        * radial
        * np.exp(-rho2 / w**2)
        * np.exp(0.5j * k * rho2 * inv_r)
        * np.exp(1j * params.l * phi)
        * np.exp(-1j * (2 * params.p + al + 1) * gouy)
    )
    carrier = np.exp(1j * (k * zd - units.c * k * t))
    return params.amplitude * envelope * carrier


def polarization_vector(params: LGBeamParams) -> np.ndarray:
    """Circular polarization of the given helicity for the propagation direction."""
    hd = params.polarization * params.direction
    return np.array([1.0, 1j * hd, 0.0]) / np.sqrt(2.0)


def _beam_origin(params: LGBeamParams, grid: Grid3) -> np.ndarray:
    centre = grid.center
    ax, ay = params.axis if params.axis is not None else (centre[0], centre[1])
    z0 = params.waist_z if params.waist_z is not None else centre[2]
    return np.array([ax, ay, z0])


def lg_complex_field(
    params: LGBeamParams,
    points: np.ndarray,
    origin: np.ndarray,
    t: float = 0.0,
    units: UnitsConfig | None = None,
) -> np.ndarray:
    """Complex electric field E~ = envelope * polarization at points (..., 3)."""
    rel = np.asarray(points, dtype=float) - origin
    u = lg_envelope(params, rel[..., 0], rel[..., 1], rel[..., 2], t, units)
    return u[..., None] * polarization_vector(params)


def lg_em_at(
    beams: list[LGBeamParams],
    grid: Grid3,
    points: np.ndarray,
    t: float = 0.0,
    units: UnitsConfig | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Real E and B of a superposition of LG beams at arbitrary points (..., 3).

    E is the real part of each complex field and B = khat x E / c with
    khat = direction * z. Beam axes default to the centre of ``grid``.
    """
    units = units or UnitsConfig()
    zhat = np.array([0.0, 0.0, 1.0])
    points = np.asarray(points, dtype=float)
    E = np.zeros(points.shape)
    B = np.zeros(points.shape)
    for beam in beams:
        Ec = lg_complex_field(beam, points, _beam_origin(beam, grid), t, units)
        E += Ec.real
        B += np.cross(beam.direction * zhat, Ec).real / units.c
    return E, B


def synth_lg_beam(
    params: LGBeamParams,
    grid: Grid3,
    t: float = 0.0,
    sign: int = 1,
    units: UnitsConfig | None = None,
    extra: list[LGBeamParams] | None = None,
) -> RSField:
    """RS field of a paraxial LG beam sampled on ``grid``, optionally with further beams."""
    units = units or UnitsConfig()
    extent = min(grid.lengths[0], grid.lengths[1])
    if extent < 4.0 * params.w0:
        logger.warning(
            "Transverse extent %.3g is below 4 w0 (%.3g); the beam is clipped", extent, 4 * params.w0
        )
    E, B = lg_em_at([params, *(extra or [])], grid, grid.coordinates(), t, units)
    return rs_from_em(RealEMField(grid=grid, E=E, B=B), sign, units)


def lg_vortex_sampler(
    beams: list[LGBeamParams],
    grid: Grid3,
    t: float = 0.0,
    sign: int = 1,
    units: UnitsConfig | None = None,
) -> Callable[[np.ndarray], np.ndarray]:
    """Exact F.F of the beam superposition, for vertex residuals and refinement."""
    units = units or UnitsConfig()

    def sample(points: np.ndarray) -> np.ndarray:
        E, B = lg_em_at(beams, grid, points, t, units)
        F = E / units.c + sign * 1j * B
        return np.sum(F * F, axis=-1)

    return sample


def counter_propagating_probe(params: LGBeamParams, strength: float) -> LGBeamParams:
    """Weak l = 0 Gaussian running against ``params`` on the same axis.

    Added to a beam it breaks the null-field identity F.F = 0 so that the
    beam's own zeros show up as vortex lines.
    """
    return params.model_copy(
        update={
            "l": 0,
            "p": 0,
            "direction": -params.direction,
            "amplitude": strength * params.amplitude,
        }
    )
