from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from src.spin.models import HelicitySpectrum
from src.vortex.models import VortexLineSet

SPECTRUM_HEADER = ["kx", "ky", "kz", "abs_a_plus", "abs_a_minus", "abs_a_zero"]
VORTEX_HEADER = ["line_id", "x", "y", "z", "residual"]


def _num(value: float) -> str:
    return format(float(value), ".17g")


def write_spectrum_csv(spectrum: HelicitySpectrum, path: str | Path) -> int:
    """One row per Fourier mode in FFT index order; returns the row count."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    k = spectrum.k.reshape(-1, 3)
    columns = (
        np.abs(spectrum.a_plus).ravel(),
        np.abs(spectrum.a_minus).ravel(),
        np.abs(spectrum.a_zero).ravel(),
    )
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SPECTRUM_HEADER)
        for i in range(len(k)):
            writer.writerow([_num(v) for v in (*k[i], *(c[i] for c in columns))])
    return len(k)


def write_vortex_csv(lines: VortexLineSet, path: str | Path) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = 0
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(VORTEX_HEADER)
        for line_id, line in enumerate(lines.lines):
            for point, residual in zip(line.points, line.residuals):
                writer.writerow([line_id, *(_num(c) for c in point), _num(residual)])
                rows += 1
    return rows
