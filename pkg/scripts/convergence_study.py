#!/usr/bin/env python3
"""Refinement study of the finite-difference evolver against the spectral one.

Usage:
    python -m scripts.convergence_study [--sizes 16 32 64] [--t-final 1.0]

Builds the same band-limited transverse field on each cubic grid of a fixed
2*pi box, evolves it with both methods, and logs the discrepancy together
with the ratio between successive resolutions (4 for second-order spatial
accuracy).
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from src.config import get_settings
from src.fields.models import Grid3, UnitsConfig
from src.fields.sources import random_transverse_field
from src.propagation.crosscheck import crosscheck_report
from src.propagation.models import PropagationConfig

logger = logging.getLogger(__name__)


def run_study(
    sizes: list[int],
    t_final: float = 1.0,
    seed: int = 0,
    max_mode: int = 2,
    sign: int = 1,
) -> list[tuple[int, float]]:
    units = UnitsConfig()
    cfg = PropagationConfig(t_final=t_final, sign=sign)
    rows: list[tuple[int, float]] = []

    for n in sorted(sizes):
        grid = Grid3.cube(n, length=2.0 * np.pi)
        f0 = random_transverse_field(grid, seed=seed, max_mode=max_mode, sign=sign)
        report = crosscheck_report(f0, cfg, units)
        rows.append((n, report.discrepancy))
        logger.info(
            "n=%3d dx=%.4f steps=%d discrepancy=%.6e FD energy drift=%.3e",
            n,
            grid.dx,
            report.finite_difference.steps,
            report.discrepancy,
            report.finite_difference.energy_drift,
        )

    logger.info("=" * 60)
    for (n_coarse, e_coarse), (n_fine, e_fine) in zip(rows, rows[1:]):
        ratio = e_coarse / e_fine if e_fine > 0 else float("inf")
        logger.info("  %d -> %d: ratio %.3f (second order gives %.1f)", n_coarse, n_fine, ratio, (n_fine / n_coarse) ** 2)
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description="FD vs spectral refinement study")
    parser.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64], help="Grid points per axis")
    parser.add_argument("--t-final", type=float, default=1.0, help="Evolution time")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the random transverse field")
    parser.add_argument("--max-mode", type=int, default=2, help="Band limit in integer mode units")
    parser.add_argument("--sign", type=int, choices=(1, -1), default=1, help="Helicity branch")
    args = parser.parse_args()

    logging.basicConfig(
        level=getattr(logging, get_settings().log_level, logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stdout,
    )
    run_study(args.sizes, args.t_final, args.seed, args.max_mode, args.sign)


if __name__ == "__main__":
    main()
