from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator; PCG64 gives identical streams on every platform."""
    return np.random.Generator(np.random.PCG64(seed))
