from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv

load_dotenv(Path(__file__).resolve().parent.parent / ".env")


@dataclass(frozen=True)
class Settings:
    # FFT worker threads; None leaves scipy's default in place
    threads: int | None = None
    log_level: str = "INFO"

    # Tolerance on |det A - 1| for SL(2,C) inputs
    det_tolerance: float = 1e-12

    @classmethod
    def from_env(cls) -> Settings:
        threads_raw = os.environ.get("RSWAVE_THREADS", "").strip()
        threads = int(threads_raw) if threads_raw.isdigit() and int(threads_raw) > 0 else None
        return cls(
            threads=threads,
            log_level=os.environ.get("RSWAVE_LOG_LEVEL", "INFO").upper(),
        )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings.from_env()
