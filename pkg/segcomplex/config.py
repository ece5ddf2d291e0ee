from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

try:
    from dotenv import load_dotenv
except ImportError:  # pragma: no cover - optional dependency
    load_dotenv = None

from segcomplex.errors import ConfigError


class Settings:
    """Simple settings container backed by environment variables."""

    def __init__(self) -> None:
        if load_dotenv:
            # Always load the repo-root .env regardless of current working directory.
            repo_root = Path(__file__).resolve().parents[1]
            load_dotenv(dotenv_path=repo_root / ".env")

        self.jobs = _int_env("SEGC_JOBS", 1, minimum=1)
        self.bins = _int_env("SEGC_BINS", 256, minimum=1)
        self.threshold_levels = _int_env("SEGC_THRESHOLD_LEVELS", 256, minimum=2)

        workers = os.environ.get("SEGC_FFT_WORKERS", "").strip()
        self.fft_workers = _int_env("SEGC_FFT_WORKERS", 1, minimum=1) if workers else None

        self.epsilon = _float_env("SEGC_EPSILON", 0.05)
        self.tau = _float_env("SEGC_TAU", 0.05)

        level = os.environ.get("SEGC_LOG_LEVEL", "INFO").strip().upper() or "INFO"
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ConfigError(f"SEGC_LOG_LEVEL must be a logging level name, got {level!r}")
        self.log_level = level

        self.drive_manifest = _path_env("SEGC_DRIVE_MANIFEST")
        self.mc_manifest = _path_env("SEGC_MC_MANIFEST")


@lru_cache()
def get_settings() -> Settings:
    """Return a cached Settings instance."""
    return Settings()


def _int_env(name: str, default: int, *, minimum: int) -> int:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from exc
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


def _float_env(name: str, default: float) -> float:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from exc
    if not value > 0:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def _path_env(name: str) -> Path | None:
    raw = os.environ.get(name, "").strip()
    return Path(raw).expanduser() if raw else None
