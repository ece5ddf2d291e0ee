from __future__ import annotations

import numpy as np
import pytest

from segcomplex.config import get_settings
from segcomplex.raster import BinaryMask, GrayImage, write_synthetic_dataset
from segcomplex.raster.synth import disk


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    for name in (
        "SEGC_JOBS",
        "SEGC_BINS",
        "SEGC_THRESHOLD_LEVELS",
        "SEGC_FFT_WORKERS",
        "SEGC_EPSILON",
        "SEGC_TAU",
        "SEGC_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def disk_dataset(tmp_path):
    return write_synthetic_dataset(tmp_path / "disks", kind="disk", count=2, size=64, seed=5)


def random_gray(rng: np.random.Generator, height: int, width: int) -> GrayImage:
    return GrayImage(rng.random((height, width)))


def random_mask(rng: np.random.Generator, height: int, width: int, p: float = 0.5) -> BinaryMask:
    return BinaryMask(rng.random((height, width)) < p)


def disk_union(rng: np.random.Generator, size: int = 128) -> BinaryMask:
    """One to three disks of radius 14-30 placed fully inside a ``size`` frame."""
    mask = None
    for _ in range(int(rng.integers(1, 4))):
        r = float(rng.uniform(14, 30))
        cx, cy = rng.uniform(r, size - 1 - r, size=2)
        part = disk(size, size, r, cx=float(cx), cy=float(cy))
        mask = part if mask is None else mask | part
    return mask
