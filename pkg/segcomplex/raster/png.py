"""Optional Pillow-backed loader for non-Netpbm images (PNG, JPEG, TIFF, ...)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

try:
    from PIL import Image
except ImportError:  # pragma: no cover - optional dependency
    Image = None

from segcomplex.errors import DataIOError, UnsupportedFormatError
from segcomplex.raster.color import to_gray
from segcomplex.raster.models import BinaryMask, GrayImage


def available() -> bool:
    return Image is not None


def load_gray_pil(path: Path | str) -> GrayImage:
    pixels, maxval = _read(path)
    values = pixels.astype(np.float64) / maxval
    if values.ndim == 3:
        return to_gray(values[..., :3])
    return GrayImage(values)


def load_mask_pil(path: Path | str) -> BinaryMask:
    pixels, maxval = _read(path)
    values = pixels.astype(np.float64) / maxval
    if values.ndim == 3:
        values = to_gray(values[..., :3]).data
    return BinaryMask(values >= 0.5)


def _read(path: Path | str):
    if Image is None:
        raise UnsupportedFormatError(path, 0, "non-Netpbm image and Pillow is not installed")
    try:
        with Image.open(path) as img:
            if img.mode in ("1", "L", "P", "LA", "PA"):
                img = img.convert("L")
            elif img.mode in ("I;16", "I;16B", "I"):
                arr = np.array(img, dtype=np.int64)
                return np.clip(arr, 0, 65535), 65535 if arr.max(initial=0) > 255 else 255
            else:
                img = img.convert("RGB")
            return np.array(img, dtype=np.int64), 255
    except FileNotFoundError as exc:
        raise DataIOError(f"{path}: file not found") from exc
    except OSError as exc:
        raise UnsupportedFormatError(path, 0, f"cannot decode image ({exc})") from exc
