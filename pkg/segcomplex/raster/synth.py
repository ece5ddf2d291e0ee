"""Deterministic synthetic rasters: filled disks and rectangles, random-walk vessel trees
and uniform noise. Every generator is a pure function of its arguments."""

from __future__ import annotations

import math
from typing import Any, Mapping, Optional, Tuple, Union

import numpy as np

from segcomplex.errors import ValidationError
from segcomplex.raster.models import BinaryMask, GrayImage

KINDS = ("disk", "rectangle", "vessels", "noise")


def synth(
    kind: str,
    width: int,
    height: int,
    params: Optional[Mapping[str, Any]] = None,
    seed: Optional[int] = None,
) -> Union[GrayImage, BinaryMask]:
    if width < 1 or height < 1:
        raise ValidationError(f"frame must be at least 1x1, got {width}x{height}")
    params = dict(params or {})
    if kind == "disk":
        return disk(width, height, **params)
    if kind == "rectangle":
        return rectangle(width, height, **params)
    if kind == "vessels":
        return vessels(width, height, seed=_require_seed(kind, seed), **params)
    if kind == "noise":
        return noise(width, height, seed=_require_seed(kind, seed))
    raise ValidationError(f"unknown synthetic kind {kind!r}; expected one of {', '.join(KINDS)}")


def disk(
    width: int,
    height: int,
    r: float,
    cx: Optional[float] = None,
    cy: Optional[float] = None,
) -> BinaryMask:
    """Pixels whose centers lie strictly inside the circle; ``r = 0`` is empty."""
    cx = (width - 1) / 2 if cx is None else float(cx)
    cy = (height - 1) / 2 if cy is None else float(cy)
    if r < 0:
        raise ValidationError(f"disk radius must be non-negative, got {r}")
    if cx - r < -0.5 or cy - r < -0.5 or cx + r > width - 0.5 or cy + r > height - 0.5:
        raise ValidationError(
            f"disk (cx={cx}, cy={cy}, r={r}) exceeds the {width}x{height} frame"
        )
    ys, xs = np.ogrid[:height, :width]
    return BinaryMask((xs - cx) ** 2 + (ys - cy) ** 2 < r * r)


def rectangle(
    width: int,
    height: int,
    x0: int = 0,
    y0: int = 0,
    rect_width: Optional[int] = None,
    rect_height: Optional[int] = None,
) -> BinaryMask:
    rect_width = width - x0 if rect_width is None else rect_width
    rect_height = height - y0 if rect_height is None else rect_height
    if x0 < 0 or y0 < 0 or rect_width < 0 or rect_height < 0:
        raise ValidationError("rectangle offsets and sizes must be non-negative")
    if x0 + rect_width > width or y0 + rect_height > height:
        raise ValidationError(
            f"rectangle ({x0}, {y0}, {rect_width}x{rect_height}) exceeds the {width}x{height} frame"
        )
    data = np.zeros((height, width), dtype=bool)
    data[y0 : y0 + rect_height, x0 : x0 + rect_width] = True
    return BinaryMask(data)


def vessels(
    width: int,
    height: int,
    *,
    seed: int,
    count: int = 6,
    vessel_width: Optional[int] = None,
    length: Optional[int] = None,
    turn: float = 0.25,
    trunks: int = 0,
) -> BinaryMask:
    """Draw ``count`` random-walk polylines with unit steps.

    Each walk starts on a random pixel with a random heading, perturbs the heading by
    ``normal(0, turn)`` radians per step and stops after ``length`` steps or on leaving the
    frame. Stroke width is ``vessel_width`` or, when omitted, drawn per walk from {1, 2, 3}.

    ``trunks`` width-3 walks are drawn before the others. With ``vessel_width`` fixed the
    random stream does not depend on ``count``, so raising ``count`` only adds walks to the
    same mask.
    """
    if count < 1:
        raise ValidationError(f"vessel count must be positive, got {count}")
    if trunks < 0:
        raise ValidationError(f"trunk count must be non-negative, got {trunks}")
    if trunks and (width < 3 or height < 3):
        raise ValidationError(f"width-3 trunks do not fit a {width}x{height} frame")
    if vessel_width is not None and vessel_width not in (1, 2, 3):
        raise ValidationError(f"vessel width must be 1, 2 or 3 pixels, got {vessel_width}")
    if vessel_width is not None and (vessel_width > width or vessel_width > height):
        raise ValidationError(f"vessel width {vessel_width} exceeds the {width}x{height} frame")
    steps = max(width, height) if length is None else int(length)
    rng = _rng(seed)
    data = np.zeros((height, width), dtype=bool)
    strokes = [3] * trunks + [vessel_width] * count
    for stroke in strokes:
        if stroke is None:
            stroke = int(rng.integers(1, 4))
        x = float(rng.uniform(0, width - 1))
        y = float(rng.uniform(0, height - 1))
        heading = float(rng.uniform(0.0, 2.0 * math.pi))
        for _ in range(steps):
            _stamp(data, x, y, stroke)
            heading += float(rng.normal(0.0, turn))
            x += math.cos(heading)
            y += math.sin(heading)
            if not (-0.5 <= x < width - 0.5 and -0.5 <= y < height - 0.5):
                break
    return BinaryMask(data)


def noise(width: int, height: int, *, seed: int) -> GrayImage:
    return GrayImage(_rng(seed).random((height, width)))


def _stamp(data: np.ndarray, x: float, y: float, stroke: int) -> None:
    height, width = data.shape
    col = int(round(x)) - (stroke - 1) // 2
    row = int(round(y)) - (stroke - 1) // 2
    r0, r1 = max(row, 0), min(row + stroke, height)
    c0, c1 = max(col, 0), min(col + stroke, width)
    if r0 < r1 and c0 < c1:
        data[r0:r1, c0:c1] = True


def _require_seed(kind: str, seed: Optional[int]) -> int:
    if seed is None:
        raise ValidationError(f"synthetic kind {kind!r} requires a seed")
    return seed


def _rng(seed: int) -> np.random.Generator:
    if not 0 <= int(seed) < 2**64:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.default_rng(int(seed))


def synthetic_pair(kind: str, size: int, seed: int) -> Tuple[GrayImage, BinaryMask]:
    """A ``size`` x ``size`` mask of the given kind plus a noisy gray rendering of it.

    Disks get a seeded radius in [size/8, size/3] and a center that keeps them inside the
    frame; vessel trees get 3 to 6 walks. The image is ``0.25 + 0.5 * mask`` plus uniform
    noise of amplitude 0.1, clipped to [0, 1].
    """
    rng = _rng(seed)
    if kind == "disk":
        r = float(rng.uniform(size / 8, size / 3))
        lo, hi = r - 0.5, size - 0.5 - r
        mask = disk(size, size, r, cx=float(rng.uniform(lo, hi)), cy=float(rng.uniform(lo, hi)))
    elif kind == "vessels":
        mask = vessels(size, size, seed=int(rng.integers(0, 2**63)), count=int(rng.integers(3, 7)))
    else:
        raise ValidationError(f"synthetic datasets support disk or vessels, got {kind!r}")
    jitter = rng.random((size, size)) - 0.5
    image = GrayImage(np.clip(0.25 + 0.5 * mask.data + 0.1 * jitter, 0.0, 1.0))
    return image, mask
