from __future__ import annotations

from typing import Sequence

import numpy as np

from segcomplex.errors import ValidationError
from segcomplex.raster.models import GrayImage

# ITU-R BT.601 luma weights.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def to_gray(rgb: np.ndarray | Sequence[np.ndarray]) -> GrayImage:
    """Convert an (H, W, 3) array, or three (H, W) channel arrays, to BT.601 luma."""
    if isinstance(rgb, np.ndarray) and rgb.ndim == 3:
        if rgb.shape[2] != 3:
            raise ValidationError(f"expected 3 channels, got {rgb.shape[2]}")
        channels = [rgb[..., index] for index in range(3)]
    else:
        channels = [np.asarray(channel, dtype=np.float64) for channel in rgb]
        if len(channels) != 3:
            raise ValidationError(f"expected 3 channels, got {len(channels)}")
        shapes = {channel.shape for channel in channels}
        if len(shapes) != 1:
            raise ValidationError(f"channel dimensions differ: {sorted(shapes)}")

    red, green, blue = (np.asarray(channel, dtype=np.float64) for channel in channels)
    luma = LUMA_WEIGHTS[0] * red + LUMA_WEIGHTS[1] * green + LUMA_WEIGHTS[2] * blue
    return GrayImage(np.clip(luma, 0.0, 1.0))
