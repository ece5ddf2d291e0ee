"""Downsampling information-loss oracle.

A mask is treated as a gray image, low-passed at the resampling Nyquist, shrunk by the
factor with bilinear interpolation, enlarged back and re-binarized at the Dice-optimal
threshold. Comparing the result with the original mask measures what the factor destroys.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from segcomplex.errors import UndefinedMeasureError, ValidationError
from segcomplex.pipeline import labelled, map_items
from segcomplex.raster import load_mask_file
from segcomplex.raster.models import BinaryMask, DatasetManifest, GrayImage, ManifestItem
from segcomplex.segmetrics import SegMetrics, confusion, mean_metrics, seg_metrics
from segcomplex.spectra import lowpass

logger = logging.getLogger(__name__)

DEFAULT_FACTORS = (2, 3, 4)
DEFAULT_THRESHOLD_LEVELS = 256


@dataclass(frozen=True)
class DegradeConfig:
    factor: int
    threshold_levels: int = DEFAULT_THRESHOLD_LEVELS

    def __post_init__(self) -> None:
        if int(self.factor) != self.factor or self.factor < 1:
            raise ValidationError(f"downsampling factor must be an integer >= 1, got {self.factor}")
        if int(self.threshold_levels) != self.threshold_levels or self.threshold_levels < 2:
            raise ValidationError(f"threshold levels must be an integer >= 2, got {self.threshold_levels}")


@dataclass(frozen=True)
class ThresholdResult:
    threshold: float
    mask: BinaryMask
    dice: float


@dataclass(frozen=True)
class DegradationRow:
    dataset: str
    factor: int
    metrics: SegMetrics
    item: Optional[str] = None


def resize_bilinear(image: GrayImage, out_width: int, out_height: int) -> GrayImage:
    """Separable bilinear resize with pixel-center alignment and clamped edges."""
    if out_width < 1 or out_height < 1:
        raise ValidationError(f"output size must be at least 1x1, got {out_width}x{out_height}")
    if (out_width, out_height) == (image.width, image.height):
        return image
    r0, r1, rf = _axis_weights(image.height, out_height)
    c0, c1, cf = _axis_weights(image.width, out_width)
    data = image.data
    rows = data[r0, :] * (1.0 - rf)[:, np.newaxis] + data[r1, :] * rf[:, np.newaxis]
    out = rows[:, c0] * (1.0 - cf)[np.newaxis, :] + rows[:, c1] * cf[np.newaxis, :]
    return GrayImage(np.clip(out, 0.0, 1.0))


def optimal_threshold(
    gray: GrayImage, reference: BinaryMask, levels: int = DEFAULT_THRESHOLD_LEVELS
) -> ThresholdResult:
    """Sweep ``t = i / levels`` for i in 1..levels, keep the Dice-maximizing ``gray >= t``.

    Ties go to the smallest threshold. All thresholds are scored at once from cumulative
    histograms of how many sweep levels each pixel passes.
    """
    if gray.shape != reference.shape:
        raise ValidationError(
            f"gray image is {gray.width}x{gray.height} but reference is {reference.width}x{reference.height}"
        )
    if levels < 2:
        raise ValidationError(f"threshold levels must be >= 2, got {levels}")
    ref = reference.data
    ref_count = int(np.count_nonzero(ref))
    if ref_count == 0:
        raise UndefinedMeasureError("Dice is undefined against an empty reference mask")

    thresholds = np.arange(1, levels + 1, dtype=np.float64) / levels
    values = gray.data
    # passed[p] = number of thresholds <= value, i.e. p is foreground for thresholds[:passed[p]]
    passed = np.searchsorted(thresholds, values.ravel(), side="right")
    fg_hist = np.bincount(passed[ref.ravel()], minlength=levels + 1)
    all_hist = np.bincount(passed, minlength=levels + 1)
    tp = np.cumsum(fg_hist[::-1])[::-1][1:]
    selected = np.cumsum(all_hist[::-1])[::-1][1:]
    dice = 2.0 * tp / (selected + ref_count)

    best = int(np.argmax(dice))
    threshold = float(thresholds[best])
    return ThresholdResult(threshold=threshold, mask=BinaryMask(values >= threshold), dice=float(dice[best]))


def degrade_mask(mask: BinaryMask, config: DegradeConfig, *, workers: Optional[int] = None) -> BinaryMask:
    if mask.foreground == 0:
        raise UndefinedMeasureError("cannot degrade an empty mask: Dice against it is undefined")
    k = config.factor
    filtered = lowpass(mask.to_gray(), 0.5 / k, workers=workers)
    small = resize_bilinear(filtered, -(-mask.width // k), -(-mask.height // k))
    restored = resize_bilinear(small, mask.width, mask.height)
    return optimal_threshold(restored, mask, config.threshold_levels).mask


def degradation_metrics(
    mask: BinaryMask,
    factors: Sequence[int],
    *,
    threshold_levels: int = DEFAULT_THRESHOLD_LEVELS,
    workers: Optional[int] = None,
) -> List[SegMetrics]:
    """Metrics of the degraded mask against the original, one entry per factor."""
    rows = []
    for factor in factors:
        degraded = degrade_mask(mask, DegradeConfig(factor, threshold_levels), workers=workers)
        rows.append(seg_metrics(confusion(degraded, mask)))
    return rows


def run_experiment1(
    dataset: DatasetManifest,
    factors: Sequence[int] = DEFAULT_FACTORS,
    *,
    threshold_levels: int = DEFAULT_THRESHOLD_LEVELS,
    jobs: int = 1,
    per_image: bool = False,
    workers: Optional[int] = None,
) -> List[DegradationRow]:
    """Dataset-mean metrics per factor; with ``per_image`` the per-item rows come first."""
    factors = list(factors)
    if not factors:
        raise ValidationError("at least one downsampling factor is required")
    bad = [factor for factor in factors if factor < 2]
    if bad:
        raise ValidationError(f"downsampling factors must be >= 2, got {bad}")
    logger.info(
        "Degrading %s (%d item(s)) at factors %s",
        dataset.name,
        len(dataset),
        ",".join(str(f) for f in factors),
    )

    def degrade_item(item: ManifestItem) -> List[SegMetrics]:
        with labelled(dataset.display_path(item.mask_path)):
            mask = load_mask_file(item.mask_path)
            return degradation_metrics(mask, factors, threshold_levels=threshold_levels, workers=workers)

    per_item = map_items(degrade_item, dataset.items, jobs=jobs)

    rows: List[DegradationRow] = []
    if per_image:
        for item, metrics in zip(dataset.items, per_item):
            for factor, row in zip(factors, metrics):
                rows.append(DegradationRow(dataset.name, factor, row, item=dataset.display_path(item.mask_path)))
    for index, factor in enumerate(factors):
        rows.append(DegradationRow(dataset.name, factor, mean_metrics([m[index] for m in per_item])))
    return rows


def _axis_weights(n_in: int, n_out: int):
    src = (np.arange(n_out, dtype=np.float64) + 0.5) * (n_in / n_out) - 0.5
    np.clip(src, 0.0, n_in - 1, out=src)
    i0 = np.floor(src).astype(np.intp)
    i1 = np.minimum(i0 + 1, n_in - 1)
    return i0, i1, src - i0
