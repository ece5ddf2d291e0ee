from __future__ import annotations

import statistics
from dataclasses import dataclass, fields
from typing import Optional, Sequence

import numpy as np

from segcomplex.errors import ValidationError
from segcomplex.raster.models import BinaryMask

METRIC_NAMES = ("se", "sp", "a", "ba", "d", "j", "e")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def swapped(self) -> "ConfusionCounts":
        """Counts with segmentation and reference exchanged."""
        return ConfusionCounts(tp=self.tp, tn=self.tn, fp=self.fn, fn=self.fp)


@dataclass(frozen=True)
class SegMetrics:
    """Sensitivity, specificity, accuracy, balanced accuracy, Dice, Jaccard and E = 1 - J.

    A metric whose denominator is zero is ``None``.
    """

    se: Optional[float] = None
    sp: Optional[float] = None
    a: Optional[float] = None
    ba: Optional[float] = None
    d: Optional[float] = None
    j: Optional[float] = None
    e: Optional[float] = None

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def confusion(segmented: BinaryMask, reference: BinaryMask) -> ConfusionCounts:
    if segmented.shape != reference.shape:
        raise ValidationError(
            f"mask dimensions differ: {segmented.width}x{segmented.height} vs "
            f"{reference.width}x{reference.height}"
        )
    s = segmented.data
    g = reference.data
    return ConfusionCounts(
        tp=int(np.count_nonzero(s & g)),
        tn=int(np.count_nonzero(~s & ~g)),
        fp=int(np.count_nonzero(s & ~g)),
        fn=int(np.count_nonzero(~s & g)),
    )


def seg_metrics(counts: ConfusionCounts) -> SegMetrics:
    total = counts.total
    if total == 0:
        raise ValidationError("segmentation metrics need at least one pixel")
    tp, tn, fp, fn = counts.tp, counts.tn, counts.fp, counts.fn

    se = _ratio(tp, tp + fn)
    sp = _ratio(tn, tn + fp)
    j = _ratio(tp, tp + fp + fn)
    return SegMetrics(
        se=se,
        sp=sp,
        a=(tp + tn) / total,
        ba=(se + sp) / 2 if se is not None and sp is not None else None,
        d=_ratio(2 * tp, 2 * tp + fp + fn),
        j=j,
        e=1.0 - j if j is not None else None,
    )


def mean_metrics(rows: Sequence[SegMetrics]) -> SegMetrics:
    """Per-metric mean over the defined values, reduced in input order."""
    means = {}
    for name in METRIC_NAMES:
        defined = [getattr(row, name) for row in rows if getattr(row, name) is not None]
        means[name] = statistics.fmean(defined) if defined else None
    return SegMetrics(**means)


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    if denominator == 0:
        return None
    return numerator / denominator
