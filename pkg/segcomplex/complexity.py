"""Image complexity measures: delentropy (DE), mean and median frequency (MNF, MDF) of the
radial power spectrum, and perimetric complexity (PC) of a mask, plus per-dataset reports."""

from __future__ import annotations

import logging
import math
import statistics
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from segcomplex.errors import UndefinedMeasureError, ValidationError
from segcomplex.pipeline import labelled, map_items
from segcomplex.raster.manifest import load_item
from segcomplex.raster.models import BinaryMask, DatasetManifest, GrayImage, ManifestItem
from segcomplex.spectra import DEFAULT_BINS, PowerSpectrum, radial_power_spectrum

logger = logging.getLogger(__name__)

QUANTIZATION_LEVELS = 256
# Entropy of a uniform deldensity over the full [-255, 255]^2 gradient grid, with the 1/2 factor.
DELENTROPY_CEILING = 0.5 * math.log2(511**2)

# Length credited to one half-diagonal marching-squares segment. A digitized curve is a
# staircase; with this weight the segment counts of any straight edge reproduce its true
# length on average over orientations, so a digital disk scores PC = 1.
DIAGONAL_WEIGHT = (math.pi / 4 - math.sqrt(2) + 1) / (2 - math.sqrt(2))
# Raw polygon length of a half-diagonal segment, for the uncorrected contour length.
POLYGON_DIAGONAL_WEIGHT = math.sqrt(0.5)

# Marching-squares case code = tl + 2*tr + 4*br + 8*bl.
_ONE_DIAGONAL_CASES = (1, 2, 4, 8, 7, 11, 13, 14)
_AXIS_CASES = (3, 6, 9, 12)
_SADDLE_CASES = (5, 10)


@dataclass(frozen=True, eq=False)
class Deldensity:
    """Joint gradient histogram; ``probabilities[fy + G, fx + G]``."""

    half_range: int
    probabilities: np.ndarray

    def probability(self, fx: int, fy: int) -> float:
        g = self.half_range
        if abs(fx) > g or abs(fy) > g:
            return 0.0
        return float(self.probabilities[fy + g, fx + g])


@dataclass(frozen=True)
class MeasureSet:
    de: Optional[float] = None
    mnf: Optional[float] = None
    mdf: Optional[float] = None
    pc: Optional[float] = None

    def get(self, name: str) -> Optional[float]:
        return getattr(self, name.lower())


@dataclass(frozen=True)
class ImageComplexity:
    path: str
    measures: MeasureSet


@dataclass(frozen=True)
class ComplexityReport:
    dataset: str
    bins: int
    per_image: List[ImageComplexity] = field(default_factory=list)
    aggregate: MeasureSet = field(default_factory=MeasureSet)


def gradient_field(image: GrayImage) -> tuple[np.ndarray, np.ndarray]:
    """Central differences on 256-level intensities, edges replicated, rounded half away from zero."""
    levels = np.rint(image.data * (QUANTIZATION_LEVELS - 1)).astype(np.int64)
    padded = np.pad(levels, 1, mode="edge")
    fx = (padded[1:-1, 2:] - padded[1:-1, :-2]) / 2.0
    fy = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / 2.0
    return _round_half_away(fx), _round_half_away(fy)


def deldensity(image: GrayImage) -> Deldensity:
    if image.width < 2 or image.height < 2:
        raise ValidationError(f"deldensity needs at least a 2x2 image, got {image.width}x{image.height}")
    fx, fy = gradient_field(image)
    half_range = int(max(np.abs(fx).max(), np.abs(fy).max()))
    side = 2 * half_range + 1
    flat = (fy + half_range) * side + (fx + half_range)
    counts = np.bincount(flat.ravel(), minlength=side * side).reshape(side, side)
    return Deldensity(half_range=half_range, probabilities=counts / counts.sum())


def delentropy(image: GrayImage) -> float:
    """Half the Shannon entropy (bits) of the deldensity, scaled so the uniform ceiling is 1."""
    p = deldensity(image).probabilities
    p = p[p > 0]
    raw = -0.5 * float(np.sum(p * np.log2(p)))
    return max(0.0, raw / DELENTROPY_CEILING)


def mnf(spectrum: PowerSpectrum) -> Optional[float]:
    total = spectrum.total_power
    if spectrum.degenerate or not total > 0:
        return None
    return float(np.dot(spectrum.bin_center, spectrum.power) / total)


def mdf(spectrum: PowerSpectrum) -> Optional[float]:
    """Lowest bin center whose cumulative power reaches half the total."""
    if spectrum.degenerate:
        return None
    cumulative = np.cumsum(spectrum.power)
    total = float(cumulative[-1])
    if not total > 0:
        return None
    index = int(np.searchsorted(cumulative, 0.5 * total, side="left"))
    return float(spectrum.bin_center[min(index, spectrum.bin_count - 1)])


def contour_segments(mask: BinaryMask) -> tuple[int, int]:
    """Count (axis, half-diagonal) segments of the marching-squares 0.5 iso-contour.

    The mask is zero-padded so every component closes. A saddle cell contributes two
    diagonal segments whichever way its center rule connects them.
    """
    padded = np.pad(mask.data, 1).astype(np.uint8)
    codes = (
        padded[:-1, :-1]
        + 2 * padded[:-1, 1:]
        + 4 * padded[1:, 1:]
        + 8 * padded[1:, :-1]
    )
    hist = np.bincount(codes.ravel(), minlength=16)
    axis = int(hist[list(_AXIS_CASES)].sum())
    diagonal = int(hist[list(_ONE_DIAGONAL_CASES)].sum()) + 2 * int(hist[list(_SADDLE_CASES)].sum())
    return axis, diagonal


def perimetric_complexity(mask: BinaryMask, *, diagonal_weight: float = DIAGONAL_WEIGHT) -> float:
    area = mask.foreground
    if area == 0:
        raise UndefinedMeasureError("perimetric complexity is undefined for an empty mask")
    axis, diagonal = contour_segments(mask)
    perimeter = axis + diagonal_weight * diagonal
    return perimeter * perimeter / (4.0 * math.pi * area)


def measure_image(
    image: GrayImage,
    mask: BinaryMask,
    *,
    bins: int = DEFAULT_BINS,
    label: str = "",
    workers: Optional[int] = None,
) -> MeasureSet:
    spectrum = radial_power_spectrum(image, bins, workers=workers)
    if spectrum.degenerate:
        logger.warning("%s: flat image, MNF and MDF are undefined", label or "image")
    try:
        pc = perimetric_complexity(mask)
    except UndefinedMeasureError:
        logger.warning("%s: empty mask, PC is undefined", label or "mask")
        pc = None
    return MeasureSet(de=delentropy(image), mnf=mnf(spectrum), mdf=mdf(spectrum), pc=pc)


def aggregate_measures(rows: Sequence[MeasureSet]) -> MeasureSet:
    """Unweighted mean of the defined values of each measure, reduced in input order."""
    return MeasureSet(**{name: _mean_defined(getattr(row, name) for row in rows) for name in ("de", "mnf", "mdf", "pc")})


def complexity_report(
    dataset: DatasetManifest,
    *,
    bins: int = DEFAULT_BINS,
    jobs: int = 1,
    workers: Optional[int] = None,
) -> ComplexityReport:
    logger.info("Measuring complexity of %s (%d item(s))", dataset.name, len(dataset))

    def measure(item: ManifestItem) -> ImageComplexity:
        path = dataset.display_path(item.image_path)
        with labelled(path):
            image, mask = load_item(item)
            measures = measure_image(image, mask, bins=bins, label=item.label, workers=workers)
        return ImageComplexity(path=path, measures=measures)

    per_image = map_items(measure, dataset.items, jobs=jobs)
    return ComplexityReport(
        dataset=dataset.name,
        bins=bins,
        per_image=per_image,
        aggregate=aggregate_measures([row.measures for row in per_image]),
    )


def _mean_defined(values) -> Optional[float]:
    defined = [value for value in values if value is not None]
    if not defined:
        return None
    return statistics.fmean(defined)


def _round_half_away(values: np.ndarray) -> np.ndarray:
    return (np.sign(values) * np.floor(np.abs(values) + 0.5)).astype(np.int64)
