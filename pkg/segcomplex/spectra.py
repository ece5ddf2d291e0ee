"""Fourier analysis on gray rasters: the unnormalized 2-D DFT, the radially binned power
spectrum behind the mean/median frequency measures, and the brick-wall low-pass used by
the degradation pipeline.

Transforms run at the raw image size through ``scipy.fft`` (mixed-radix with a Bluestein
fallback), so sizes such as 565x584 need no padding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np
from scipy import fft as sfft

from segcomplex.errors import ValidationError
from segcomplex.raster.models import GrayImage

DEFAULT_BINS = 256
# Per-axis frequencies within this distance of the cutoff count as on it.
_CUTOFF_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class PowerSpectrum:
    bin_center: np.ndarray
    power: np.ndarray
    degenerate: bool = False

    def __post_init__(self) -> None:
        centers = np.array(self.bin_center, dtype=np.float64, copy=True)
        power = np.array(self.power, dtype=np.float64, copy=True)
        if centers.ndim != 1 or centers.size == 0 or centers.shape != power.shape:
            raise ValidationError("spectrum needs equal-length, non-empty center and power arrays")
        if np.any(np.diff(centers) <= 0) or centers[0] <= 0 or centers[-1] > 0.5:
            raise ValidationError("bin centers must increase strictly within (0, 0.5]")
        if not np.all(np.isfinite(power)) or np.any(power < 0):
            raise ValidationError("spectral power must be finite and non-negative")
        centers.setflags(write=False)
        power.setflags(write=False)
        object.__setattr__(self, "bin_center", centers)
        object.__setattr__(self, "power", power)

    @property
    def bin_count(self) -> int:
        return int(self.bin_center.size)

    @property
    def total_power(self) -> float:
        return float(self.power.sum())

    def rows(self) -> Iterator[Tuple[float, float]]:
        for center, power in zip(self.bin_center.tolist(), self.power.tolist()):
            yield center, power


def bin_centers(bins: int) -> np.ndarray:
    return (np.arange(bins, dtype=np.float64) + 0.5) * (0.5 / bins)


def dft2(image: GrayImage, *, workers: Optional[int] = None) -> np.ndarray:
    """Unnormalized forward transform indexed ``[v, u]`` like the image's ``[row, col]``."""
    return sfft.fft2(image.data, workers=workers)


def radial_power_spectrum(
    image: GrayImage, bins: int = DEFAULT_BINS, *, workers: Optional[int] = None
) -> PowerSpectrum:
    """Mean-removed power binned by radial frequency ``hypot(u/W, v/H)`` over (0, 0.5].

    DC and the corner frequencies beyond 0.5 are dropped. A flat image yields an all-zero
    spectrum flagged ``degenerate``.
    """
    if bins < 1:
        raise ValidationError(f"bin count must be positive, got {bins}")
    if image.width < 2 or image.height < 2:
        raise ValidationError(f"power spectrum needs at least a 2x2 image, got {image.width}x{image.height}")

    centers = bin_centers(bins)
    data = image.data
    if np.ptp(data) == 0:
        return PowerSpectrum(centers, np.zeros(bins), degenerate=True)

    coeffs = sfft.fft2(data - data.mean(), workers=workers)
    radius = np.hypot(
        sfft.fftfreq(image.width)[np.newaxis, :],
        sfft.fftfreq(image.height)[:, np.newaxis],
    )
    keep = (radius > 0) & (radius <= 0.5)
    index = np.ceil(radius[keep] * (2 * bins)).astype(np.intp) - 1
    np.clip(index, 0, bins - 1, out=index)
    kept = coeffs[keep]
    power = np.bincount(index, weights=kept.real**2 + kept.imag**2, minlength=bins)
    return PowerSpectrum(centers, power)


def lowpass(image: GrayImage, cutoff: float, *, workers: Optional[int] = None) -> GrayImage:
    """Ideal separable low-pass: drop coefficients with ``|u/W| > cutoff`` or ``|v/H| > cutoff``."""
    if not 0.0 < cutoff <= 0.5:
        raise ValidationError(f"cutoff must lie in (0, 0.5], got {cutoff}")
    keep_rows = np.abs(sfft.fftfreq(image.height)) <= cutoff + _CUTOFF_SLACK
    keep_cols = np.abs(sfft.rfftfreq(image.width)) <= cutoff + _CUTOFF_SLACK
    if keep_rows.all() and keep_cols.all():
        return image

    coeffs = sfft.rfft2(image.data, workers=workers)
    coeffs[~keep_rows, :] = 0
    coeffs[:, ~keep_cols] = 0
    filtered = sfft.irfft2(coeffs, s=image.data.shape, workers=workers)
    return GrayImage(np.clip(filtered, 0.0, 1.0))


def spectrum_rows(spectrum: PowerSpectrum) -> List[Tuple[float, float]]:
    """``(bin_center, power)`` pairs in bin order, ready for CSV export."""
    return list(spectrum.rows())
