from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Tuple

import numpy as np

from segcomplex.errors import ValidationError


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Row-major intensities in [0, 1], shape (height, width)."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.data, np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValidationError(f"gray image must be a non-empty 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("gray image contains non-finite intensities")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValidationError(
                f"gray image intensities must lie in [0, 1], got [{arr.min()}, {arr.max()}]"
            )
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Row-major booleans, shape (height, width); True is foreground."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data)
        if arr.dtype != np.bool_:
            arr = arr != 0
        arr = _frozen_array(arr, np.bool_)
        if arr.ndim != 2 or arr.size == 0:
            raise ValidationError(f"mask must be a non-empty 2-D array, got shape {arr.shape}")
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    @property
    def foreground(self) -> int:
        return int(np.count_nonzero(self.data))

    def to_gray(self) -> GrayImage:
        return GrayImage(self.data.astype(np.float64))

    def __or__(self, other: "BinaryMask") -> "BinaryMask":
        if self.shape != other.shape:
            raise ValidationError(f"cannot combine masks of shapes {self.shape} and {other.shape}")
        return BinaryMask(self.data | other.data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMask):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class ManifestItem:
    image_path: Path
    mask_path: Path

    @property
    def label(self) -> str:
        return str(self.image_path)


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    items: Tuple[ManifestItem, ...] = field(default_factory=tuple)
    source_path: Path | None = None

    def __post_init__(self) -> None:
        items = tuple(self.items)
        if not items:
            raise ValidationError(f"dataset {self.name!r} has no items")
        for item in items:
            if Path(item.image_path) == Path(item.mask_path):
                raise ValidationError(
                    f"dataset {self.name!r}: image and mask share the path {item.image_path}"
                )
        object.__setattr__(self, "items", items)

    def __len__(self) -> int:
        return len(self.items)

    def display_path(self, path: Path | str) -> str:
        """``path`` relative to the manifest directory, or unchanged when there is no manifest file."""
        if self.source_path is None:
            return str(path)
        root = Path(self.source_path).resolve().parent
        return Path(os.path.relpath(Path(path).resolve(), root)).as_posix()
