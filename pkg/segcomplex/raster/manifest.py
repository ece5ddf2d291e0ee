from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Tuple

from pydantic import ValidationError as PydanticValidationError

from segcomplex.errors import DataIOError, ValidationError
from segcomplex.raster.models import BinaryMask, DatasetManifest, GrayImage, ManifestItem
from segcomplex.schemas import ManifestItemModel, ManifestModel

logger = logging.getLogger(__name__)


def load_manifest(path: Path | str) -> DatasetManifest:
    """Read ``{"name": ..., "items": [{"image": ..., "mask": ...}]}``; paths are relative to the file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataIOError(f"{path}: cannot read manifest ({exc.strerror or exc})") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: manifest is not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    try:
        model = ManifestModel.model_validate(raw)
    except PydanticValidationError as exc:
        raise ValidationError(f"{path}: invalid manifest: {exc.errors()[0]['msg']}") from exc

    root = path.resolve().parent
    items = tuple(
        ManifestItem(image_path=root / entry.image, mask_path=root / entry.mask)
        for entry in model.items
    )
    manifest = DatasetManifest(name=model.name, items=items, source_path=path)
    logger.debug("Loaded manifest %s with %d item(s)", path, len(manifest))
    return manifest


def write_manifest(manifest: DatasetManifest, path: Path | str) -> None:
    path = Path(path)
    root = path.resolve().parent
    model = ManifestModel(
        name=manifest.name,
        items=[
            ManifestItemModel(
                image=_relative(item.image_path, root),
                mask=_relative(item.mask_path, root),
            )
            for item in manifest.items
        ],
    )
    path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")


def load_item(item: ManifestItem) -> Tuple[GrayImage, BinaryMask]:
    """Load one image/mask pair and check that their dimensions agree."""
    from segcomplex.raster import load_image, load_mask_file

    image = load_image(item.image_path)
    mask = load_mask_file(item.mask_path)
    if image.shape != mask.shape:
        raise ValidationError(
            f"{item.image_path} is {image.width}x{image.height} but "
            f"{item.mask_path} is {mask.width}x{mask.height}"
        )
    return image, mask


def _relative(target: Path, root: Path) -> str:
    return Path(os.path.relpath(Path(target).resolve(), root)).as_posix()


def write_synthetic_dataset(
    out_dir: Path | str,
    *,
    kind: str,
    count: int,
    size: int,
    seed: int,
    force: bool = False,
) -> DatasetManifest:
    """Write ``count`` seeded image/mask pairs plus ``manifest.json`` under ``out_dir``.

    Item ``i`` is drawn from seed ``seed + i``, so the dataset is a pure function of the
    arguments. Existing files are only replaced with ``force``.
    """
    from segcomplex.raster.netpbm import write_gray, write_mask
    from segcomplex.raster.synth import synthetic_pair

    if count < 1:
        raise ValidationError(f"synthetic dataset needs at least one item, got {count}")
    out_dir = Path(out_dir)
    manifest_path = out_dir / "manifest.json"
    if manifest_path.exists() and not force:
        raise ValidationError(f"{manifest_path} already exists; use --force to overwrite")
    try:
        (out_dir / "images").mkdir(parents=True, exist_ok=True)
        (out_dir / "masks").mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataIOError(f"{out_dir}: cannot create dataset directories ({exc.strerror or exc})") from exc

    items = []
    for index in range(count):
        image, mask = synthetic_pair(kind, size, (seed + index) % 2**64)
        image_path = out_dir / "images" / f"{index:03d}.pgm"
        mask_path = out_dir / "masks" / f"{index:03d}.pbm"
        write_gray(image, image_path)
        write_mask(mask, mask_path)
        items.append(ManifestItem(image_path=image_path, mask_path=mask_path))

    manifest = DatasetManifest(name=f"synthetic-{kind}", items=tuple(items), source_path=manifest_path)
    write_manifest(manifest, manifest_path)
    logger.info("Wrote synthetic %s dataset with %d item(s) to %s", kind, count, out_dir)
    return manifest
