from __future__ import annotations

from pathlib import Path

from segcomplex.raster import png
from segcomplex.raster.color import LUMA_WEIGHTS, to_gray
from segcomplex.raster.models import BinaryMask, DatasetManifest, GrayImage, ManifestItem
from segcomplex.raster.netpbm import (
    NetpbmRaster,
    decode_netpbm,
    encode_netpbm,
    load_gray,
    load_mask,
    read_netpbm,
    write_gray,
    write_mask,
    write_netpbm,
)
from segcomplex.raster.synth import synth, synthetic_pair

NETPBM_SUFFIXES = {".pbm", ".pgm", ".ppm", ".pnm"}


def load_image(path: Path | str) -> GrayImage:
    """Netpbm natively; any other suffix goes through the optional Pillow adapter."""
    if Path(path).suffix.lower() in NETPBM_SUFFIXES:
        return load_gray(path)
    return png.load_gray_pil(path)


def load_mask_file(path: Path | str) -> BinaryMask:
    if Path(path).suffix.lower() in NETPBM_SUFFIXES:
        return load_mask(path)
    return png.load_mask_pil(path)


from segcomplex.raster.manifest import (  # noqa: E402
    load_item,
    load_manifest,
    write_manifest,
    write_synthetic_dataset,
)

__all__ = [
    "BinaryMask",
    "DatasetManifest",
    "GrayImage",
    "LUMA_WEIGHTS",
    "ManifestItem",
    "NetpbmRaster",
    "decode_netpbm",
    "encode_netpbm",
    "load_gray",
    "load_image",
    "load_item",
    "load_manifest",
    "load_mask",
    "load_mask_file",
    "read_netpbm",
    "synth",
    "synthetic_pair",
    "to_gray",
    "write_gray",
    "write_manifest",
    "write_mask",
    "write_netpbm",
    "write_synthetic_dataset",
]
