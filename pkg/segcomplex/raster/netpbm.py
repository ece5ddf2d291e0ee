"""Bit-exact readers and writers for the six Netpbm formats (P1 to P6).

``read_netpbm``/``write_netpbm`` work on raw integer samples and are mutual inverses for
files in canonical layout (the layout ``write_netpbm`` emits). The gray/mask loaders on top
of them normalize samples into the library's raster types.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from segcomplex.errors import (
    DataIOError,
    MalformedHeaderError,
    MalformedPayloadError,
    TruncatedPayloadError,
    UnsupportedFormatError,
    ValidationError,
)
from segcomplex.raster.color import to_gray
from segcomplex.raster.models import BinaryMask, GrayImage

_WHITESPACE = b" \t\n\v\f\r"
_DIGITS = b"0123456789"
_TOKEN_RE = re.compile(rb"#[^\r\n]*|[^\s#]+")

# magic -> (kind, binary)
_MAGICS = {
    "P1": ("pbm", False),
    "P2": ("pgm", False),
    "P3": ("ppm", False),
    "P4": ("pbm", True),
    "P5": ("pgm", True),
    "P6": ("ppm", True),
}


@dataclass(frozen=True)
class NetpbmHeader:
    magic: str
    width: int
    height: int
    maxval: int
    payload_offset: int

    @property
    def kind(self) -> str:
        return _MAGICS[self.magic][0]

    @property
    def binary(self) -> bool:
        return _MAGICS[self.magic][1]

    @property
    def channels(self) -> int:
        return 3 if self.kind == "ppm" else 1


@dataclass(frozen=True, eq=False)
class NetpbmRaster:
    """Raw samples as stored in the file.

    ``samples`` has shape (height, width) or (height, width, 3) for PPM. PBM samples keep
    the file convention: 1 is black/foreground.
    """

    magic: str
    samples: np.ndarray
    maxval: int = 1

    @property
    def width(self) -> int:
        return int(self.samples.shape[1])

    @property
    def height(self) -> int:
        return int(self.samples.shape[0])


def read_netpbm(path: Path | str) -> NetpbmRaster:
    path = Path(path)
    try:
        buf = path.read_bytes()
    except OSError as exc:
        raise DataIOError(f"{path}: cannot read file ({exc.strerror or exc})") from exc
    return decode_netpbm(buf, path)


def decode_netpbm(buf: bytes, path: Path | str = "<bytes>") -> NetpbmRaster:
    header = _parse_header(buf, path)
    if header.kind == "pbm":
        if header.binary:
            samples = _binary_bits(buf, header, path)
        else:
            samples = _ascii_bits(buf, header, path)
    elif header.binary:
        samples = _binary_samples(buf, header, path)
    else:
        samples = _ascii_samples(buf, header, path)
    return NetpbmRaster(magic=header.magic, samples=samples, maxval=header.maxval)


def write_netpbm(raster: NetpbmRaster, path: Path | str) -> None:
    payload = encode_netpbm(raster)
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise DataIOError(f"{path}: cannot write ({exc.strerror or exc})") from exc


def encode_netpbm(raster: NetpbmRaster) -> bytes:
    magic = raster.magic
    if magic not in _MAGICS:
        raise ValidationError(f"unknown Netpbm magic {magic!r}")
    kind, binary = _MAGICS[magic]
    samples = np.asarray(raster.samples)
    expected_ndim = 3 if kind == "ppm" else 2
    if samples.ndim != expected_ndim or (kind == "ppm" and samples.shape[2] != 3):
        raise ValidationError(f"{magic} samples have incompatible shape {samples.shape}")
    height, width = samples.shape[:2]
    maxval = 1 if kind == "pbm" else int(raster.maxval)
    if not 1 <= maxval <= 65535:
        raise ValidationError(f"maxval must be in [1, 65535], got {maxval}")
    ints = samples.astype(np.int64)
    if ints.size and (ints.min() < 0 or ints.max() > maxval):
        raise ValidationError(f"samples exceed [0, {maxval}]")

    if kind == "pbm":
        header = f"{magic}\n{width} {height}\n".encode("ascii")
    else:
        header = f"{magic}\n{width} {height}\n{maxval}\n".encode("ascii")

    if kind == "pbm" and binary:
        return header + np.packbits(ints.astype(np.uint8), axis=1).tobytes()
    if binary:
        dtype = ">u2" if maxval > 255 else "u1"
        return header + ints.astype(dtype).tobytes()

    rows = ints.reshape(height, -1)
    lines = [" ".join(str(v) for v in row) for row in rows.tolist()]
    return header + ("\n".join(lines) + "\n").encode("ascii")


def load_gray(path: Path | str) -> GrayImage:
    """Load a PGM (P2/P5) or PPM (P3/P6) file as intensities ``value / maxval``."""
    raster = read_netpbm(path)
    kind = _MAGICS[raster.magic][0]
    if kind == "pbm":
        raise UnsupportedFormatError(path, 0, f"{raster.magic} is a bitmap; expected PGM or PPM")
    values = raster.samples.astype(np.float64) / raster.maxval
    if kind == "ppm":
        return to_gray(values)
    return GrayImage(values)


def load_mask(path: Path | str) -> BinaryMask:
    """Load a PBM (1 = foreground) or a PGM binarized at ``value / maxval >= 0.5``."""
    raster = read_netpbm(path)
    kind = _MAGICS[raster.magic][0]
    if kind == "ppm":
        raise UnsupportedFormatError(path, 0, f"{raster.magic} is a color pixmap; expected PBM or PGM")
    if kind == "pbm":
        return BinaryMask(raster.samples.astype(bool))
    return BinaryMask(raster.samples.astype(np.float64) / raster.maxval >= 0.5)


def write_gray(image: GrayImage, path: Path | str, *, maxval: int = 255, plain: bool = False) -> None:
    if not 1 <= maxval <= 65535:
        raise ValidationError(f"maxval must be in [1, 65535], got {maxval}")
    samples = np.rint(image.data * maxval).astype(np.int64)
    write_netpbm(NetpbmRaster(magic="P2" if plain else "P5", samples=samples, maxval=maxval), path)


def write_mask(mask: BinaryMask, path: Path | str, *, plain: bool = False) -> None:
    samples = mask.data.astype(np.uint8)
    write_netpbm(NetpbmRaster(magic="P1" if plain else "P4", samples=samples, maxval=1), path)


def _parse_header(buf: bytes, path: Path | str) -> NetpbmHeader:
    if len(buf) < 2:
        raise MalformedHeaderError(path, 0, "file too short for a magic number")
    magic = buf[:2].decode("latin-1")
    if magic not in _MAGICS:
        raise UnsupportedFormatError(path, 0, f"unsupported magic number {magic!r}")
    kind, _ = _MAGICS[magic]

    names = ("width", "height") if kind == "pbm" else ("width", "height", "maxval")
    values = []
    pos = 2
    for name in names:
        pos = _skip_separators(buf, pos)
        start = pos
        while pos < len(buf) and buf[pos] in _DIGITS:
            pos += 1
        if start == pos:
            raise MalformedHeaderError(path, start, f"expected decimal {name}")
        values.append((name, int(buf[start:pos]), start))

    for name, value, offset in values:
        if name == "maxval":
            if not 1 <= value <= 65535:
                raise MalformedHeaderError(path, offset, f"maxval {value} outside [1, 65535]")
        elif value < 1:
            raise MalformedHeaderError(path, offset, f"{name} must be positive")

    if pos >= len(buf) or buf[pos] not in _WHITESPACE:
        raise MalformedHeaderError(path, pos, "expected a single whitespace byte after the header")
    pos += 1

    fields = {name: value for name, value, _ in values}
    return NetpbmHeader(
        magic=magic,
        width=fields["width"],
        height=fields["height"],
        maxval=fields.get("maxval", 1),
        payload_offset=pos,
    )


def _skip_separators(buf: bytes, pos: int) -> int:
    while pos < len(buf):
        byte = buf[pos]
        if byte in _WHITESPACE:
            pos += 1
        elif byte == ord("#"):
            while pos < len(buf) and buf[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _binary_bits(buf: bytes, header: NetpbmHeader, path) -> np.ndarray:
    row_bytes = (header.width + 7) // 8
    needed = row_bytes * header.height
    payload = buf[header.payload_offset : header.payload_offset + needed]
    if len(payload) < needed:
        raise TruncatedPayloadError(
            path, len(buf), f"expected {needed} payload bytes, found {len(payload)}"
        )
    packed = np.frombuffer(payload, dtype=np.uint8).reshape(header.height, row_bytes)
    return np.unpackbits(packed, axis=1)[:, : header.width].copy()


def _binary_samples(buf: bytes, header: NetpbmHeader, path) -> np.ndarray:
    wide = header.maxval > 255
    sample_bytes = 2 if wide else 1
    count = header.width * header.height * header.channels
    needed = count * sample_bytes
    payload = buf[header.payload_offset : header.payload_offset + needed]
    if len(payload) < needed:
        raise TruncatedPayloadError(
            path, len(buf), f"expected {needed} payload bytes, found {len(payload)}"
        )
    flat = np.frombuffer(payload, dtype=">u2" if wide else np.uint8).astype(np.int64)
    _check_range(flat, header, path, sample_bytes)
    return _shape_samples(flat, header)


def _ascii_samples(buf: bytes, header: NetpbmHeader, path) -> np.ndarray:
    count = header.width * header.height * header.channels
    flat = np.empty(count, dtype=np.int64)
    filled = 0
    for match in _TOKEN_RE.finditer(buf, header.payload_offset):
        if filled == count:
            break
        token = match.group()
        if token.startswith(b"#"):
            continue
        if not token.isdigit():
            raise MalformedPayloadError(path, match.start(), f"expected a decimal sample, got {token[:16]!r}")
        value = int(token)
        if value > header.maxval:
            raise MalformedPayloadError(path, match.start(), f"sample {value} exceeds maxval {header.maxval}")
        flat[filled] = value
        filled += 1
    if filled < count:
        raise TruncatedPayloadError(path, len(buf), f"expected {count} samples, found {filled}")
    return _shape_samples(flat, header)


def _ascii_bits(buf: bytes, header: NetpbmHeader, path) -> np.ndarray:
    count = header.width * header.height
    flat = np.empty(count, dtype=np.uint8)
    filled = 0
    for match in _TOKEN_RE.finditer(buf, header.payload_offset):
        token = match.group()
        if token.startswith(b"#"):
            continue
        # Plain PBM allows digits without separators.
        for index, byte in enumerate(token):
            if filled == count:
                break
            if byte not in b"01":
                raise MalformedPayloadError(path, match.start() + index, f"invalid bit {bytes([byte])!r}")
            flat[filled] = byte - ord("0")
            filled += 1
        if filled == count:
            break
    if filled < count:
        raise TruncatedPayloadError(path, len(buf), f"expected {count} bits, found {filled}")
    return flat.reshape(header.height, header.width)


def _check_range(flat: np.ndarray, header: NetpbmHeader, path, sample_bytes: int) -> None:
    over = np.flatnonzero(flat > header.maxval)
    if over.size:
        offset = header.payload_offset + int(over[0]) * sample_bytes
        raise MalformedPayloadError(path, offset, f"sample {int(flat[over[0]])} exceeds maxval {header.maxval}")


def _shape_samples(flat: np.ndarray, header: NetpbmHeader) -> np.ndarray:
    if header.channels == 3:
        return flat.reshape(header.height, header.width, 3)
    return flat.reshape(header.height, header.width)
