from __future__ import annotations

from pathlib import Path


class SegcError(Exception):
    """Base class for every failure the library reports; ``exit_code`` drives the CLI."""

    exit_code = 1


class ValidationError(SegcError, ValueError):
    exit_code = 1


class ConfigError(ValidationError):
    pass


class DataIOError(SegcError):
    exit_code = 2


class NetpbmError(DataIOError):
    """A Netpbm file could not be decoded; ``offset`` is the byte where decoding stopped."""

    def __init__(self, path: Path | str, offset: int, message: str) -> None:
        self.path = str(path)
        self.offset = offset
        self.reason = message
        super().__init__(f"{self.path}: byte {offset}: {message}")


class MalformedHeaderError(NetpbmError):
    pass


class MalformedPayloadError(NetpbmError):
    pass


class TruncatedPayloadError(NetpbmError):
    pass


class UnsupportedFormatError(NetpbmError):
    pass


class NumericError(SegcError):
    exit_code = 3


class UndefinedMeasureError(NumericError):
    pass


class ModelSelectionError(NumericError):
    pass
