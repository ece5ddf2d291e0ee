"""``segc`` command line: one subcommand module per operation, each exposing
``register(subparsers, settings)`` and ``run(config, settings)``.

Exit status: 0 success, 1 usage or validation, 2 I/O, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from segcomplex import __version__
from segcomplex.cli import advise, complexity, degrade, fit, reproduce, spectrum, synth
from segcomplex.config import Settings, get_settings
from segcomplex.errors import NumericError, SegcError
from segcomplex.schemas import RunConfig

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"

COMMANDS = {
    "complexity": complexity,
    "degrade": degrade,
    "fit": fit,
    "advise": advise,
    "reproduce": reproduce,
    "synth": synth,
    "spectrum": spectrum,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with status 1 instead of argparse's 2 (2 is reserved for I/O)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = _Parser(
        prog="segc",
        description="Measure segmentation dataset complexity and predict how far it can be downsampled.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    subparsers.required = True
    for module in COMMANDS.values():
        module.register(subparsers, settings)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = get_settings()
    except SegcError as exc:
        logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, stream=sys.stderr)
        logger.error("%s", exc)
        return exc.exit_code
    logging.basicConfig(level=settings.log_level, format=LOG_FORMAT, stream=sys.stderr)

    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    try:
        config = RunConfig.model_validate(vars(args))
    except PydanticValidationError as exc:
        error = exc.errors()[0]
        where = ".".join(str(part) for part in error.get("loc", ()))
        parser.print_usage(sys.stderr)
        logger.error("invalid arguments: %s%s", f"{where}: " if where else "", error["msg"])
        return 1

    try:
        return COMMANDS[config.command].run(config, settings)
    except SegcError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        logger.error("numeric failure: %s", exc)
        return NumericError.exit_code


def run() -> None:
    sys.exit(main())
