from __future__ import annotations

import logging
from pathlib import Path

from segcomplex.cli.common import add_output_options
from segcomplex.config import Settings
from segcomplex.raster import load_image
from segcomplex.reporting import open_output, write_rows
from segcomplex.schemas import RunConfig
from segcomplex.spectra import radial_power_spectrum, spectrum_rows

logger = logging.getLogger(__name__)

SPECTRUM_HEADER = ("bin_center", "power")


def register(subparsers, settings: Settings) -> None:
    parser = subparsers.add_parser("spectrum", help="Write the radial power spectrum of one image as CSV.")
    parser.add_argument("--image", "-i", type=Path, required=True, help="Input image (PGM, PPM or PNG).")
    parser.add_argument("--bins", type=int, default=settings.bins, help="Radial bins (default: SEGC_BINS or 256).")
    add_output_options(parser, formats=False)
    parser.add_argument("--paper-format", action="store_true", help="Four fixed decimals.")
    parser.set_defaults(command="spectrum")


def run(config: RunConfig, settings: Settings) -> int:
    spectrum = radial_power_spectrum(load_image(config.image), config.bins, workers=settings.fft_workers)
    if spectrum.degenerate:
        logger.warning("%s: flat image, all power is in the DC term", config.image)
    with open_output(config.output, force=config.force) as stream:
        write_rows(stream, SPECTRUM_HEADER, spectrum_rows(spectrum), paper_format=config.paper_format)
    return 0
