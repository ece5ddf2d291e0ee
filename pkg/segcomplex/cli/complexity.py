from __future__ import annotations

import logging
from pathlib import Path

from segcomplex.cli.common import add_jobs_option, add_output_options
from segcomplex.complexity import complexity_report
from segcomplex.config import Settings
from segcomplex.raster import load_manifest
from segcomplex.reporting import open_output, write_complexity
from segcomplex.schemas import RunConfig

logger = logging.getLogger(__name__)


def register(subparsers, settings: Settings) -> None:
    parser = subparsers.add_parser(
        "complexity",
        help="Compute DE, MNF, MDF and PC for every item of a dataset manifest.",
    )
    parser.add_argument("--manifest", "-m", type=Path, required=True, help="Dataset manifest (JSON).")
    parser.add_argument(
        "--bins",
        type=int,
        default=settings.bins,
        help="Radial power-spectrum bins (default: SEGC_BINS or 256).",
    )
    add_jobs_option(parser, settings)
    add_output_options(parser)
    parser.set_defaults(command="complexity")


def run(config: RunConfig, settings: Settings) -> int:
    manifest = load_manifest(config.manifest)
    report = complexity_report(manifest, bins=config.bins, jobs=config.jobs, workers=settings.fft_workers)
    with open_output(config.output, force=config.force) as stream:
        write_complexity(report, stream, fmt=config.format, paper_format=config.paper_format)
    logger.info("Wrote complexity report for %s (%d item(s))", report.dataset, len(report.per_image))
    return 0
