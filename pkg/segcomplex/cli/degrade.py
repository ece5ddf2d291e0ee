from __future__ import annotations

import logging
from pathlib import Path

from segcomplex.cli.common import add_jobs_option, add_output_options, int_list
from segcomplex.config import Settings
from segcomplex.degrade import DEFAULT_FACTORS, run_experiment1
from segcomplex.raster import load_manifest
from segcomplex.reporting import open_output, write_degradation
from segcomplex.schemas import RunConfig

logger = logging.getLogger(__name__)


def register(subparsers, settings: Settings) -> None:
    parser = subparsers.add_parser(
        "degrade",
        help="Measure how much mask information survives downsampling by each factor.",
    )
    parser.add_argument("--manifest", "-m", type=Path, required=True, help="Dataset manifest (JSON).")
    parser.add_argument(
        "--factors",
        type=int_list,
        default=list(DEFAULT_FACTORS),
        help="Comma-separated downsampling factors, each >= 2 (default: 2,3,4).",
    )
    parser.add_argument(
        "--threshold-levels",
        type=int,
        default=settings.threshold_levels,
        help="Threshold sweep granularity (default: SEGC_THRESHOLD_LEVELS or 256).",
    )
    parser.add_argument("--per-image", action="store_true", help="Also emit one row per item and factor.")
    add_jobs_option(parser, settings)
    add_output_options(parser)
    parser.set_defaults(command="degrade")


def run(config: RunConfig, settings: Settings) -> int:
    manifest = load_manifest(config.manifest)
    rows = run_experiment1(
        manifest,
        config.factors,
        threshold_levels=config.threshold_levels,
        jobs=config.jobs,
        per_image=config.per_image,
        workers=settings.fft_workers,
    )
    with open_output(config.output, force=config.force) as stream:
        write_degradation(
            rows,
            stream,
            fmt=config.format,
            paper_format=config.paper_format,
            threshold_levels=config.threshold_levels,
        )
    logger.info("Wrote %d degradation row(s) for %s", len(rows), manifest.name)
    return 0
