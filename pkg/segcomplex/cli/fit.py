from __future__ import annotations

import logging
from pathlib import Path

from segcomplex.cli.common import add_output_options, add_study_options, load_study
from segcomplex.config import Settings
from segcomplex.regress import curve_points, fit_table, select_table
from segcomplex.reporting import open_output, write_fit_table, write_rows
from segcomplex.schemas import RunConfig

logger = logging.getLogger(__name__)

CURVE_HEADER = ("measure", "factor", "dof", "x", "y")


def register(subparsers, settings: Settings) -> None:
    parser = subparsers.add_parser(
        "fit",
        help="Fit polynomial models of segmentation error against each complexity measure.",
    )
    add_study_options(parser)
    parser.add_argument("--max-degree", type=int, default=6, help="Highest polynomial degree (default 6).")
    parser.add_argument("--select", action="store_true", help="Append the AICc-optimal degree per measure/factor.")
    parser.add_argument(
        "--curves",
        type=Path,
        default=None,
        help="Also write plot-ready fitted curves (CSV) for --degree to this path.",
    )
    parser.add_argument("--degree", type=int, default=1, help="Degree of the curves written by --curves.")
    add_output_options(parser)
    parser.set_defaults(command="fit")


def run(config: RunConfig, settings: Settings) -> int:
    study = load_study(config)
    measures = study.measure_columns()
    rows = fit_table(measures, study.target_columns(config.target), range(1, config.max_degree + 1))
    best = select_table(rows) if config.select else None
    with open_output(config.output, force=config.force) as stream:
        write_fit_table(
            rows,
            stream,
            target=config.target,
            best=best,
            fmt=config.format,
            paper_format=config.paper_format,
        )

    if config.curves is not None:
        points = []
        for row in rows:
            if row.degree != config.degree or row.fit is None:
                continue
            xs = measures[row.measure]
            for x, y in curve_points(row.fit, min(xs), max(xs)):
                points.append((row.measure, row.factor, row.degree, x, y))
        with open_output(config.curves, force=config.force) as stream:
            write_rows(stream, CURVE_HEADER, points, paper_format=config.paper_format)

    logger.info("Fitted %d model(s) over %d dataset(s)", len(rows), len(study.rows))
    return 0
