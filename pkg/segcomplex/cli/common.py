from __future__ import annotations

import argparse
from pathlib import Path
from typing import List

from segcomplex.config import Settings
from segcomplex.errors import ValidationError
from segcomplex.fixtures import load_grid_study
from segcomplex.reporting import read_complexity_report, read_degradation_table
from segcomplex.schemas import RunConfig
from segcomplex.study import StudyTable, assemble_study


def int_list(raw: str) -> List[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from exc


def add_output_options(parser: argparse.ArgumentParser, *, formats: bool = True) -> None:
    parser.add_argument(
        "--output",
        "-o",
        type=Path,
        default=None,
        help="Output file (default: standard output).",
    )
    if formats:
        parser.add_argument("--format", choices=("csv", "json"), default="csv", help="Output format.")
        parser.add_argument(
            "--paper-format",
            action="store_true",
            help="Print numbers with four fixed decimals instead of round-trip precision.",
        )
    parser.add_argument("--force", action="store_true", help="Overwrite existing output files.")


def add_jobs_option(parser: argparse.ArgumentParser, settings: Settings) -> None:
    parser.add_argument(
        "--jobs",
        "-j",
        type=int,
        default=settings.jobs,
        help="Worker threads for per-image work (default: SEGC_JOBS or 1).",
    )


def add_study_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--paper-fixture",
        action="store_true",
        help="Fit on the bundled study datasets behind the reference grid instead of report files.",
    )
    parser.add_argument(
        "--complexity-report",
        dest="complexity_reports",
        type=Path,
        action="append",
        default=[],
        help="Complexity report (CSV or JSON); repeat once per dataset.",
    )
    parser.add_argument(
        "--degrade-table",
        dest="degrade_tables",
        type=Path,
        action="append",
        default=[],
        help="Degrade table (CSV or JSON); may be repeated.",
    )
    parser.add_argument("--target", choices=("E", "D"), default="E", help="Metric to model (E or Dice).")


def load_study(config: RunConfig) -> StudyTable:
    if config.paper_fixture:
        return load_grid_study()
    measures = {}
    for path in config.complexity_reports:
        name, aggregate = read_complexity_report(path)
        if name in measures:
            raise ValidationError(f"{path}: dataset {name!r} already given by another report")
        measures[name] = aggregate
    metrics = {}
    for path in config.degrade_tables:
        for name, rows in read_degradation_table(path).items():
            metrics.setdefault(name, {}).update(rows)
    return assemble_study(measures, metrics)
