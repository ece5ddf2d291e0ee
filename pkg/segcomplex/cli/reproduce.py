"""Run the fixture suite end to end and diff it against the reference grid.

Everything lands in ``--output-dir``:

* ``table3.csv``: fit diagnostics for every measure, factor and degree 1-6 on the fixture.
* ``selection.csv``: argmin-AICc degree per measure/factor next to the reference choice.
* ``ranking.csv``: degree-1 R² per measure and factor, ranked within each factor.
* ``table3_diff.csv``: computed against reference cells, with tolerance verdicts.
* ``recommendations.json``: advisor output for the datasets whose network comparison is known.
* ``synthetic_complexity.csv`` / ``synthetic_degrade.csv``: a seeded synthetic dataset
  (written under ``synthetic/``) pushed through the complexity and degrade pipelines.
* ``summary.json``: verdict counts and SHA-256 checksums of the files above.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List, Optional

from segcomplex.advisor import DEFAULT_MEASURE, fit_per_factor, recommend
from segcomplex.cli.common import add_jobs_option
from segcomplex.complexity import complexity_report
from segcomplex.config import Settings
from segcomplex.degrade import DEFAULT_FACTORS, run_experiment1
from segcomplex.errors import DataIOError, NumericError
from segcomplex.fixtures import REFERENCE_METRICS, load_grid_study, load_reference_grid, reference_best_dof
from segcomplex.raster import write_synthetic_dataset
from segcomplex.regress import FitRow, fit_table, select_table
from segcomplex.reporting import (
    dump_json,
    file_checksum,
    open_output,
    recommendation_model,
    write_complexity,
    write_degradation,
    write_fit_table,
    write_rows,
)
from segcomplex.schemas import DiffRecord, ReproductionSummaryModel, RunConfig
from segcomplex.study import MEASURES

logger = logging.getLogger(__name__)

# Datasets with a known shallow-versus-deep outcome and their study-table MDF; all three are
# also fitted rows, so this checks the rule and not out-of-sample prediction.
ADVISED_MDF = (("CHASE-DB1", 0.1967), ("PH2", 0.0049), ("ISIC-2016", 0.0017))
BINDING_METRICS = ("r2", "ar2", "rmse", "mae")
SYNTHETIC_KIND = "vessels"
SYNTHETIC_COUNT = 4
SYNTHETIC_SIZE = 96

SELECTION_HEADER = ("measure", "factor", "best_dof", "aicc", "reference_best_dof", "matches")
RANKING_HEADER = ("factor", "measure", "r2", "rank")
DIFF_HEADER = (
    "measure",
    "factor",
    "dof",
    "metric",
    "computed",
    "reference",
    "abs_diff",
    "tolerance",
    "within_tolerance",
)


def register(subparsers, settings: Settings) -> None:
    parser = subparsers.add_parser(
        "reproduce",
        help="Run the fixture suite, diff it against the reference grid and a synthetic suite.",
    )
    parser.add_argument("--output-dir", type=Path, required=True, help="Directory for all outputs.")
    parser.add_argument("--seed", type=int, default=0, help="Seed of the synthetic suite (default 0).")
    parser.add_argument(
        "--threshold-levels",
        type=int,
        default=settings.threshold_levels,
        help="Threshold sweep granularity for the synthetic suite.",
    )
    parser.add_argument("--bins", type=int, default=settings.bins, help="Spectrum bins for the synthetic suite.")
    parser.add_argument("--paper-format", action="store_true", help="Four fixed decimals in CSV outputs.")
    parser.add_argument(
        "--strict",
        action="store_true",
        help="Exit with status 3 when a binding reference cell is out of tolerance.",
    )
    parser.add_argument("--force", action="store_true", help="Overwrite existing outputs.")
    add_jobs_option(parser, settings)
    parser.set_defaults(command="reproduce")


def tolerance(dof: int) -> float:
    return 0.001 if dof <= 4 else 0.01


def diff_records(rows: List[FitRow]) -> List[DiffRecord]:
    """One record per reference cell and metric; AIC/AICc carry no tolerance (log base unknown)."""
    computed = {(row.measure, row.factor, row.degree): row.diagnostics for row in rows}
    records = []
    for cell in load_reference_grid():
        diag = computed.get((cell.measure, cell.factor, cell.dof))
        for metric in REFERENCE_METRICS:
            value = None if diag is None else getattr(diag, metric)
            reference = cell.values[metric]
            diff = None if value is None else abs(value - reference)
            tol = tolerance(cell.dof) if metric in BINDING_METRICS else None
            within = None if tol is None else (diff is not None and diff <= tol)
            records.append(
                DiffRecord(
                    measure=cell.measure,
                    factor=cell.factor,
                    dof=cell.dof,
                    metric=metric,
                    computed=value,
                    reference=reference,
                    abs_diff=diff,
                    tolerance=tol,
                    within_tolerance=within,
                )
            )
    return records


def ranking_rows(rows: List[FitRow]) -> List[tuple]:
    out = []
    for factor in sorted({row.factor for row in rows}):
        linear = [row for row in rows if row.factor == factor and row.degree == 1 and row.diagnostics is not None]
        linear.sort(key=lambda row: (-_r2_or_floor(row), MEASURES.index(row.measure)))
        for rank, row in enumerate(linear, start=1):
            out.append((factor, row.measure, row.diagnostics.r2, rank))
    return out


def _r2_or_floor(row: FitRow) -> float:
    r2 = row.diagnostics.r2
    return float("-inf") if r2 is None else r2


def run(config: RunConfig, settings: Settings) -> int:
    out_dir = config.output_dir
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataIOError(f"{out_dir}: cannot create output directory ({exc.strerror or exc})") from exc
    written: List[Path] = []

    def output(name: str):
        path = out_dir / name
        written.append(path)
        return open_output(path, force=config.force)

    study = load_grid_study()
    rows = fit_table(study.measure_columns(), study.target_columns("E"))
    best = select_table(rows)
    with output("table3.csv") as stream:
        write_fit_table(rows, stream, target="E", paper_format=config.paper_format)

    matches = 0
    selection = []
    for (measure, factor), row in best.items():
        reference: Optional[int] = reference_best_dof(measure, factor)
        same = reference == row.degree
        matches += same
        selection.append((measure, factor, row.degree, row.diagnostics.aicc, reference, int(same)))
    with output("selection.csv") as stream:
        write_rows(stream, SELECTION_HEADER, selection, paper_format=config.paper_format)

    with output("ranking.csv") as stream:
        write_rows(stream, RANKING_HEADER, ranking_rows(rows), paper_format=config.paper_format)

    diffs = diff_records(rows)
    with output("table3_diff.csv") as stream:
        write_rows(
            stream,
            DIFF_HEADER,
            (
                (
                    d.measure,
                    d.factor,
                    d.dof,
                    d.metric,
                    d.computed,
                    d.reference,
                    d.abs_diff,
                    d.tolerance,
                    "" if d.within_tolerance is None else int(d.within_tolerance),
                )
                for d in diffs
            ),
            paper_format=config.paper_format,
        )
    binding = [d for d in diffs if d.within_tolerance is not None]
    within = sum(1 for d in binding if d.within_tolerance)
    logger.info(
        "Reference grid: %d/%d binding cells within tolerance, %d/%d AICc choices match",
        within,
        len(binding),
        matches,
        len(best),
    )

    fits = fit_per_factor(study, DEFAULT_MEASURE, 1, "E")
    advice = []
    for name, value in ADVISED_MDF:
        result = recommend(fits, value, value, measure=DEFAULT_MEASURE, budget=settings.epsilon, tau=settings.tau)
        advice.append({"dataset": name, "recommendation": recommendation_model(result).model_dump(mode="json")})
    with output("recommendations.json") as stream:
        dump_json(advice, stream)

    manifest = write_synthetic_dataset(
        out_dir / "synthetic",
        kind=SYNTHETIC_KIND,
        count=SYNTHETIC_COUNT,
        size=SYNTHETIC_SIZE,
        seed=config.seed,
        force=config.force,
    )
    report = complexity_report(manifest, bins=config.bins, jobs=config.jobs, workers=settings.fft_workers)
    with output("synthetic_complexity.csv") as stream:
        write_complexity(report, stream, paper_format=config.paper_format)
    degraded = run_experiment1(
        manifest,
        DEFAULT_FACTORS,
        threshold_levels=config.threshold_levels,
        jobs=config.jobs,
        per_image=True,
        workers=settings.fft_workers,
    )
    with output("synthetic_degrade.csv") as stream:
        write_degradation(
            degraded,
            stream,
            paper_format=config.paper_format,
            threshold_levels=config.threshold_levels,
        )

    checksums: Dict[str, str] = {}
    for path in written:
        checksums[path.name] = file_checksum(path)
        logger.info("sha256 %s  %s", checksums[path.name], path.name)
    summary = ReproductionSummaryModel(
        binding_cells=len(binding),
        within_tolerance=within,
        reference_best_dof_matches=matches,
        checksums=checksums,
    )
    with open_output(out_dir / "summary.json", force=config.force) as stream:
        stream.write(summary.model_dump_json(indent=2) + "\n")

    if config.strict and within < len(binding):
        raise NumericError(
            f"{len(binding) - within} of {len(binding)} binding reference cells are out of tolerance "
            f"(see {out_dir / 'table3_diff.csv'})"
        )
    return 0
