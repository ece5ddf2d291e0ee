"""Bundled study data: the ten-dataset degradation/complexity table, the eight-dataset subset
the reference regression grid was fitted on, and that grid. Provenance notes live in the CSV headers."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from segcomplex.complexity import MeasureSet
from segcomplex.segmetrics import METRIC_NAMES, SegMetrics
from segcomplex.study import StudyRow, StudyTable

DATA_DIR = Path(__file__).resolve().parent / "data"
STUDY_TABLE_PATH = DATA_DIR / "table2.csv"
REFERENCE_GRID_PATH = DATA_DIR / "table3.csv"
REFERENCE_METRICS = ("r2", "ar2", "rmse", "mae", "aic", "aicc")


@dataclass(frozen=True)
class ReferenceCell:
    measure: str
    factor: int
    dof: int
    values: Dict[str, float]
    aicc_best: bool


def read_commented_csv(path: Path) -> Iterator[dict]:
    with path.open(newline="", encoding="utf-8") as handle:
        lines = (line for line in handle if not line.startswith("#"))
        yield from csv.DictReader(lines)


@lru_cache()
def load_study_table() -> StudyTable:
    measures: Dict[str, MeasureSet] = {}
    metrics: Dict[str, Dict[int, SegMetrics]] = {}
    for record in read_commented_csv(STUDY_TABLE_PATH):
        name = record["dataset"]
        measures.setdefault(
            name,
            MeasureSet(**{key: float(record[key]) for key in ("de", "mnf", "mdf", "pc")}),
        )
        metrics.setdefault(name, {})[int(record["factor"])] = SegMetrics(
            **{key: float(record[key]) for key in METRIC_NAMES}
        )
    return StudyTable(tuple(StudyRow(name, measures[name], metrics[name]) for name in measures))


@lru_cache()
def grid_datasets() -> Tuple[str, ...]:
    """Datasets the reference regression grid was fitted on, in table order."""
    names: List[str] = []
    for record in read_commented_csv(STUDY_TABLE_PATH):
        if record["in_grid"] == "1" and record["dataset"] not in names:
            names.append(record["dataset"])
    return tuple(names)


@lru_cache()
def load_grid_study() -> StudyTable:
    """The study rows behind the regression grid; what `--paper-fixture` fits on."""
    return load_study_table().reordered(grid_datasets())


@lru_cache()
def load_reference_grid() -> Tuple[ReferenceCell, ...]:
    cells: List[ReferenceCell] = []
    for record in read_commented_csv(REFERENCE_GRID_PATH):
        cells.append(
            ReferenceCell(
                measure=record["measure"],
                factor=int(record["factor"]),
                dof=int(record["dof"]),
                values={key: float(record[key]) for key in REFERENCE_METRICS},
                aicc_best=record["aicc_best"] == "1",
            )
        )
    return tuple(cells)


def reference_best_dof(measure: str, factor: int) -> Optional[int]:
    for cell in load_reference_grid():
        if cell.measure == measure and cell.factor == factor and cell.aicc_best:
            return cell.dof
    return None
