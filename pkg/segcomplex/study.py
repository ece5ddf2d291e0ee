from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

from segcomplex.complexity import MeasureSet
from segcomplex.errors import ValidationError
from segcomplex.segmetrics import SegMetrics

MEASURES = ("DE", "MNF", "MDF", "PC")
TARGETS = ("E", "D")


@dataclass(frozen=True)
class StudyRow:
    """One dataset: its complexity aggregates and its degradation metrics per factor."""

    dataset: str
    measures: MeasureSet
    metrics: Mapping[int, SegMetrics] = field(default_factory=dict)


@dataclass(frozen=True)
class StudyTable:
    rows: Tuple[StudyRow, ...]

    def __post_init__(self) -> None:
        rows = tuple(self.rows)
        if not rows:
            raise ValidationError("study table has no datasets")
        names = [row.dataset for row in rows]
        if len(set(names)) != len(names):
            raise ValidationError("study table lists a dataset twice")
        factor_sets = {tuple(sorted(row.metrics)) for row in rows}
        if len(factor_sets) != 1:
            raise ValidationError("datasets disagree on the set of downsampling factors")
        object.__setattr__(self, "rows", rows)

    @property
    def datasets(self) -> List[str]:
        return [row.dataset for row in self.rows]

    @property
    def factors(self) -> List[int]:
        return sorted(self.rows[0].metrics)

    def measure_column(self, measure: str) -> List[float]:
        if measure not in MEASURES:
            raise ValidationError(f"unknown measure {measure!r}")
        column = [row.measures.get(measure) for row in self.rows]
        missing = [row.dataset for row, value in zip(self.rows, column) if value is None]
        if missing:
            raise ValidationError(f"{measure} is undefined for {', '.join(missing)}")
        return column

    def target_column(self, factor: int, target: str = "E") -> List[float]:
        if target not in TARGETS:
            raise ValidationError(f"unknown target {target!r}; expected E or D")
        column = []
        for row in self.rows:
            metrics = row.metrics.get(factor)
            value = None if metrics is None else getattr(metrics, target.lower())
            if value is None:
                raise ValidationError(f"{target} at factor {factor} is undefined for {row.dataset}")
            column.append(value)
        return column

    def measure_columns(self, measures: Sequence[str] = MEASURES) -> Dict[str, List[float]]:
        return {measure: self.measure_column(measure) for measure in measures}

    def target_columns(self, target: str = "E") -> Dict[int, List[float]]:
        return {factor: self.target_column(factor, target) for factor in self.factors}

    def row(self, dataset: str) -> StudyRow:
        for row in self.rows:
            if row.dataset == dataset:
                return row
        raise ValidationError(f"dataset {dataset!r} is not in the study table")

    def reordered(self, datasets: Sequence[str]) -> "StudyTable":
        return StudyTable(tuple(self.row(name) for name in datasets))


def assemble_study(
    measures: Mapping[str, MeasureSet],
    metrics: Mapping[str, Mapping[int, SegMetrics]],
) -> StudyTable:
    """Join per-dataset complexity aggregates with per-dataset degradation rows by name."""
    only_measures = sorted(set(measures) - set(metrics))
    only_metrics = sorted(set(metrics) - set(measures))
    if only_measures or only_metrics:
        raise ValidationError(
            "complexity reports and degrade tables cover different datasets "
            f"(complexity only: {only_measures or '-'}, degrade only: {only_metrics or '-'})"
        )
    return StudyTable(
        tuple(StudyRow(name, measures[name], dict(metrics[name])) for name in measures)
    )
