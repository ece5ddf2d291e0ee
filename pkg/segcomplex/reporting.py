"""CSV/JSON emission and re-reading of every table the CLI produces.

Machine output uses the shortest round-trip float representation; ``paper_format`` switches
to four fixed decimals for side-by-side reading with published tables. Undefined values are
empty CSV cells and JSON nulls.
"""

from __future__ import annotations

import contextlib
import csv
import hashlib
import io
import json
import math
import sys
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, TextIO, Tuple

from pydantic import ValidationError as PydanticValidationError

from segcomplex.advisor import Recommendation
from segcomplex.complexity import ComplexityReport, MeasureSet
from segcomplex.degrade import DegradationRow
from segcomplex.errors import DataIOError, ValidationError
from segcomplex.regress import FitRow
from segcomplex.schemas import (
    ComplexityReportModel,
    DegradationRecord,
    DegradationTableModel,
    DiagnosticsRecord,
    FitTableModel,
    MeasureRecord,
    RationaleModel,
    RecommendationModel,
    SelectionRecord,
)
from segcomplex.segmetrics import METRIC_NAMES, SegMetrics

COMPLEXITY_HEADER = ("path", "de", "mnf", "mdf", "pc")
DEGRADE_HEADER = ("dataset", "factor", "Se", "Sp", "A", "BA", "D", "J", "E")
FIT_HEADER = ("measure", "factor", "dof", "r2", "ar2", "rmse", "mae", "aic", "aicc")
AGGREGATE_LABEL = "aggregate"


def format_float(value: Optional[float], *, paper_format: bool = False) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    value = float(value)
    if math.isinf(value):
        return "-inf" if value < 0 else "inf"
    if paper_format:
        return f"{value:.4f}"
    return repr(value)


@contextlib.contextmanager
def open_output(path: Optional[Path], *, force: bool = False) -> Iterator[TextIO]:
    """Yield a text stream for ``path`` (stdout for None or "-"); refuses to overwrite without ``force``."""
    if path is None or str(path) == "-":
        yield sys.stdout
        return
    path = Path(path)
    if path.exists() and not force:
        raise ValidationError(f"{path} already exists; pass --force to overwrite")
    buffer = io.StringIO()
    yield buffer
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(buffer.getvalue(), encoding="utf-8", newline="")
    except OSError as exc:
        raise DataIOError(f"{path}: cannot write output ({exc.strerror or exc})") from exc


def file_checksum(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _writer(stream: TextIO):
    return csv.writer(stream, lineterminator="\n")


def _measure_record(path: str, measures: MeasureSet) -> MeasureRecord:
    return MeasureRecord(path=path, de=measures.de, mnf=measures.mnf, mdf=measures.mdf, pc=measures.pc)


def complexity_model(report: ComplexityReport) -> ComplexityReportModel:
    return ComplexityReportModel(
        dataset=report.dataset,
        bins=report.bins,
        per_image=[_measure_record(row.path, row.measures) for row in report.per_image],
        aggregate=_measure_record(AGGREGATE_LABEL, report.aggregate),
    )


def write_complexity(report: ComplexityReport, stream: TextIO, *, fmt: str = "csv", paper_format: bool = False) -> None:
    if fmt == "json":
        stream.write(complexity_model(report).model_dump_json(indent=2) + "\n")
        return
    writer = _writer(stream)
    writer.writerow(COMPLEXITY_HEADER)
    rows = [(row.path, row.measures) for row in report.per_image]
    rows.append((AGGREGATE_LABEL, report.aggregate))
    for path, measures in rows:
        writer.writerow(
            [path] + [format_float(getattr(measures, name), paper_format=paper_format) for name in ("de", "mnf", "mdf", "pc")]
        )


def degradation_model(rows: Sequence[DegradationRow], threshold_levels: int) -> DegradationTableModel:
    return DegradationTableModel(
        threshold_levels=threshold_levels,
        rows=[
            DegradationRecord(dataset=row.dataset, factor=row.factor, item=row.item, **row.metrics.as_dict())
            for row in rows
        ],
    )


def write_degradation(
    rows: Sequence[DegradationRow],
    stream: TextIO,
    *,
    fmt: str = "csv",
    paper_format: bool = False,
    threshold_levels: int = 256,
) -> None:
    if fmt == "json":
        stream.write(degradation_model(rows, threshold_levels).model_dump_json(indent=2) + "\n")
        return
    per_image = any(row.item is not None for row in rows)
    writer = _writer(stream)
    writer.writerow(DEGRADE_HEADER + (("item",) if per_image else ()))
    for row in rows:
        cells = [row.dataset, str(row.factor)]
        cells += [format_float(getattr(row.metrics, name), paper_format=paper_format) for name in METRIC_NAMES]
        if per_image:
            cells.append(row.item or "")
        writer.writerow(cells)


def diagnostics_record(row: FitRow) -> DiagnosticsRecord:
    diag = row.diagnostics
    record = DiagnosticsRecord(measure=row.measure, factor=row.factor, dof=row.degree, n=diag.n if diag else 0)
    if diag is not None:
        record = record.model_copy(
            update={
                "r2": diag.r2,
                "ar2": diag.ar2,
                "rmse": diag.rmse,
                "mae": diag.mae,
                "aic": diag.aic,
                "aicc": diag.aicc,
            }
        )
    return record


def selection_records(best: Mapping[Tuple[str, int], FitRow], rows: Sequence[FitRow]) -> List[SelectionRecord]:
    records = []
    for (measure, factor), row in best.items():
        excluded = {
            str(other.degree): ("not fitted" if other.diagnostics is None else "AICc undefined")
            for other in rows
            if other.measure == measure
            and other.factor == factor
            and (other.diagnostics is None or other.diagnostics.aicc is None)
        }
        records.append(
            SelectionRecord(
                measure=measure,
                factor=factor,
                best_dof=row.degree,
                aicc=row.diagnostics.aicc,
                excluded=excluded,
            )
        )
    return records


def write_fit_table(
    rows: Sequence[FitRow],
    stream: TextIO,
    *,
    target: str = "E",
    best: Optional[Mapping[Tuple[str, int], FitRow]] = None,
    fmt: str = "csv",
    paper_format: bool = False,
) -> None:
    """Table-shaped diagnostics grid. With ``best`` a ``selected`` column marks the argmin-AICc
    degree of each (measure, factor) with 1 and every other row with 0."""
    if fmt == "json":
        model = FitTableModel(
            target=target,
            rows=[diagnostics_record(row) for row in rows],
            selection=selection_records(best or {}, rows),
        )
        stream.write(model.model_dump_json(indent=2) + "\n")
        return
    writer = _writer(stream)
    if best is None:
        writer.writerow(FIT_HEADER)
        for row in rows:
            writer.writerow(_fit_cells(row, paper_format))
        return
    chosen = {(row.measure, row.factor, row.degree) for row in best.values()}
    writer.writerow(FIT_HEADER + ("selected",))
    for row in rows:
        marker = "1" if (row.measure, row.factor, row.degree) in chosen else "0"
        writer.writerow(_fit_cells(row, paper_format) + [marker])


def _fit_cells(row: FitRow, paper_format: bool) -> List[str]:
    diag = row.diagnostics
    values = [None] * 6 if diag is None else [diag.r2, diag.ar2, diag.rmse, diag.mae, diag.aic, diag.aicc]
    return [row.measure, str(row.factor), str(row.degree)] + [format_float(v, paper_format=paper_format) for v in values]


def write_rows(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence[object]], *, paper_format: bool = False) -> None:
    writer = _writer(stream)
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(cell, paper_format=paper_format) if isinstance(cell, float) or cell is None else str(cell) for cell in row]
        )


def read_complexity_report(path: Path) -> Tuple[str, MeasureSet]:
    """Return (dataset name, aggregate measures). CSV reports take the dataset name from the file stem."""
    path = Path(path)
    text = _read_text(path)
    if path.suffix.lower() == ".json":
        try:
            model = ComplexityReportModel.model_validate_json(text)
        except PydanticValidationError as exc:
            raise ValidationError(f"{path}: not a complexity report: {exc.errors()[0]['msg']}") from exc
        agg = model.aggregate
        return model.dataset, MeasureSet(de=agg.de, mnf=agg.mnf, mdf=agg.mdf, pc=agg.pc)

    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != COMPLEXITY_HEADER:
        raise ValidationError(f"{path}: expected header {','.join(COMPLEXITY_HEADER)}")
    for record in reader:
        if record["path"] == AGGREGATE_LABEL:
            return path.stem, MeasureSet(**{name: _parse_float(record[name], path) for name in ("de", "mnf", "mdf", "pc")})
    raise ValidationError(f"{path}: no aggregate row")


def read_degradation_table(path: Path) -> Dict[str, Dict[int, SegMetrics]]:
    """Dataset-level rows keyed by dataset then factor; per-image rows are skipped."""
    path = Path(path)
    text = _read_text(path)
    table: Dict[str, Dict[int, SegMetrics]] = {}
    if path.suffix.lower() == ".json":
        try:
            model = DegradationTableModel.model_validate_json(text)
        except PydanticValidationError as exc:
            raise ValidationError(f"{path}: not a degrade table: {exc.errors()[0]['msg']}") from exc
        for record in model.rows:
            if record.item is None:
                table.setdefault(record.dataset, {})[record.factor] = SegMetrics(
                    **{name: getattr(record, name) for name in METRIC_NAMES}
                )
        return table

    reader = csv.DictReader(io.StringIO(text))
    fields = tuple(reader.fieldnames or ())
    if fields[: len(DEGRADE_HEADER)] != DEGRADE_HEADER:
        raise ValidationError(f"{path}: expected header {','.join(DEGRADE_HEADER)}")
    for record in reader:
        if record.get("item"):
            continue
        try:
            factor = int(record["factor"])
        except ValueError as exc:
            raise ValidationError(f"{path}: bad factor {record['factor']!r}") from exc
        table.setdefault(record["dataset"], {})[factor] = SegMetrics(
            **{name: _parse_float(record[column], path) for name, column in zip(METRIC_NAMES, DEGRADE_HEADER[2:])}
        )
    return table


def dump_json(payload: object, stream: TextIO) -> None:
    stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataIOError(f"{path}: cannot read ({exc.strerror or exc})") from exc


def _parse_float(cell: str, path: Path) -> Optional[float]:
    cell = (cell or "").strip()
    if not cell:
        return None
    try:
        return float(cell)
    except ValueError as exc:
        raise ValidationError(f"{path}: not a number: {cell!r}") from exc


def recommendation_model(result: Recommendation) -> RecommendationModel:
    return RecommendationModel(
        max_factor=result.max_factor,
        depth_choice=result.depth_choice.value,
        predicted_e={str(factor): e for factor, e in result.predicted_e.items()},
        rationale=RationaleModel(**result.rationale),
    )
