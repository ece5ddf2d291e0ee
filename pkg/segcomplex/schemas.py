from __future__ import annotations

from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

Measure = Literal["DE", "MNF", "MDF", "PC"]
Target = Literal["E", "D"]


class ManifestItemModel(BaseModel):
    image: str = Field(min_length=1)
    mask: str = Field(min_length=1)


class ManifestModel(BaseModel):
    name: str = Field(min_length=1)
    items: List[ManifestItemModel] = Field(min_length=1)


class MeasureRecord(BaseModel):
    path: str
    de: Optional[float] = None
    mnf: Optional[float] = None
    mdf: Optional[float] = None
    pc: Optional[float] = None


class ComplexityReportModel(BaseModel):
    dataset: str
    bins: int
    per_image: List[MeasureRecord] = Field(default_factory=list)
    aggregate: MeasureRecord


class MetricsRecord(BaseModel):
    se: Optional[float] = None
    sp: Optional[float] = None
    a: Optional[float] = None
    ba: Optional[float] = None
    d: Optional[float] = None
    j: Optional[float] = None
    e: Optional[float] = None


class DegradationRecord(MetricsRecord):
    dataset: str
    factor: int
    item: Optional[str] = None


class DegradationTableModel(BaseModel):
    threshold_levels: int
    rows: List[DegradationRecord] = Field(default_factory=list)


class DiagnosticsRecord(BaseModel):
    measure: str
    factor: int
    dof: int
    n: int
    r2: Optional[float] = None
    ar2: Optional[float] = None
    rmse: Optional[float] = None
    mae: Optional[float] = None
    aic: Optional[float] = None
    aicc: Optional[float] = None


class SelectionRecord(BaseModel):
    measure: str
    factor: int
    best_dof: int
    aicc: Optional[float] = None
    excluded: Dict[str, str] = Field(default_factory=dict)


class FitTableModel(BaseModel):
    target: Target
    rows: List[DiagnosticsRecord] = Field(default_factory=list)
    selection: List[SelectionRecord] = Field(default_factory=list)


class RationaleModel(BaseModel):
    measure: Measure
    value: float
    degree: int
    target: Target
    budget: float
    tau: float
    mdf: float
    raw_predicted_e: Dict[str, float] = Field(default_factory=dict)
    monotonic: bool = True
    violations: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


class RecommendationModel(BaseModel):
    max_factor: int = Field(ge=1)
    depth_choice: Literal["Shallow", "Deep"]
    predicted_e: Dict[str, float] = Field(default_factory=dict)
    rationale: RationaleModel


class DiffRecord(BaseModel):
    measure: str
    factor: int
    dof: int
    metric: str
    computed: Optional[float] = None
    reference: Optional[float] = None
    abs_diff: Optional[float] = None
    tolerance: Optional[float] = None
    within_tolerance: Optional[bool] = None


class ReproductionSummaryModel(BaseModel):
    binding_cells: int
    within_tolerance: int
    reference_best_dof_matches: int
    checksums: Dict[str, str] = Field(default_factory=dict)


Command = Literal["complexity", "degrade", "fit", "advise", "reproduce", "synth", "spectrum"]


class RunConfig(BaseModel):
    """Validated CLI arguments; built from the argparse namespace before any computation."""

    model_config = ConfigDict(extra="ignore")

    command: Command
    manifest: Optional[Path] = None
    image: Optional[Path] = None
    output: Optional[Path] = None
    output_dir: Optional[Path] = None
    format: Literal["csv", "json"] = "csv"
    force: bool = False
    paper_format: bool = False
    jobs: int = Field(default=1, ge=1)
    bins: int = Field(default=256, ge=1)
    threshold_levels: int = Field(default=256, ge=2)
    factors: List[int] = Field(default_factory=lambda: [2, 3, 4])
    per_image: bool = False
    seed: int = Field(default=0, ge=0, lt=2**64)
    dataset: Optional[str] = None
    measure: Measure = "MDF"
    target: Target = "E"
    max_degree: int = Field(default=6, ge=1)
    degree: int = Field(default=1, ge=1)
    select: bool = False
    curves: Optional[Path] = None
    paper_fixture: bool = False
    complexity_reports: List[Path] = Field(default_factory=list)
    degrade_tables: List[Path] = Field(default_factory=list)
    epsilon: float = Field(default=0.05, gt=0)
    tau: float = Field(default=0.05, gt=0)
    value: Optional[float] = None
    mdf: Optional[float] = None
    kind: Literal["disk", "vessels"] = "vessels"
    count: int = Field(default=4, ge=1)
    size: int = Field(default=128, ge=8)
    strict: bool = False

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        if self.command in ("complexity", "degrade") and self.manifest is None:
            raise ValueError(f"{self.command} requires --manifest")
        if self.command == "spectrum" and self.image is None:
            raise ValueError("spectrum requires --image")
        if self.command in ("reproduce", "synth") and self.output_dir is None:
            raise ValueError(f"{self.command} requires --output-dir")
        if self.command == "degrade":
            if not self.factors:
                raise ValueError("at least one factor is required")
            bad = [factor for factor in self.factors if factor < 2]
            if bad:
                raise ValueError(f"downsampling factors must be >= 2, got {bad}")
            if len(set(self.factors)) != len(self.factors):
                raise ValueError("downsampling factors must be distinct")
        if self.command in ("fit", "advise") and not self.paper_fixture:
            if not self.complexity_reports or not self.degrade_tables:
                raise ValueError(
                    f"{self.command} needs --paper-fixture or both --complexity-report and --degrade-table"
                )
        if self.command == "advise" and self.degree > 6:
            raise ValueError("advise supports polynomial degrees up to 6")
        return self
