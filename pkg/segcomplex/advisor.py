"""Design guidance from complexity: the largest downsampling factor whose predicted
segmentation error stays within budget, and a shallow-versus-deep choice by median frequency."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

import numpy as np

from segcomplex.errors import UndefinedMeasureError, ValidationError
from segcomplex.fixtures import load_grid_study
from segcomplex.regress import PolyFit, polyfit
from segcomplex.study import StudyTable

logger = logging.getLogger(__name__)

DEFAULT_MEASURE = "MDF"
DEFAULT_EPSILON = 0.05
DEFAULT_TAU = 0.05
TAU_NOTE = (
    "tau is a configured split between high- and low-frequency datasets, "
    "extrapolated from two reference cases; it is not a calibrated constant"
)


class Depth(str, enum.Enum):
    SHALLOW = "Shallow"
    DEEP = "Deep"


@dataclass(frozen=True)
class Recommendation:
    max_factor: int
    depth_choice: Depth
    predicted_e: Dict[int, float]
    rationale: Dict[str, object] = field(default_factory=dict)


def predict_error(fit: PolyFit, complexity: float) -> float:
    return float(np.clip(fit(complexity), 0.0, 1.0))


def recommend_factor(fits: Mapping[int, PolyFit], complexity: float, budget: float) -> int:
    """Largest factor whose predicted error is within ``budget``; 1 when none is."""
    if not fits:
        raise ValidationError("no per-factor fits supplied")
    if not budget > 0:
        raise ValidationError(f"error budget must be positive, got {budget}")
    chosen = 1
    for factor in sorted(fits):
        if predict_error(fits[factor], complexity) <= budget:
            chosen = max(chosen, factor)
    return chosen


def recommend_depth(mdf: Optional[float], tau: float = DEFAULT_TAU) -> Depth:
    if mdf is None:
        raise UndefinedMeasureError("median frequency is undefined (flat images); cannot choose a depth")
    return Depth.SHALLOW if mdf > tau else Depth.DEEP


def fit_per_factor(
    study: StudyTable,
    measure: str = DEFAULT_MEASURE,
    degree: int = 1,
    target: str = "E",
) -> Dict[int, PolyFit]:
    x = study.measure_column(measure)
    fits = {}
    for factor in study.factors:
        y = study.target_column(factor, target)
        if target == "D":
            # Predict the error 1 - D so budgets and clamping read the same way.
            y = [1.0 - value for value in y]
        fits[factor] = polyfit(x, y, degree)
    return fits


def fixture_fits(measure: str = DEFAULT_MEASURE, degree: int = 1, target: str = "E") -> Dict[int, PolyFit]:
    return fit_per_factor(load_grid_study(), measure, degree, target)


def recommend(
    fits: Mapping[int, PolyFit],
    complexity: float,
    mdf: Optional[float],
    *,
    measure: str = DEFAULT_MEASURE,
    budget: float = DEFAULT_EPSILON,
    tau: float = DEFAULT_TAU,
    target: str = "E",
) -> Recommendation:
    """Combine factor and depth choices; predicted errors are forced non-decreasing in the
    factor and every place that changed a prediction is recorded in the rationale."""
    if not fits:
        raise ValidationError("no per-factor fits supplied")
    if not budget > 0:
        raise ValidationError(f"error budget must be positive, got {budget}")
    depth = recommend_depth(mdf, tau)
    factors = sorted(fits)
    raw = {factor: predict_error(fits[factor], complexity) for factor in factors}

    adjusted: Dict[int, float] = {}
    violations: List[str] = []
    running = 0.0
    for factor in factors:
        value = raw[factor]
        if value < running:
            violations.append(
                f"predicted error at factor {factor} ({value:.6g}) is below a smaller factor's "
                f"({running:.6g}); raised to keep predictions non-decreasing"
            )
            value = running
        running = value
        adjusted[factor] = value
    for message in violations:
        logger.warning("Monotonicity violation: %s", message)

    chosen = 1
    for factor in factors:
        if adjusted[factor] <= budget:
            chosen = max(chosen, factor)

    degree = fits[factors[0]].degree
    return Recommendation(
        max_factor=chosen,
        depth_choice=depth,
        predicted_e=adjusted,
        rationale={
            "measure": measure,
            "value": float(complexity),
            "degree": degree,
            "target": target,
            "budget": float(budget),
            "tau": float(tau),
            "mdf": float(mdf),
            "raw_predicted_e": {str(k): v for k, v in raw.items()},
            "monotonic": not violations,
            "violations": violations,
            "notes": [TAU_NOTE],
        },
    )
