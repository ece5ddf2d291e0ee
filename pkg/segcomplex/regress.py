"""Polynomial least-squares fits of segmentation error against a complexity measure, the
goodness-of-fit diagnostics (R², adjusted R², RMSE, MAE, AIC, AICc) and AICc model
selection over the polynomial degree."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from segcomplex.errors import ModelSelectionError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEGREE = 6
# Residuals this close to zero (relative to the data scale) are rounding noise.
_RESIDUAL_EPS = 64 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class PolyFit:
    """Polynomial in the centered-scaled variable ``t = (x - x_center) / x_scale``.

    ``coefficients`` are in increasing order of power.
    """

    degree: int
    coefficients: tuple
    x_center: float
    x_scale: float

    def __post_init__(self) -> None:
        coefficients = tuple(float(c) for c in self.coefficients)
        if len(coefficients) != self.degree + 1:
            raise ValidationError(f"degree {self.degree} needs {self.degree + 1} coefficients, got {len(coefficients)}")
        if not all(math.isfinite(c) for c in coefficients):
            raise ValidationError("polynomial coefficients must be finite")
        if not self.x_scale > 0:
            raise ValidationError(f"x_scale must be positive, got {self.x_scale}")
        object.__setattr__(self, "coefficients", coefficients)

    def predict(self, x) -> np.ndarray:
        t = (np.asarray(x, dtype=np.float64) - self.x_center) / self.x_scale
        return P.polyval(t, self.coefficients)

    def __call__(self, x: float) -> float:
        return float(self.predict(x))

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": list(self.coefficients),
            "x_center": self.x_center,
            "x_scale": self.x_scale,
        }

    @classmethod
    def from_dict(cls, payload: Mapping) -> "PolyFit":
        return cls(
            degree=int(payload["degree"]),
            coefficients=tuple(payload["coefficients"]),
            x_center=float(payload["x_center"]),
            x_scale=float(payload["x_scale"]),
        )


@dataclass(frozen=True)
class RegressionDiagnostics:
    n: int
    k: int
    rss: float
    r2: Optional[float]
    ar2: Optional[float]
    rmse: float
    mae: float
    aic: float
    aicc: Optional[float]


@dataclass(frozen=True)
class ModelSelection:
    best_k: int
    diagnostics: Dict[int, RegressionDiagnostics]
    excluded: Dict[int, str] = field(default_factory=dict)

    @property
    def best(self) -> RegressionDiagnostics:
        return self.diagnostics[self.best_k]


@dataclass(frozen=True)
class FitRow:
    measure: str
    factor: int
    degree: int
    fit: Optional[PolyFit]
    diagnostics: Optional[RegressionDiagnostics]


def polyfit(x, y, degree: int) -> PolyFit:
    """Least squares through an SVD solve of the centered-scaled Vandermonde system."""
    x_arr, y_arr = _as_columns(x, y)
    if degree < 1:
        raise ValidationError(f"degree must be >= 1, got {degree}")
    n = x_arr.size
    if n < degree + 2:
        raise ValidationError(f"degree {degree} needs at least {degree + 2} observations, got {n}")
    if np.ptp(x_arr) == 0:
        raise ValidationError("x values are all equal; the fit is degenerate")

    center = float(x_arr.mean())
    scale = float(np.max(np.abs(x_arr - center)))
    vander = P.polyvander((x_arr - center) / scale, degree)
    coefficients, _, rank, _ = np.linalg.lstsq(vander, y_arr, rcond=None)
    if rank < degree + 1:
        logger.warning("degree %d fit is rank deficient (rank %d); using the minimum-norm solution", degree, rank)
    return PolyFit(degree=degree, coefficients=tuple(coefficients), x_center=center, x_scale=scale)


def r_squared(rss: float, tss: float) -> Optional[float]:
    if tss == 0:
        return None
    return 1.0 - rss / tss


def adjusted_r_squared(r2: Optional[float], n: int, k: int) -> Optional[float]:
    if r2 is None or n - k - 1 <= 0:
        return None
    return 1.0 - (1.0 - r2) * (n - 1) / (n - k - 1)


def aic(rss: float, n: int, k: int) -> float:
    """Natural-log AIC, ``n ln(RSS / n) + 2k``; a perfect fit gives -inf."""
    if rss == 0:
        return -math.inf
    return n * math.log(rss / n) + 2 * k


def aicc(aic_value: float, n: int, k: int) -> Optional[float]:
    if n - k - 1 <= 0:
        return None
    return aic_value + (2 * k * k + 2 * k) / (n - k - 1)


def diagnostics(fit: PolyFit, x, y) -> RegressionDiagnostics:
    x_arr, y_arr = _as_columns(x, y)
    n = x_arr.size
    if n < 2:
        raise ValidationError(f"diagnostics need at least 2 observations, got {n}")
    k = fit.degree
    residuals = y_arr - fit.predict(x_arr)
    tolerance = _RESIDUAL_EPS * max(1.0, float(np.max(np.abs(y_arr))))
    residuals[np.abs(residuals) <= tolerance] = 0.0

    rss = float(np.dot(residuals, residuals))
    tss = 0.0 if np.ptp(y_arr) == 0 else float(np.sum((y_arr - y_arr.mean()) ** 2))
    r2 = r_squared(rss, tss)
    aic_value = aic(rss, n, k)
    return RegressionDiagnostics(
        n=n,
        k=k,
        rss=rss,
        r2=r2,
        ar2=adjusted_r_squared(r2, n, k),
        rmse=math.sqrt(rss / n),
        mae=float(np.mean(np.abs(residuals))),
        aic=aic_value,
        aicc=aicc(aic_value, n, k),
    )


def select_model(x, y, k_max: int = DEFAULT_MAX_DEGREE) -> ModelSelection:
    """Pick the degree in 1..k_max with the lowest AICc; ties go to the smaller degree."""
    x_arr, y_arr = _as_columns(x, y)
    n = x_arr.size
    results: Dict[int, RegressionDiagnostics] = {}
    excluded: Dict[int, str] = {}
    best_k: Optional[int] = None
    for k in range(1, k_max + 1):
        if n < k + 2:
            excluded[k] = f"needs at least {k + 2} observations, have {n}"
            continue
        diag = diagnostics(polyfit(x_arr, y_arr, k), x_arr, y_arr)
        results[k] = diag
        if diag.aicc is None:
            excluded[k] = f"AICc undefined (n - k - 1 = {n - k - 1})"
            continue
        if best_k is None or diag.aicc < results[best_k].aicc:
            best_k = k
    if best_k is None:
        raise ModelSelectionError(f"no degree in 1..{k_max} admits AICc with {n} observations")
    return ModelSelection(best_k=best_k, diagnostics=results, excluded=excluded)


def fit_table(
    measures: Mapping[str, Sequence[float]],
    errors: Mapping[int, Sequence[float]],
    degrees: Sequence[int] = range(1, DEFAULT_MAX_DEGREE + 1),
) -> List[FitRow]:
    """Fit every (measure, factor, degree) combination, ordered measure, factor, degree.

    Columns must be aligned row for row. A degree the data cannot support yields a row with
    no fit and no diagnostics.
    """
    lengths = {len(column) for column in measures.values()} | {len(column) for column in errors.values()}
    if len(lengths) > 1:
        raise ValidationError(f"measure and error columns are misaligned (lengths {sorted(lengths)})")
    rows: List[FitRow] = []
    for measure, x in measures.items():
        for factor, y in errors.items():
            for degree in degrees:
                try:
                    fit = polyfit(x, y, degree)
                except ValidationError as exc:
                    logger.warning("%s/factor %s/degree %d not fitted: %s", measure, factor, degree, exc)
                    rows.append(FitRow(measure, factor, degree, None, None))
                    continue
                rows.append(FitRow(measure, factor, degree, fit, diagnostics(fit, x, y)))
    return rows


def select_table(rows: Sequence[FitRow]) -> Dict[tuple, FitRow]:
    """Lowest-AICc row per (measure, factor), ties to the smaller degree."""
    best: Dict[tuple, FitRow] = {}
    for row in rows:
        if row.diagnostics is None or row.diagnostics.aicc is None:
            continue
        key = (row.measure, row.factor)
        current = best.get(key)
        if current is None or row.diagnostics.aicc < current.diagnostics.aicc:
            best[key] = row
    return best


def curve_points(fit: PolyFit, lo: float, hi: float, samples: int = 101) -> List[tuple]:
    if samples < 2:
        raise ValidationError("a curve needs at least two samples")
    xs = np.linspace(lo, hi, samples)
    return list(zip(xs.tolist(), fit.predict(xs).tolist()))


def _as_columns(x, y):
    x_arr = np.array(x, dtype=np.float64, copy=True)
    y_arr = np.array(y, dtype=np.float64, copy=True)
    if x_arr.ndim != 1 or x_arr.shape != y_arr.shape:
        raise ValidationError(f"x and y must be 1-D and equal length, got {x_arr.shape} and {y_arr.shape}")
    if not (np.all(np.isfinite(x_arr)) and np.all(np.isfinite(y_arr))):
        raise ValidationError("regression inputs must be finite")
    return x_arr, y_arr
