from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from segcomplex.errors import ModelSelectionError, ValidationError
from segcomplex.regress import (
    PolyFit,
    adjusted_r_squared,
    aic,
    aicc,
    curve_points,
    diagnostics,
    fit_table,
    polyfit,
    r_squared,
    select_model,
    select_table,
)

DE = [0.2105, 0.2821, 0.1869, 0.0594, 0.0248, 0.0093, 0.0090, 0.0117, 0.1104, 0.0282]
E2 = [0.2087, 0.2879, 0.2212, 0.0014, 0.0069, 0.0047, 0.0078, 0.0057, 0.0664, 0.0073]


def exact_least_squares(x, y, degree):
    """Normal equations in exact rational arithmetic; returns fitted values as floats."""
    xs = [Fraction(v) for v in x]
    ys = [Fraction(v) for v in y]
    size = degree + 1
    a = [[sum(xi ** (i + j) for xi in xs) for j in range(size)] for i in range(size)]
    b = [sum(yi * xi**i for xi, yi in zip(xs, ys)) for i in range(size)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        b[col], b[pivot] = b[pivot], b[col]
        for row in range(size):
            if row != col and a[row][col] != 0:
                factor = a[row][col] / a[col][col]
                a[row] = [u - factor * v for u, v in zip(a[row], a[col])]
                b[row] -= factor * b[col]
    coefficients = [b[i] / a[i][i] for i in range(size)]
    return [float(sum(c * xi**i for i, c in enumerate(coefficients))) for xi in xs]


class TestPolyfit:
    def test_collinear_points_fit_exactly(self):
        fit = polyfit([0, 1, 2], [1, 3, 5], 1)
        np.testing.assert_allclose(fit.predict([0, 1, 2]), [1, 3, 5], atol=1e-12)
        diag = diagnostics(fit, [0, 1, 2], [1, 3, 5])
        assert diag.rss == 0.0
        assert diag.r2 == 1.0
        assert diag.rmse == diag.mae == 0.0
        assert diag.aic == -math.inf

    def test_constant_y_gives_constant_polynomial(self):
        x = [0.1, 0.4, 0.5, 0.9, 1.3]
        fit = polyfit(x, [0.25] * 5, 2)
        np.testing.assert_allclose(fit.predict(x), 0.25, atol=1e-14)
        diag = diagnostics(fit, x, [0.25] * 5)
        assert diag.r2 is None
        assert diag.ar2 is None

    def test_matches_exact_normal_equations(self, rng):
        x = rng.random(10)
        y = rng.random(10)
        fit = polyfit(x, y, 3)
        np.testing.assert_allclose(fit.predict(x), exact_least_squares(x, y, 3), atol=1e-8)

    def test_linear_r2_matches_scipy(self):
        fit = polyfit(DE, E2, 1)
        expected = stats.linregress(DE, E2).rvalue ** 2
        assert diagnostics(fit, DE, E2).r2 == pytest.approx(expected, abs=1e-12)

    def test_serialization(self):
        fit = polyfit(DE, E2, 2)
        assert PolyFit.from_dict(fit.to_dict()) == fit
        assert fit(0.1) == pytest.approx(float(fit.predict(0.1)))

    def test_too_few_points(self):
        with pytest.raises(ValidationError):
            polyfit([0, 1, 2], [0, 1, 2], 2)

    def test_degenerate_x(self):
        with pytest.raises(ValidationError):
            polyfit([1, 1, 1, 1], [0, 1, 2, 3], 1)

    def test_non_finite(self):
        with pytest.raises(ValidationError):
            polyfit([0, 1, float("nan")], [0, 1, 2], 1)


class TestScalarHelpers:
    def test_closed_form_example(self):
        assert adjusted_r_squared(0.9, 10, 1) == pytest.approx(0.8875)
        e = 1.7
        value = aic(10 * e**2, 10, 1)
        assert value == pytest.approx(10 * math.log(e**2) + 2)
        assert aicc(value, 10, 1) == pytest.approx(value + 4 / 8)

    def test_undefined_cases(self):
        assert r_squared(1.0, 0.0) is None
        assert adjusted_r_squared(0.5, 3, 2) is None
        assert aicc(1.0, 5, 4) is None
        assert aic(0.0, 5, 1) == -math.inf


class TestSelection:
    def test_noiseless_quadratic_selects_two(self):
        x = np.linspace(-1, 1, 10)
        y = 0.5 - x + 2 * x**2
        selection = select_model(x, y, 6)
        assert selection.best_k == 2
        assert selection.best.aicc == -math.inf

    def test_unsupported_degrees_are_excluded(self, rng):
        x = rng.random(10)
        y = rng.random(10)
        selection = select_model(x, y, 9)
        assert 9 in selection.excluded
        assert 9 not in selection.diagnostics
        assert selection.best_k in selection.diagnostics

    def test_nothing_selectable(self):
        with pytest.raises(ModelSelectionError):
            select_model([0.0, 1.0], [0.0, 1.0], 1)

    def test_r2_never_drops_with_degree_and_rmse_bounds_mae(self, rng):
        for _ in range(100):
            x = rng.random(12)
            y = rng.random(12)
            selection = select_model(x, y, 5)
            r2 = [selection.diagnostics[k].r2 for k in range(1, 6)]
            assert all(a <= b + 1e-12 for a, b in zip(r2, r2[1:]))
            for diag in selection.diagnostics.values():
                assert diag.rmse >= diag.mae - 1e-15


class TestFitTable:
    def test_grid_order_and_unfittable_degrees(self):
        measures = {"A": [0.1, 0.2, 0.3, 0.5], "B": [0.4, 0.3, 0.2, 0.05]}
        errors = {2: [0.1, 0.2, 0.35, 0.5]}
        rows = fit_table(measures, errors, degrees=[1, 2, 3])
        assert [(row.measure, row.factor, row.degree) for row in rows] == [
            ("A", 2, 1),
            ("A", 2, 2),
            ("A", 2, 3),
            ("B", 2, 1),
            ("B", 2, 2),
            ("B", 2, 3),
        ]
        assert rows[2].fit is None and rows[2].diagnostics is None
        assert rows[0].diagnostics.n == 4

    def test_permuting_rows_keeps_the_table(self, rng):
        order = rng.permutation(10)
        original = fit_table({"DE": DE}, {2: E2}, degrees=[1, 2, 3])
        shuffled = fit_table(
            {"DE": [DE[i] for i in order]}, {2: [E2[i] for i in order]}, degrees=[1, 2, 3]
        )
        for a, b in zip(original, shuffled):
            assert a.diagnostics.r2 == pytest.approx(b.diagnostics.r2, abs=1e-12)
            assert a.diagnostics.rmse == pytest.approx(b.diagnostics.rmse, abs=1e-12)

    def test_misaligned_columns(self):
        with pytest.raises(ValidationError):
            fit_table({"DE": [0.1, 0.2, 0.3]}, {2: [0.1, 0.2]})

    def test_select_table_takes_lowest_aicc(self):
        x = list(np.linspace(0, 1, 10))
        y = [0.5 - v + 2 * v * v for v in x]
        best = select_table(fit_table({"M": x}, {3: y}))
        assert best[("M", 3)].degree == 2


def test_curve_points_span_the_range():
    fit = polyfit([0, 1, 2], [1, 3, 5], 1)
    points = curve_points(fit, 0.0, 2.0, samples=5)
    assert [x for x, _ in points] == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert points[-1][1] == pytest.approx(5.0)
