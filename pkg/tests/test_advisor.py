from __future__ import annotations

import logging

import pytest

from segcomplex.advisor import (
    Depth,
    fit_per_factor,
    fixture_fits,
    predict_error,
    recommend,
    recommend_depth,
    recommend_factor,
)
from segcomplex.errors import UndefinedMeasureError, ValidationError
from segcomplex.fixtures import load_study_table
from segcomplex.regress import PolyFit
from segcomplex.schemas import RationaleModel


def constant(value: float) -> PolyFit:
    return PolyFit(degree=1, coefficients=(value, 0.0), x_center=0.0, x_scale=1.0)


IDENTITY = PolyFit(degree=1, coefficients=(0.5, 0.5), x_center=0.5, x_scale=0.5)


class TestPredictError:
    def test_evaluates_the_fit(self):
        assert predict_error(IDENTITY, 0.5) == pytest.approx(0.5)

    def test_clamps_to_unit_interval(self):
        assert predict_error(IDENTITY, 2.0) == 1.0
        assert predict_error(IDENTITY, -1.0) == 0.0

    def test_fixture_fit_lands_near_the_observed_error(self):
        fits = fixture_fits("MDF", 1)
        assert predict_error(fits[2], 0.2301) == pytest.approx(0.2879, abs=0.05)


class TestRecommendFactor:
    def test_largest_factor_within_budget(self):
        fits = {2: constant(0.01), 3: constant(0.04), 4: constant(0.09)}
        assert recommend_factor(fits, 0.1, 0.05) == 3

    def test_generous_budget_takes_largest(self):
        assert recommend_factor(fixture_fits(), 0.2301, 1.0) == 4

    def test_complex_data_keeps_full_resolution(self):
        assert recommend_factor(fixture_fits(), 0.2301, 0.05) == 1

    def test_simple_data_tolerates_the_largest_factor(self):
        assert recommend_factor(fixture_fits(), 0.0049, 0.05) == 4

    def test_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            recommend_factor({}, 0.1, 0.05)
        with pytest.raises(ValidationError):
            recommend_factor({2: constant(0.0)}, 0.1, 0.0)


class TestRecommendDepth:
    @pytest.mark.parametrize(
        "mdf, expected",
        [(0.1967, Depth.SHALLOW), (0.0049, Depth.DEEP), (0.05, Depth.DEEP), (0.0501, Depth.SHALLOW)],
    )
    def test_threshold(self, mdf, expected):
        assert recommend_depth(mdf, 0.05) is expected

    def test_undefined_mdf(self):
        with pytest.raises(UndefinedMeasureError):
            recommend_depth(None)


class TestRecommend:
    def test_full_recommendation(self):
        result = recommend(fixture_fits(), 0.1967, 0.1967)
        assert result.depth_choice is Depth.SHALLOW
        assert sorted(result.predicted_e) == [2, 3, 4]
        assert result.max_factor == 1
        rationale = RationaleModel(**result.rationale)
        assert rationale.measure == "MDF"
        assert rationale.monotonic
        assert rationale.notes

    def test_non_monotone_predictions_are_raised_and_reported(self, caplog):
        fits = {2: constant(0.03), 3: constant(0.02), 4: constant(0.06)}
        with caplog.at_level(logging.WARNING, logger="segcomplex.advisor"):
            result = recommend(fits, 0.1, 0.01, budget=0.05)
        assert result.predicted_e == {2: 0.03, 3: 0.03, 4: 0.06}
        assert result.max_factor == 3
        assert not result.rationale["monotonic"]
        assert len(result.rationale["violations"]) == 1
        assert "Monotonicity violation" in caplog.text

    def test_dice_target_models_one_minus_dice(self):
        study = load_study_table()
        e_fits = fit_per_factor(study, "MDF", 1, "E")
        d_fits = fit_per_factor(study, "MDF", 1, "D")
        # 1 - D and E = 1 - J differ, but both grow with complexity.
        assert d_fits[2].coefficients[1] > 0
        assert e_fits[2].coefficients[1] > d_fits[2].coefficients[1]

    def test_undefined_mdf_is_rejected(self):
        with pytest.raises(UndefinedMeasureError):
            recommend(fixture_fits(), 0.1, None)
