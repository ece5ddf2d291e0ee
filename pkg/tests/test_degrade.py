from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import stats

from conftest import disk_union
from segcomplex.complexity import perimetric_complexity
from segcomplex.degrade import (
    DegradeConfig,
    degradation_metrics,
    degrade_mask,
    optimal_threshold,
    resize_bilinear,
    run_experiment1,
)
from segcomplex.errors import UndefinedMeasureError, ValidationError
from segcomplex.raster import BinaryMask, GrayImage, write_mask, write_synthetic_dataset
from segcomplex.raster.synth import disk, vessels
from segcomplex.segmetrics import confusion, seg_metrics
from segcomplex.spectra import lowpass


def naive_bilinear(data: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    in_h, in_w = data.shape
    out = np.empty((out_h, out_w))
    for row in range(out_h):
        sy = min(max((row + 0.5) * in_h / out_h - 0.5, 0.0), in_h - 1)
        y0 = int(math.floor(sy))
        y1 = min(y0 + 1, in_h - 1)
        fy = sy - y0
        for col in range(out_w):
            sx = min(max((col + 0.5) * in_w / out_w - 0.5, 0.0), in_w - 1)
            x0 = int(math.floor(sx))
            x1 = min(x0 + 1, in_w - 1)
            fx = sx - x0
            top = data[y0, x0] * (1 - fx) + data[y0, x1] * fx
            bottom = data[y1, x0] * (1 - fx) + data[y1, x1] * fx
            out[row, col] = top * (1 - fy) + bottom * fy
    return out


def split_disk(pieces: int, radius: float = 40.0, size: int = 192) -> BinaryMask:
    """``pieces`` equal-area disjoint disks whose total area matches one disk of ``radius``."""
    grid = math.ceil(math.sqrt(pieces))
    cell = size / grid
    r = radius / math.sqrt(pieces)
    mask = None
    for index in range(pieces):
        row, col = divmod(index, grid)
        part = disk(size, size, r, cx=(col + 0.5) * cell - 0.5, cy=(row + 0.5) * cell - 0.5)
        mask = part if mask is None else mask | part
    return mask


def dice(a: BinaryMask, b: BinaryMask) -> float:
    return seg_metrics(confusion(a, b)).d


class TestResize:
    def test_constant_stays_constant(self):
        out = resize_bilinear(GrayImage(np.full((7, 9), 0.3)), 4, 5)
        np.testing.assert_allclose(out.data, 0.3, atol=1e-15)

    def test_identity_size_returns_input(self, rng):
        image = GrayImage(rng.random((6, 5)))
        assert resize_bilinear(image, 5, 6) is image

    def test_matches_naive_oracle(self, rng):
        data = rng.random((7, 9))
        out = resize_bilinear(GrayImage(data), 4, 3)
        np.testing.assert_allclose(out.data, naive_bilinear(data, 4, 3), atol=1e-12)

    def test_upsampling_matches_naive_oracle(self, rng):
        data = rng.random((3, 4))
        out = resize_bilinear(GrayImage(data), 11, 7)
        np.testing.assert_allclose(out.data, naive_bilinear(data, 11, 7), atol=1e-12)


class TestOptimalThreshold:
    def test_exact_gray_reaches_full_dice_at_lowest_level(self):
        reference = disk(32, 32, 10)
        result = optimal_threshold(reference.to_gray(), reference, levels=16)
        assert result.dice == 1.0
        assert result.threshold == 1 / 16
        assert result.mask == reference

    def test_inverted_gray_scores_zero(self):
        reference = disk(32, 32, 10)
        inverted = GrayImage(1.0 - reference.to_gray().data)
        result = optimal_threshold(inverted, reference, levels=8)
        assert result.dice == 0.0
        assert result.threshold == 1 / 8

    def test_matches_exhaustive_sweep(self, rng):
        reference = BinaryMask(rng.random((24, 24)) < 0.3)
        gray = GrayImage(np.clip(reference.data * 0.6 + rng.random((24, 24)) * 0.5, 0, 1))
        levels = 32
        scores = []
        for i in range(1, levels + 1):
            t = i / levels
            candidate = BinaryMask(gray.data >= t)
            scores.append((dice(candidate, reference), -t))
        best_score, neg_t = max(scores)
        result = optimal_threshold(gray, reference, levels=levels)
        assert result.threshold == -neg_t
        assert result.dice == pytest.approx(best_score, abs=1e-15)

    def test_never_worse_than_a_fixed_half_threshold(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            reference = disk_union(rng, size=96)
            blurred = lowpass(reference.to_gray(), float(rng.uniform(0.05, 0.2)))
            gray = GrayImage(np.clip(blurred.data + rng.normal(0, 0.1, blurred.shape), 0, 1))
            fixed = dice(BinaryMask(gray.data >= 0.5), reference)
            assert optimal_threshold(gray, reference, levels=64).dice >= fixed - 1e-12

    def test_empty_reference(self):
        with pytest.raises(UndefinedMeasureError):
            optimal_threshold(GrayImage(np.zeros((4, 4))), BinaryMask(np.zeros((4, 4))))


class TestDegradeMask:
    def test_factor_one_is_identity(self, rng):
        mask = BinaryMask(rng.random((20, 30)) < 0.4)
        assert degrade_mask(mask, DegradeConfig(1)) == mask

    def test_disk_survives_downsampling(self):
        mask = disk(256, 256, 64)
        assert dice(degrade_mask(mask, DegradeConfig(4)), mask) >= 0.98

    def test_thin_vessels_lose_more_than_a_disk(self):
        blob = disk(256, 256, 64)
        tree = vessels(256, 256, seed=3, vessel_width=1)
        blob_dice = dice(degrade_mask(blob, DegradeConfig(4)), blob)
        tree_dice = dice(degrade_mask(tree, DegradeConfig(4)), tree)
        assert blob_dice - tree_dice >= 0.1

    def test_odd_sizes(self, rng):
        mask = disk(37, 29, 9)
        out = degrade_mask(mask, DegradeConfig(3))
        assert out.shape == mask.shape

    def test_invalid_config(self):
        with pytest.raises(ValidationError):
            DegradeConfig(0)
        with pytest.raises(ValidationError):
            DegradeConfig(2, threshold_levels=1)

    def test_empty_mask(self):
        with pytest.raises(UndefinedMeasureError):
            degrade_mask(BinaryMask(np.zeros((8, 8))), DegradeConfig(2))


class TestProperties:
    def test_error_never_drops_as_the_factor_grows(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            mask = disk_union(rng)
            errors = [row.e for row in degradation_metrics(mask, [1, 2, 3, 4])]
            assert errors[0] == 0.0
            assert all(a <= b for a, b in zip(errors, errors[1:])), errors

    def test_error_tracks_perimetric_complexity(self):
        complexities, errors = [], []
        for pieces in range(1, 11):
            mask = split_disk(pieces)
            complexities.append(perimetric_complexity(mask))
            errors.append(degradation_metrics(mask, [4])[0].e)
        rho, _ = stats.spearmanr(complexities, errors)
        assert rho >= 0.9

    def test_error_tracks_perimetric_complexity_across_vessel_density(self):
        # Fixed-width capillaries over the same trunks; each mask contains the previous one.
        complexities, errors = [], []
        for count in range(3, 33, 3):
            mask = vessels(160, 160, seed=21, count=count, vessel_width=1, trunks=4)
            assert mask.foreground < 0.25 * mask.data.size
            complexities.append(perimetric_complexity(mask))
            errors.append(degradation_metrics(mask, [4])[0].e)
        rho, _ = stats.spearmanr(complexities, errors)
        assert rho >= 0.9


class TestExperiment:
    def test_rows_per_factor(self, disk_dataset):
        rows = run_experiment1(disk_dataset, [2, 3, 4], threshold_levels=64)
        assert [row.factor for row in rows] == [2, 3, 4]
        assert all(row.item is None and row.dataset == "synthetic-disk" for row in rows)
        errors = [row.metrics.e for row in rows]
        assert errors == sorted(errors)

    def test_per_image_rows_come_first(self, disk_dataset):
        rows = run_experiment1(disk_dataset, [2, 4], threshold_levels=64, per_image=True)
        assert [(row.item, row.factor) for row in rows] == [
            ("masks/000.pbm", 2),
            ("masks/000.pbm", 4),
            ("masks/001.pbm", 2),
            ("masks/001.pbm", 4),
            (None, 2),
            (None, 4),
        ]
        mean_d = (rows[0].metrics.d + rows[2].metrics.d) / 2
        assert rows[4].metrics.d == pytest.approx(mean_d)

    def test_parallel_matches_serial(self, disk_dataset):
        serial = run_experiment1(disk_dataset, threshold_levels=64, jobs=1)
        parallel = run_experiment1(disk_dataset, threshold_levels=64, jobs=3)
        assert serial == parallel

    @pytest.mark.parametrize("factors", [[], [1, 2], [0]])
    def test_bad_factors(self, disk_dataset, factors):
        with pytest.raises(ValidationError):
            run_experiment1(disk_dataset, factors)

    def test_failing_item_is_named(self, tmp_path):
        dataset = write_synthetic_dataset(tmp_path / "three", kind="disk", count=3, size=32, seed=2)
        write_mask(BinaryMask(np.zeros((32, 32), dtype=bool)), dataset.items[1].mask_path)
        with pytest.raises(UndefinedMeasureError, match="masks/001.pbm: cannot degrade an empty mask"):
            run_experiment1(dataset, [2], threshold_levels=16)
