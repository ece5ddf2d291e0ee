from __future__ import annotations

import json

import numpy as np
import pytest

from segcomplex.errors import DataIOError, ValidationError
from segcomplex.raster import (
    LUMA_WEIGHTS,
    BinaryMask,
    DatasetManifest,
    GrayImage,
    ManifestItem,
    load_item,
    load_manifest,
    synth,
    synthetic_pair,
    to_gray,
    write_gray,
    write_manifest,
    write_mask,
    write_synthetic_dataset,
)
from segcomplex.raster.synth import disk, rectangle, vessels


class TestModels:
    def test_gray_rejects_out_of_range(self):
        with pytest.raises(ValidationError):
            GrayImage(np.array([[0.0, 1.5]]))

    def test_gray_is_read_only_copy(self):
        source = np.zeros((2, 2))
        image = GrayImage(source)
        source[0, 0] = 1.0
        assert image.data[0, 0] == 0.0
        with pytest.raises(ValueError):
            image.data[0, 0] = 0.5

    def test_mask_from_integers(self):
        mask = BinaryMask(np.array([[0, 3], [1, 0]]))
        assert mask.foreground == 2
        assert mask.to_gray().data.tolist() == [[0.0, 1.0], [1.0, 0.0]]

    def test_empty_arrays_are_rejected(self):
        with pytest.raises(ValidationError):
            BinaryMask(np.zeros((0, 3), dtype=bool))

    def test_dataset_needs_items(self):
        with pytest.raises(ValidationError):
            DatasetManifest(name="empty", items=())


class TestColor:
    def test_white_and_red(self):
        rgb = np.array([[[1.0, 1.0, 1.0], [1.0, 0.0, 0.0]]])
        gray = to_gray(rgb).data
        assert gray[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert gray[0, 1] == pytest.approx(0.299, abs=1e-15)

    def test_matches_scalar_recomputation(self, rng):
        rgb = rng.random((4, 5, 3))
        gray = to_gray(rgb).data
        for (row, col), value in np.ndenumerate(gray):
            r, g, b = rgb[row, col]
            expected = LUMA_WEIGHTS[0] * r + LUMA_WEIGHTS[1] * g + LUMA_WEIGHTS[2] * b
            assert value == pytest.approx(expected, abs=1e-15)

    def test_separate_channels(self, rng):
        rgb = rng.random((3, 3, 3))
        assert to_gray([rgb[..., 0], rgb[..., 1], rgb[..., 2]]) == to_gray(rgb)

    def test_channel_shape_mismatch(self):
        with pytest.raises(ValidationError):
            to_gray([np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((3, 2))])


class TestSynth:
    def test_zero_radius_disk_is_empty(self):
        assert disk(16, 16, 0).foreground == 0

    def test_disk_outside_frame_is_rejected(self):
        with pytest.raises(ValidationError):
            disk(16, 16, 10)

    def test_full_rectangle(self):
        assert rectangle(5, 4).foreground == 20

    def test_vessels_are_deterministic(self):
        first = synth("vessels", 64, 64, seed=7)
        second = synth("vessels", 64, 64, seed=7)
        assert first == second
        assert first.foreground > 0
        assert synth("vessels", 64, 64, seed=8) != first

    def test_raising_the_count_only_adds_vessels(self):
        masks = [vessels(96, 96, seed=3, count=c, vessel_width=1, trunks=2) for c in (1, 4, 8)]
        for smaller, larger in zip(masks, masks[1:]):
            assert not np.any(smaller.data & ~larger.data)
            assert larger.foreground > smaller.foreground

    def test_trunks_are_drawn_first(self):
        trunk_only = vessels(64, 64, seed=9, count=1, vessel_width=1, trunks=3)
        assert not np.any(trunk_only.data & ~vessels(64, 64, seed=9, count=5, vessel_width=1, trunks=3).data)
        with pytest.raises(ValidationError):
            vessels(64, 64, seed=9, trunks=-1)

    def test_vessels_need_a_seed(self):
        with pytest.raises(ValidationError):
            synth("vessels", 8, 8)

    def test_seed_must_fit_in_64_bits(self):
        with pytest.raises(ValidationError):
            vessels(8, 8, seed=2**64)

    def test_noise_is_seeded(self):
        assert synth("noise", 8, 8, seed=1) == synth("noise", 8, 8, seed=1)

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            synth("spiral", 8, 8)

    def test_union_of_generators(self):
        left = rectangle(10, 10, 0, 0, 5, 10)
        right = rectangle(10, 10, 5, 0, 5, 10)
        assert (left | right).foreground == 100

    @pytest.mark.parametrize("kind", ["disk", "vessels"])
    def test_synthetic_pair_follows_mask(self, kind):
        image, mask = synthetic_pair(kind, 48, seed=11)
        assert image.shape == mask.shape == (48, 48)
        assert mask.foreground > 0
        assert image.data[mask.data].min() > image.data[~mask.data].max()


class TestManifest:
    def test_paths_resolve_relative_to_manifest(self, tmp_path):
        (tmp_path / "data").mkdir()
        write_gray(GrayImage(np.zeros((3, 4))), tmp_path / "data" / "a.pgm")
        write_mask(BinaryMask(np.ones((3, 4), dtype=bool)), tmp_path / "data" / "a.pbm")
        path = tmp_path / "data" / "manifest.json"
        path.write_text(json.dumps({"name": "toy", "items": [{"image": "a.pgm", "mask": "a.pbm"}]}))

        manifest = load_manifest(path)
        assert manifest.name == "toy"
        assert len(manifest) == 1
        image, mask = load_item(manifest.items[0])
        assert image.shape == mask.shape == (3, 4)
        assert manifest.display_path(manifest.items[0].image_path) == "a.pgm"

    def test_write_then_load(self, tmp_path):
        item = ManifestItem(tmp_path / "img" / "x.pgm", tmp_path / "msk" / "x.pbm")
        path = tmp_path / "m.json"
        write_manifest(DatasetManifest("set", (item,)), path)
        assert json.loads(path.read_text())["items"] == [{"image": "img/x.pgm", "mask": "msk/x.pbm"}]
        assert load_manifest(path).items[0].image_path == (tmp_path / "img" / "x.pgm").resolve()

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(DataIOError):
            load_manifest(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError):
            load_manifest(path)

    def test_empty_item_list(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"name": "x", "items": []}))
        with pytest.raises(ValidationError):
            load_manifest(path)

    def test_mismatched_dimensions(self, tmp_path):
        write_gray(GrayImage(np.zeros((3, 4))), tmp_path / "a.pgm")
        write_mask(BinaryMask(np.ones((4, 4), dtype=bool)), tmp_path / "a.pbm")
        with pytest.raises(ValidationError):
            load_item(ManifestItem(tmp_path / "a.pgm", tmp_path / "a.pbm"))

    def test_synthetic_dataset_is_reproducible(self, tmp_path):
        first = write_synthetic_dataset(tmp_path / "a", kind="vessels", count=3, size=32, seed=4)
        second = write_synthetic_dataset(tmp_path / "b", kind="vessels", count=3, size=32, seed=4)
        for a, b in zip(first.items, second.items):
            assert a.image_path.read_bytes() == b.image_path.read_bytes()
            assert a.mask_path.read_bytes() == b.mask_path.read_bytes()
        assert load_manifest(tmp_path / "a" / "manifest.json").name == "synthetic-vessels"

    def test_synthetic_dataset_refuses_overwrite(self, tmp_path):
        write_synthetic_dataset(tmp_path, kind="disk", count=1, size=32, seed=0)
        with pytest.raises(ValidationError):
            write_synthetic_dataset(tmp_path, kind="disk", count=1, size=32, seed=0)
        write_synthetic_dataset(tmp_path, kind="disk", count=1, size=32, seed=0, force=True)
