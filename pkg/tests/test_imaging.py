import numpy as np
import pytest
from PIL import Image

from freqlens.errors import DimensionError, ManifestError, ParameterError
from freqlens.imaging import (
    PairRecord,
    bilinear_resize,
    degrade_resolution,
    load_image,
    read_manifest,
    save_image,
)
from freqlens.spectral import (
    L2,
    SpatialImage,
    band_energies,
    build_partition,
    forward_transform,
    inverse_transform,
)

from helpers import reference_bilinear


def write_png(path, array):
    Image.fromarray(array).save(path)
    return path


class TestBilinearResize:
    @pytest.mark.parametrize("shape_out", [(3, 5), (7, 4), (8, 8), (2, 9)])
    def test_matches_reference_kernel(self, shape_out):
        rng = np.random.default_rng(1)
        arr = rng.uniform(0, 255, (6, 6, 3))
        got = bilinear_resize(arr, *shape_out)
        expected = reference_bilinear(arr, *shape_out)
        assert got.shape == expected.shape
        assert np.abs(got - expected).max() < 1e-9

    def test_upscale_matches_reference(self):
        rng = np.random.default_rng(2)
        arr = rng.uniform(0, 255, (4, 4))
        got = bilinear_resize(arr, 11, 13)
        assert np.abs(got - reference_bilinear(arr, 11, 13)).max() < 1e-9

    def test_identity_when_size_unchanged(self):
        rng = np.random.default_rng(3)
        arr = rng.uniform(0, 255, (5, 5, 1))
        assert np.array_equal(bilinear_resize(arr, 5, 5), arr)

    def test_constant_preserved_exactly(self):
        arr = np.full((7, 7, 3), 41.5)
        out = bilinear_resize(arr, 13, 3)
        assert np.array_equal(out, np.full((13, 3, 3), 41.5))

    def test_invalid_target(self):
        with pytest.raises(ParameterError):
            bilinear_resize(np.zeros((4, 4)), 0, 4)


class TestDegradeResolution:
    def test_shape_preserved(self):
        rng = np.random.default_rng(4)
        img = SpatialImage(rng.uniform(0, 255, (112, 112, 3)))
        out = degrade_resolution(img, 0.25)
        assert out.pixels.shape == img.pixels.shape

    def test_constant_image_unchanged_exactly(self):
        img = SpatialImage(np.full((112, 112, 3), 77.0))
        out = degrade_resolution(img, 0.25)
        assert np.array_equal(out.pixels, img.pixels)

    def test_mean_roughly_preserved_on_natural_images(self):
        rng = np.random.default_rng(5)
        img = SpatialImage(rng.uniform(50, 200, (112, 112, 3)))
        out = degrade_resolution(img, 0.25)
        assert abs(out.pixels.mean() - img.pixels.mean()) / img.pixels.mean() < 0.01

    @pytest.mark.parametrize("m", [0.0, -0.2, 1.0, 1.5])
    def test_factor_out_of_range(self, m):
        img = SpatialImage(np.zeros((16, 16, 1)))
        with pytest.raises(ParameterError):
            degrade_resolution(img, m)

    def test_factor_yielding_tiny_intermediate(self):
        img = SpatialImage(np.zeros((16, 16, 1)))
        with pytest.raises(ParameterError):
            degrade_resolution(img, 0.05)  # floor(16 * 0.05) = 0

    def test_near_unit_factor_is_nearly_identity(self):
        # floor(N*m) == N is unreachable for m < 1, so the closest allowed
        # factor shrinks by one pixel and back
        rng = np.random.default_rng(6)
        smooth = bilinear_resize(rng.uniform(80, 170, (14, 14, 1)), 112, 112)
        img = SpatialImage(smooth)
        out = degrade_resolution(img, 0.999)  # intermediate size 111
        assert np.abs(out.pixels - img.pixels).max() < 4.0  # ~3% of the value range
        assert abs(out.pixels.mean() - img.pixels.mean()) < 0.2

    def test_quarter_factor_strips_high_frequencies(self):
        rng = np.random.default_rng(7)
        img = SpatialImage(rng.uniform(0, 255, (112, 112, 3)))
        partition = build_partition(112, 14, L2)  # bands t = 14, 28, 42, 56
        before = band_energies(forward_transform(img), partition)
        after = band_energies(forward_transform(degrade_resolution(img, 0.25)), partition)
        assert after[2] < before[2]  # (28, 42]
        assert after[3] < before[3]  # (42, 56] and beyond

    def test_roundtrip_through_transform(self):
        rng = np.random.default_rng(8)
        img = SpatialImage(rng.uniform(0, 255, (56, 56, 3)))
        degraded = degrade_resolution(img, 0.5)
        back = inverse_transform(forward_transform(degraded))
        assert np.abs(back.pixels - degraded.pixels).max() < 1e-6


class TestLoadImage:
    def test_rgb_png(self, tmp_path):
        rng = np.random.default_rng(9)
        arr = rng.integers(0, 256, (112, 112, 3), dtype=np.uint8)
        path = write_png(tmp_path / "img.png", arr)
        img = load_image(path)
        assert img.n == 112 and img.channels == 3
        assert np.array_equal(img.pixels, arr.astype(float))

    def test_alpha_dropped_with_warning(self, tmp_path):
        arr = np.zeros((8, 8, 4), dtype=np.uint8)
        arr[:, :, 0] = 200
        arr[:, :, 3] = 10
        path = write_png(tmp_path / "rgba.png", arr)
        with pytest.warns(UserWarning, match="alpha"):
            img = load_image(path)
        assert img.channels == 3
        assert img.pixels[0, 0, 0] == 200.0

    def test_grayscale_replicated(self, tmp_path):
        arr = np.full((8, 8), 99, dtype=np.uint8)
        path = write_png(tmp_path / "gray.png", arr)
        img = load_image(path)
        assert img.channels == 3
        assert np.all(img.pixels == 99.0)

    def test_jpeg_decodes(self, tmp_path):
        arr = np.full((16, 16, 3), 128, dtype=np.uint8)
        Image.fromarray(arr).save(tmp_path / "img.jpg", quality=95)
        img = load_image(tmp_path / "img.jpg")
        assert img.n == 16

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParameterError, match="not found"):
            load_image(tmp_path / "absent.png")

    def test_corrupt_file(self, tmp_path):
        bad = tmp_path / "bad.png"
        bad.write_bytes(b"this is not an image")
        with pytest.raises(ParameterError, match="decode"):
            load_image(bad)

    def test_size_mismatch_error_policy(self, tmp_path):
        arr = np.zeros((8, 8, 3), dtype=np.uint8)
        path = write_png(tmp_path / "small.png", arr)
        with pytest.raises(DimensionError):
            load_image(path, expected_size=112, resize_policy="error")

    def test_size_mismatch_bilinear_policy(self, tmp_path):
        arr = np.full((8, 8, 3), 60, dtype=np.uint8)
        path = write_png(tmp_path / "small.png", arr)
        img = load_image(path, expected_size=16, resize_policy="bilinear")
        assert img.n == 16
        assert np.allclose(img.pixels, 60.0)

    def test_decoded_pixels_survive_transform_roundtrip(self, tmp_path):
        rng = np.random.default_rng(10)
        arr = rng.integers(0, 256, (32, 32, 3), dtype=np.uint8)
        img = load_image(write_png(tmp_path / "img.png", arr))
        back = inverse_transform(forward_transform(img))
        assert np.abs(back.pixels - img.pixels).max() < 1e-6


class TestSaveImage:
    def test_clamp_and_round_only_at_write(self, tmp_path):
        pixels = np.array([[[-20.0], [300.0]], [[99.4], [99.6]]])
        img = SpatialImage(pixels)
        assert img.pixels.min() == -20.0  # in-memory values untouched
        save_image(img, tmp_path / "out.png")
        back = np.asarray(Image.open(tmp_path / "out.png"))
        assert back[0, 0] == 0 and back[0, 1] == 255
        assert back[1, 0] == 99 and back[1, 1] == 100

    def test_bgr_image_written_as_rgb_png(self, tmp_path):
        pixels = np.zeros((4, 4, 3))
        pixels[:, :, 0] = 250.0  # blue plane in BGR order
        save_image(SpatialImage(pixels, channel_order="BGR"), tmp_path / "bgr.png")
        back = np.asarray(Image.open(tmp_path / "bgr.png"))
        assert back[0, 0, 2] == 250 and back[0, 0, 0] == 0


class TestReadManifest:
    def test_valid_two_rows(self, tmp_path):
        (tmp_path / "a.png").touch()
        manifest = tmp_path / "pairs.csv"
        manifest.write_text(
            "path_a,path_b,label,tag\n"
            "a.png,b.png,genuine,\n"
            "/abs/c.png,d.png,imposter,morph\n"
        )
        records = read_manifest(manifest)
        assert len(records) == 2
        assert records[0] == PairRecord(tmp_path / "a.png", tmp_path / "b.png", "genuine", None)
        assert str(records[1].path_a) == "/abs/c.png"
        assert records[1].tag == "morph"

    def test_unknown_label_names_line(self, tmp_path):
        manifest = tmp_path / "pairs.csv"
        manifest.write_text("path_a,path_b,label\na.png,b.png,match\n")
        with pytest.raises(ManifestError, match="line 2.*match"):
            read_manifest(manifest)

    def test_header_only_warns_and_returns_empty(self, tmp_path):
        manifest = tmp_path / "pairs.csv"
        manifest.write_text("path_a,path_b,label\n")
        with pytest.warns(UserWarning, match="no pair rows"):
            assert read_manifest(manifest) == []

    def test_missing_column(self, tmp_path):
        manifest = tmp_path / "pairs.csv"
        manifest.write_text("path_a,label\na.png,genuine\n")
        with pytest.raises(ManifestError, match="header"):
            read_manifest(manifest)

    def test_empty_path_rejected(self, tmp_path):
        manifest = tmp_path / "pairs.csv"
        manifest.write_text("path_a,path_b,label\na.png,,genuine\n")
        with pytest.raises(ManifestError, match="empty image path"):
            read_manifest(manifest)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ManifestError, match="not found"):
            read_manifest(tmp_path / "nope.csv")
