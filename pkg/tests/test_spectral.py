import numpy as np
import pytest

from freqlens.errors import DimensionError, ParameterError, SymmetryError
from freqlens.spectral import (
    L1,
    L2,
    BandSpec,
    SpatialImage,
    SpectralImage,
    apply_mask,
    band_energies,
    band_index_map,
    build_mask,
    build_partition,
    build_union_mask,
    forward_transform,
    inverse_transform,
    mask_image,
    radius_grid,
    spectral_energy,
)

from helpers import band_coordinate_count, naive_dft, naive_idft

ALL_S = (1, 2, 4, 8, 14)


def random_image(rng, n, channels=3):
    return SpatialImage(rng.uniform(0.0, 255.0, size=(n, n, channels)))


class TestForwardTransform:
    def test_constant_image_has_only_dc(self):
        img = SpatialImage(np.full((4, 4, 3), 128.0))
        spec = forward_transform(img)
        assert spec.dc(0) == pytest.approx(128.0, abs=1e-12)
        off_dc = spec.coeffs.copy()
        off_dc[2, 2, :] = 0.0
        assert np.abs(off_dc).max() < 1e-12

    def test_impulse_has_flat_spectrum(self):
        pixels = np.zeros((4, 4, 1))
        pixels[0, 0, 0] = 1.0
        spec = forward_transform(SpatialImage(pixels))
        assert np.allclose(np.abs(spec.coeffs), 1.0 / 16.0, atol=1e-15)

    def test_dc_equals_channel_mean(self):
        rng = np.random.default_rng(3)
        img = random_image(rng, 8)
        spec = forward_transform(img)
        for c in range(3):
            assert spec.dc(c).real == pytest.approx(img.pixels[:, :, c].mean(), abs=1e-9)
            assert abs(spec.dc(c).imag) < 1e-12

    @pytest.mark.parametrize("n", [4, 8, 16])
    @pytest.mark.parametrize("channels", [1, 3])
    def test_matches_naive_double_sum(self, n, channels):
        rng = np.random.default_rng(n * 10 + channels)
        img = random_image(rng, n, channels)
        spec = forward_transform(img)
        expected = naive_dft(img.pixels)
        assert np.abs(spec.coeffs - expected).max() < 1e-9

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            SpatialImage(np.zeros((4, 6, 3)))

    def test_rejects_bad_channel_count(self):
        with pytest.raises(DimensionError):
            SpatialImage(np.zeros((4, 4, 2)))

    def test_rejects_tiny_image(self):
        with pytest.raises(DimensionError):
            forward_transform(SpatialImage(np.zeros((1, 1, 1))))


class TestInverseTransform:
    @pytest.mark.parametrize("n", [4, 8, 16, 112])
    def test_roundtrip_identity(self, n):
        rng = np.random.default_rng(n)
        img = random_image(rng, n)
        back = inverse_transform(forward_transform(img))
        assert np.abs(back.pixels - img.pixels).max() < 1e-6

    def test_matches_naive_inverse(self):
        rng = np.random.default_rng(11)
        img = random_image(rng, 8, 1)
        spec = forward_transform(img)
        expected = naive_idft(spec.coeffs)
        assert np.abs(expected.real - img.pixels).max() < 1e-9

    def test_dc_only_spectrum_gives_constant(self):
        coeffs = np.zeros((6, 6, 1), dtype=complex)
        coeffs[3, 3, 0] = 77.0
        img = inverse_transform(SpectralImage(coeffs))
        assert np.allclose(img.pixels, 77.0, atol=1e-12)

    def test_asymmetric_spectrum_raises(self):
        rng = np.random.default_rng(5)
        coeffs = rng.normal(size=(8, 8, 1)) + 1j * rng.normal(size=(8, 8, 1))
        with pytest.raises(SymmetryError):
            inverse_transform(SpectralImage(coeffs))

    def test_uncentered_spectrum_rejected(self):
        with pytest.raises(ParameterError):
            inverse_transform(SpectralImage(np.zeros((4, 4, 1), dtype=complex), centered=False))

    @pytest.mark.parametrize("s", ALL_S)
    def test_masked_reconstruction_stays_real(self, s):
        rng = np.random.default_rng(s)
        img = random_image(rng, 112)
        partition = build_partition(112, s, L2)
        spec = forward_transform(img)
        masked = apply_mask(spec, build_mask(partition, 0))
        # independent route: measure the residue with numpy's own inverse
        raw = np.fft.ifft2(np.fft.ifftshift(masked.coeffs, axes=(0, 1)), axes=(0, 1))
        assert np.abs(raw.imag).max() < 1e-9 * np.abs(raw).max()
        inverse_transform(masked)  # must not raise


class TestBandPartition:
    def test_s8_gives_seven_bands(self):
        partition = build_partition(112, 8, L2)
        assert len(partition.bands) == 7
        assert [(b.lower, b.upper) for b in partition.bands] == [
            (0, 8), (8, 16), (16, 24), (24, 32), (32, 40), (40, 48), (48, 56),
        ]

    def test_s14_gives_four_bands(self):
        assert len(build_partition(112, 14, L2).bands) == 4

    def test_n4_s1_gives_two_bands(self):
        partition = build_partition(4, 1, L2)
        assert [(b.lower, b.upper) for b in partition.bands] == [(0, 1), (1, 2)]

    def test_uneven_split_truncates_last_band(self):
        partition = build_partition(112, 0.75 * 56, L2)  # 42, then 42..56
        assert [(b.lower, b.upper) for b in partition.bands] == [(0, 42), (42, 56)]

    @pytest.mark.parametrize("s", [0, -1, 57, 200])
    def test_invalid_band_size_rejected(self, s):
        with pytest.raises(ParameterError):
            build_partition(112, s, L2)

    def test_odd_n_rejected(self):
        with pytest.raises(ParameterError):
            build_partition(111, 8, L2)

    @pytest.mark.parametrize("norm", [L1, L2])
    @pytest.mark.parametrize("s", ALL_S)
    def test_disjoint_and_exhaustive(self, norm, s):
        partition = build_partition(112, s, norm)
        idx = band_index_map(partition)
        center = 112 // 2
        assert idx[center, center] == -1
        covered = idx >= 0
        assert covered.sum() == 112 * 112 - 1  # everything except DC, exactly once

    def test_band_spec_validation(self):
        with pytest.raises(ParameterError):
            BandSpec(lower=5, upper=5)
        with pytest.raises(ParameterError):
            BandSpec(lower=-1, upper=3)


class TestFrequencyMask:
    def test_n4_first_band_zeroes_the_four_unit_neighbors(self):
        partition = build_partition(4, 1, L2)
        mask = build_mask(partition, 0)
        expected = np.ones((4, 4))
        for k, l in ((1, 2), (3, 2), (2, 1), (2, 3)):
            expected[k, l] = 0.0
        assert np.array_equal(mask.mask, expected)

    @pytest.mark.parametrize("norm", [L1, L2])
    @pytest.mark.parametrize("s", [8, 14])
    def test_zeroed_counts_match_bruteforce(self, norm, s):
        partition = build_partition(112, s, norm)
        last = len(partition.bands) - 1
        for j, band in enumerate(partition.bands):
            mask = build_mask(partition, j)
            upper = None if j == last else band.upper
            assert mask.removed_count() == band_coordinate_count(112, norm, band.lower, upper)

    @pytest.mark.parametrize("norm", [L1, L2])
    @pytest.mark.parametrize("s", ALL_S)
    def test_union_covers_everything_but_dc(self, norm, s):
        partition = build_partition(112, s, norm)
        union = build_union_mask(partition, range(len(partition.bands)))
        assert union.removed_count() == 112 * 112 - 1
        assert union.mask[56, 56] == 1.0

    @pytest.mark.parametrize("norm", [L1, L2])
    @pytest.mark.parametrize("s", ALL_S)
    def test_masks_are_mirror_symmetric(self, norm, s):
        partition = build_partition(112, s, norm)
        perm = (112 - np.arange(112)) % 112
        for j in range(len(partition.bands)):
            m = build_mask(partition, j).mask
            assert np.array_equal(m, m[np.ix_(perm, perm)])

    def test_dc_never_masked(self):
        for s in ALL_S:
            partition = build_partition(112, s, L2)
            for j in range(len(partition.bands)):
                assert build_mask(partition, j).mask[56, 56] == 1.0

    def test_band_index_out_of_range(self):
        partition = build_partition(112, 8, L2)
        with pytest.raises(ParameterError):
            build_mask(partition, 7)


class TestApplyMask:
    def test_identity_mask_is_identity(self):
        rng = np.random.default_rng(2)
        spec = forward_transform(random_image(rng, 16))
        partition = build_partition(16, 2, L2)
        identity = build_union_mask(partition, ())
        out = apply_mask(spec, identity)
        assert np.array_equal(out.coeffs, spec.coeffs)

    def test_all_bands_masked_leaves_dc_only(self):
        rng = np.random.default_rng(4)
        img = random_image(rng, 16)
        partition = build_partition(16, 2, L2)
        union = build_union_mask(partition, range(len(partition.bands)))
        masked = apply_mask(forward_transform(img), union)
        nonzero = np.abs(masked.coeffs) > 0
        assert nonzero.sum() == 3  # one DC entry per channel
        flat = inverse_transform(masked)
        for c in range(3):
            assert np.allclose(flat.pixels[:, :, c], img.pixels[:, :, c].mean(), atol=1e-9)

    def test_input_spectrum_unmodified(self):
        rng = np.random.default_rng(6)
        spec = forward_transform(random_image(rng, 16))
        before = spec.coeffs.copy()
        partition = build_partition(16, 4, L2)
        apply_mask(spec, build_mask(partition, 1))
        assert np.array_equal(spec.coeffs, before)

    def test_dc_coefficient_never_altered(self):
        rng = np.random.default_rng(7)
        spec = forward_transform(random_image(rng, 112))
        partition = build_partition(112, 8, L2)
        for j in range(7):
            out = apply_mask(spec, build_mask(partition, j))
            assert np.array_equal(out.coeffs[56, 56, :], spec.coeffs[56, 56, :])

    def test_shape_mismatch_raises(self):
        rng = np.random.default_rng(8)
        spec = forward_transform(random_image(rng, 16))
        partition = build_partition(112, 8, L2)
        with pytest.raises(DimensionError):
            apply_mask(spec, build_mask(partition, 0))

    def test_parseval_between_spatial_and_spectral_energy(self):
        rng = np.random.default_rng(9)
        img = random_image(rng, 16)
        spatial = float(np.sum(img.pixels**2))
        assert spectral_energy(forward_transform(img)) == pytest.approx(spatial, rel=1e-6)

    def test_parseval_survives_masking(self):
        # energy kept by the mask == spectral energy of the reconstruction
        rng = np.random.default_rng(10)
        img = random_image(rng, 112)
        partition = build_partition(112, 8, L2)
        spec = forward_transform(img)
        masked = apply_mask(spec, build_mask(partition, 3))
        rebuilt = forward_transform(inverse_transform(masked))
        assert spectral_energy(rebuilt) == pytest.approx(spectral_energy(masked), rel=1e-9)


class TestMaskImage:
    def test_identity_mask_reproduces_image(self):
        rng = np.random.default_rng(12)
        img = random_image(rng, 16)
        partition = build_partition(16, 2, L2)
        out = mask_image(img, build_union_mask(partition, ()))
        assert np.abs(out.pixels - img.pixels).max() < 1e-6

    def test_constant_image_untouched_by_any_band(self):
        img = SpatialImage(np.full((16, 16, 1), 200.0))
        partition = build_partition(16, 2, L2)
        for j in range(len(partition.bands)):
            out = mask_image(img, build_mask(partition, j))
            assert np.abs(out.pixels - 200.0).max() < 1e-9

    def test_pure_tone_is_killed_only_by_its_own_band(self):
        n = 16
        # frequency (3, 0) has L2 radius 3 -> band (2, 4] of an s=2 partition
        tone = 40.0 * np.cos(2 * np.pi * 3 * np.arange(n) / n) + 100.0
        img = SpatialImage(np.tile(tone[:, None], (1, n))[:, :, None])
        partition = build_partition(n, 2, L2)
        killed = mask_image(img, build_mask(partition, 1))
        assert np.abs(killed.pixels - 100.0).max() < 1e-9
        for j in (0, 2, 3):
            kept = mask_image(img, build_mask(partition, j))
            assert np.abs(kept.pixels - img.pixels).max() < 1e-6

    def test_band_energy_accounting(self):
        rng = np.random.default_rng(13)
        img = random_image(rng, 112)
        partition = build_partition(112, 14, L2)
        spec = forward_transform(img)
        energies = band_energies(spec, partition)
        dc_energy = 112 * 112 * np.sum(np.abs(spec.coeffs[56, 56, :]) ** 2)
        assert energies.sum() + dc_energy == pytest.approx(spectral_energy(spec), rel=1e-9)


def test_radius_grid_norms_differ():
    r1 = radius_grid(8, L1)
    r2 = radius_grid(8, L2)
    assert r1[0, 0] == 8.0  # |-4| + |-4|
    assert r2[0, 0] == pytest.approx(np.sqrt(32.0))
    assert r1[4, 4] == r2[4, 4] == 0.0
