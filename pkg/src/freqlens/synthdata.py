"""Seeded synthetic images and verification corpora for tests, selftest and demos.

The lattice generators build images from conjugate-symmetric spectra whose
coefficient magnitudes sit on a coarse grid (multiples of `step`). A
reconstruct/re-transform round trip perturbs coefficients by ~1e-13, while the
spectral toy embedder rounds magnitudes to 1e-2, so on lattice images the toy
backend's band blindness is exact by a margin of ten orders of magnitude
rather than by luck.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .evaluation import VerificationPair
from .imaging import GENUINE, IMPOSTER
from .spectral import (
    BandPartition,
    SpatialImage,
    SpectralImage,
    band_index_map,
    inverse_transform,
)


def constant_image(value: float, n: int, channels: int = 3) -> SpatialImage:
    return SpatialImage(np.full((n, n, channels), float(value)))


def _mirror_perm(n: int) -> np.ndarray:
    return (n - np.arange(n)) % n


def _half_plane(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(canonical, self_mirror) index masks under the frequency mirror map."""
    perm = _mirror_perm(n)
    k, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    mk, ml = perm[k], perm[l]
    canonical = (k < mk) | ((k == mk) & (l < ml))
    self_mirror = (k == mk) & (l == ml)
    return canonical, self_mirror


def lattice_spectrum(
    rng: np.random.Generator,
    partition: BandPartition,
    bands: set[int] | frozenset[int] | None = None,
    channels: int = 3,
    step: float = 0.25,
    max_level: int = 8,
    dc: float = 128.0,
    min_level: int = 1,
    fill: float = 1.0,
) -> SpectralImage:
    """Conjugate-symmetric spectrum with magnitudes on the `step` lattice.

    Energy is placed on the selected bands (default: all bands of the
    partition); everything else is zero except the DC value. `fill` < 1 keeps
    only a mirror-symmetric random subset of the band coordinates, which is
    how sparse, distinguishable spectral signatures are built.
    """
    if not 1 <= min_level <= max_level:
        raise ParameterError("levels must satisfy 1 <= min_level <= max_level")
    if not 0 < fill <= 1:
        raise ParameterError(f"fill must lie in (0, 1], got {fill}")
    n = partition.n
    idx_map = band_index_map(partition)
    selected = sorted(bands) if bands is not None else list(range(len(partition.bands)))
    in_bands = np.isin(idx_map, selected)
    if fill < 1.0:
        in_bands = in_bands & _symmetric_choice(rng, n, fill)
    canonical, self_mirror = _half_plane(n)
    perm = _mirror_perm(n)
    coeffs = np.zeros((n, n, channels), dtype=np.complex128)
    for c in range(channels):
        mags = step * rng.integers(min_level, max_level + 1, size=(n, n)).astype(np.float64)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=(n, n))
        g = np.where(in_bands & canonical, mags * np.exp(1j * phases), 0.0)
        g = g + np.conj(g[np.ix_(perm, perm)])
        signs = np.where(rng.uniform(size=(n, n)) < 0.5, -1.0, 1.0)
        sm = self_mirror & in_bands
        g[sm] = (mags * signs)[sm]
        coeffs[:, :, c] = g
    center = n // 2
    coeffs[center, center, :] = dc
    return SpectralImage(coeffs, centered=True)


def lattice_image(rng: np.random.Generator, partition: BandPartition, **kwargs) -> SpatialImage:
    """Real image whose spectrum magnitudes sit exactly on the lattice."""
    return inverse_transform(lattice_spectrum(rng, partition, **kwargs))


def _symmetric_choice(rng: np.random.Generator, n: int, p_first: float) -> np.ndarray:
    """Mirror-symmetric boolean grid: True picks the first source spectrum."""
    perm = _mirror_perm(n)
    canonical, self_mirror = _half_plane(n)
    u = rng.uniform(size=(n, n))
    u = np.where(canonical | self_mirror, u, u[np.ix_(perm, perm)])
    return u < p_first


def mixed_spectrum(
    rng: np.random.Generator, base: SpectralImage, other: SpectralImage, keep: float
) -> SpectralImage:
    """Coordinate-wise mix of two symmetric spectra; symmetry and lattice survive."""
    pick = _symmetric_choice(rng, base.n, keep)[:, :, np.newaxis]
    return SpectralImage(np.where(pick, base.coeffs, other.coeffs), centered=True)


def lattice_pair(
    seed: int,
    partition: BandPartition,
    bands: set[int] | None = None,
    channels: int = 3,
    correlation: float = 0.85,
    step: float = 0.25,
    max_level: int = 8,
) -> tuple[SpatialImage, SpatialImage]:
    """Two correlated lattice images sharing `correlation` of their spectrum."""
    rng = np.random.default_rng(seed)
    base = lattice_spectrum(rng, partition, bands, channels, step, max_level)
    noise_a = lattice_spectrum(rng, partition, bands, channels, step, max_level)
    noise_b = lattice_spectrum(rng, partition, bands, channels, step, max_level)
    spec_a = mixed_spectrum(rng, base, noise_a, correlation)
    spec_b = mixed_spectrum(rng, base, noise_b, correlation)
    return inverse_transform(spec_a), inverse_transform(spec_b)


def make_identity_corpus(
    seed: int,
    partition: BandPartition,
    n_genuine: int,
    n_imposter: int,
    channels: int = 1,
    signature_level: int = 16,
    noise_level: int = 8,
    signature_fill: float = 0.35,
    noise_fill: float = 0.35,
    variation: float = 0.9,
    step: float = 0.25,
) -> list[VerificationPair]:
    """Synthetic verification corpus with band-localized identity signatures.

    Each identity owns a home band carrying a strong sparse spectral
    signature; the remaining bands hold independent sparse noise. Genuine
    pairs share one identity's signature (up to a small variation), imposter
    pairs come from independent identities, so the information separating the
    classes is concentrated in pair-specific bands. This is the regime in
    which a faithful influence estimate must beat random band orderings on
    insertion/deletion curves.
    """
    rng = np.random.default_rng(seed)
    n_bands = len(partition.bands)
    pairs: list[VerificationPair] = []

    def signature(home: int) -> SpectralImage:
        return lattice_spectrum(
            rng, partition, {home}, channels, step,
            max_level=signature_level, min_level=signature_level // 2,
            fill=signature_fill, dc=128.0,
        )

    def noise(exclude: int) -> SpectralImage:
        return lattice_spectrum(
            rng, partition, set(range(n_bands)) - {exclude}, channels, step,
            max_level=noise_level, fill=noise_fill, dc=0.0,
        )

    def compose(sig: SpectralImage, home: int) -> SpatialImage:
        # signature and noise occupy disjoint coordinates, so magnitudes stay
        # on the lattice after the addition
        return inverse_transform(
            SpectralImage(sig.coeffs + noise(home).coeffs, centered=True)
        )

    for _ in range(n_genuine):
        home = int(rng.integers(0, n_bands))
        base = signature(home)
        var_a = mixed_spectrum(rng, base, signature(home), variation)
        var_b = mixed_spectrum(rng, base, signature(home), variation)
        pairs.append(VerificationPair(compose(var_a, home), compose(var_b, home), GENUINE))
    for _ in range(n_imposter):
        home_a = int(rng.integers(0, n_bands))
        home_b = int(rng.integers(0, n_bands))
        pairs.append(
            VerificationPair(
                compose(signature(home_a), home_a),
                compose(signature(home_b), home_b),
                IMPOSTER,
            )
        )
    return pairs


def smooth_noise_image(
    rng: np.random.Generator, n: int, channels: int = 3, alpha: float = 1.0, scale: float = 40.0
) -> SpatialImage:
    """Natural-looking random image with a 1/f^alpha decaying spectrum."""
    from .spectral import L2, radius_grid  # local import to keep module load light

    r = radius_grid(n, L2)
    falloff = scale / (1.0 + r) ** alpha
    perm = _mirror_perm(n)
    canonical, self_mirror = _half_plane(n)
    coeffs = np.zeros((n, n, channels), dtype=np.complex128)
    for c in range(channels):
        re = rng.standard_normal((n, n))
        im = rng.standard_normal((n, n))
        g = np.where(canonical, (re + 1j * im) * falloff, 0.0)
        g = g + np.conj(g[np.ix_(perm, perm)])
        g[self_mirror] = (re * falloff)[self_mirror]
        coeffs[:, :, c] = g
    center = n // 2
    coeffs[center, center, :] = 128.0
    return inverse_transform(SpectralImage(coeffs, centered=True))


def smooth_noise_pair(
    seed: int, n: int, channels: int = 3, correlation: float = 0.8, alpha: float = 1.0
) -> tuple[SpatialImage, SpatialImage]:
    """Correlated pair of smooth noise images (pixel-space blend)."""
    rng = np.random.default_rng(seed)
    base = smooth_noise_image(rng, n, channels, alpha)
    ind_a = smooth_noise_image(rng, n, channels, alpha)
    ind_b = smooth_noise_image(rng, n, channels, alpha)
    w = correlation
    mix_a = SpatialImage(w * base.pixels + (1 - w) * ind_a.pixels)
    mix_b = SpatialImage(w * base.pixels + (1 - w) * ind_b.pixels)
    return mix_a, mix_b
