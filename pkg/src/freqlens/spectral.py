"""Spatial <-> frequency transforms, radial band partitions, and band-stop masks.

Conventions used throughout:

* Images are square N x N with 1 or 3 channels, stored as float arrays.
* The forward transform carries a 1/N^2 factor, so the DC coefficient equals
  the mean pixel intensity of the channel; the inverse transform is the plain
  unnormalized sum. Spectra are kept DC-centered (zero frequency at index
  (N//2, N//2)).
* A frequency band (b, t] collects all coordinates whose centered-coordinate
  norm r satisfies b < r <= t. The DC coordinate (r = 0) is never part of any
  band. The final band of a partition additionally absorbs every coordinate
  with r > N/2 (grid corners under the L2 norm, most off-axis coordinates
  under L1), so a partition always covers the non-DC plane exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DimensionError, ParameterError, SymmetryError

L1 = "l1"
L2 = "l2"
NORMS = (L1, L2)

#: Relative imaginary residue above which a reconstruction is rejected.
SYMMETRY_TOLERANCE = 1e-9


def _as_hwc(pixels: np.ndarray) -> np.ndarray:
    arr = np.asarray(pixels, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, np.newaxis]
    if arr.ndim != 3:
        raise DimensionError(f"expected a 2-D or 3-D pixel array, got ndim={arr.ndim}")
    return arr


@dataclass(frozen=True, eq=False)
class SpatialImage:
    """Square per-channel pixel grid. Values are unbounded reals: reconstructions
    of masked spectra are passed through without clamping."""

    pixels: np.ndarray
    channel_order: str = "RGB"

    def __post_init__(self):
        arr = _as_hwc(self.pixels)
        h, w, c = arr.shape
        if h != w:
            raise DimensionError(f"image must be square, got {h}x{w}")
        if c not in (1, 3):
            raise DimensionError(f"expected 1 or 3 channels, got {c}")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("image contains non-finite pixel values")
        if self.channel_order not in ("RGB", "BGR"):
            raise ParameterError(f"unknown channel order {self.channel_order!r}")
        object.__setattr__(self, "pixels", arr)

    @property
    def n(self) -> int:
        return self.pixels.shape[0]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]


@dataclass(frozen=True, eq=False)
class SpectralImage:
    """Complex spectrum of a SpatialImage, DC-centered at (N//2, N//2)."""

    coeffs: np.ndarray
    centered: bool = True
    channel_order: str = "RGB"

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.ndim == 2:
            arr = arr[:, :, np.newaxis]
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"expected a square N x N x C spectrum, got shape {arr.shape}")
        object.__setattr__(self, "coeffs", arr)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def channels(self) -> int:
        return self.coeffs.shape[2]

    def dc(self, channel: int = 0) -> complex:
        """Zero-frequency coefficient (the channel's mean intensity)."""
        c = self.n // 2
        return complex(self.coeffs[c, c, channel])


@dataclass(frozen=True)
class BandSpec:
    """Radius interval (lower, upper]; lower is exclusive so DC (r=0) is never inside."""

    lower: float
    upper: float
    norm: str = L2

    def __post_init__(self):
        if self.norm not in NORMS:
            raise ParameterError(f"norm must be one of {NORMS}, got {self.norm!r}")
        if self.lower < 0:
            raise ParameterError(f"band lower bound must be >= 0, got {self.lower}")
        if self.upper <= self.lower:
            raise ParameterError(f"band must satisfy lower < upper, got ({self.lower}, {self.upper}]")

    @property
    def size(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class BandPartition:
    """Ordered, disjoint bands covering radii (0, N/2], the last band absorbing r > N/2."""

    bands: tuple[BandSpec, ...]
    n: int
    norm: str

    def __len__(self) -> int:
        return len(self.bands)

    @property
    def nominal_band_size(self) -> float:
        """The band size s the partition was built with (the first band's width)."""
        return self.bands[0].size


@dataclass(frozen=True, eq=False)
class FrequencyMask:
    """Binary keep/remove matrix for one band or a union of bands.

    mask values: 0 = remove, 1 = keep. The DC entry is always 1 and the matrix
    is symmetric under the frequency mirror map, which is what guarantees a
    real-valued reconstruction after masking.
    """

    mask: np.ndarray
    bands: tuple[BandSpec, ...]

    @property
    def n(self) -> int:
        return self.mask.shape[0]

    def removed_count(self) -> int:
        return int(self.mask.size - self.mask.sum())


@lru_cache(maxsize=64)
def radius_grid(n: int, norm: str) -> np.ndarray:
    """Norm of the centered frequency coordinate (k - N/2, l - N/2) for every index."""
    if norm not in NORMS:
        raise ParameterError(f"norm must be one of {NORMS}, got {norm!r}")
    k = np.arange(n, dtype=np.float64) - n // 2
    dk, dl = np.meshgrid(k, k, indexing="ij")
    r = np.abs(dk) + np.abs(dl) if norm == L1 else np.hypot(dk, dl)
    r.setflags(write=False)
    return r


def forward_transform(img: SpatialImage) -> SpectralImage:
    """Transform to the frequency domain (per channel, 1/N^2 scaling, DC centered)."""
    n = img.n
    if n < 2:
        raise DimensionError(f"image side must be >= 2, got {n}")
    coeffs = np.fft.fft2(img.pixels, axes=(0, 1)) / (n * n)
    coeffs = np.fft.fftshift(coeffs, axes=(0, 1))
    return SpectralImage(coeffs, centered=True, channel_order=img.channel_order)


def inverse_transform(spec: SpectralImage) -> SpatialImage:
    """Transform back to the spatial domain and return the real part.

    Raises SymmetryError if the spectrum would reconstruct to meaningfully
    complex pixels (imaginary residue above SYMMETRY_TOLERANCE relative to the
    largest pixel magnitude).
    """
    if not spec.centered:
        raise ParameterError("expected a DC-centered spectrum")
    n = spec.n
    raw = np.fft.ifft2(np.fft.ifftshift(spec.coeffs, axes=(0, 1)), axes=(0, 1)) * (n * n)
    scale = np.abs(raw).max()
    if scale > 0 and np.abs(raw.imag).max() > SYMMETRY_TOLERANCE * scale:
        raise SymmetryError(
            "spectrum is not conjugate-symmetric: imaginary residue "
            f"{np.abs(raw.imag).max():.3e} exceeds {SYMMETRY_TOLERANCE:.0e} x {scale:.3e}"
        )
    return SpatialImage(raw.real, channel_order=spec.channel_order)


def build_partition(n: int, s: float, norm: str = L2) -> BandPartition:
    """Split radii (0, N/2] into ceil((N/2)/s) consecutive bands of width s.

    The last band may be narrower if s does not divide N/2, and it absorbs all
    coordinates with radius > N/2 so the partition is exhaustive.
    """
    if n < 2 or n % 2 != 0:
        raise ParameterError(f"image side must be even and >= 2, got {n}")
    if norm not in NORMS:
        raise ParameterError(f"norm must be one of {NORMS}, got {norm!r}")
    half = n / 2
    if not (0 < s <= half):
        raise ParameterError(f"band size must satisfy 0 < s <= N/2 = {half}, got {s}")
    count = math.ceil(half / s)
    bands = tuple(
        BandSpec(lower=j * s, upper=min((j + 1) * s, half), norm=norm) for j in range(count)
    )
    return BandPartition(bands=bands, n=n, norm=norm)


def band_index_map(partition: BandPartition) -> np.ndarray:
    """Band index for every grid coordinate; -1 marks the DC coordinate."""
    return _band_index_map_cached(partition)


@lru_cache(maxsize=64)
def _band_index_map_cached(partition: BandPartition) -> np.ndarray:
    r = radius_grid(partition.n, partition.norm)
    idx = np.full(r.shape, -1, dtype=np.int64)
    last = len(partition.bands) - 1
    for j, band in enumerate(partition.bands):
        if j == last:
            inside = r > band.lower
        else:
            inside = (r > band.lower) & (r <= band.upper)
        idx[inside] = j
    idx.setflags(write=False)
    return idx


def build_mask(partition: BandPartition, band_index: int) -> FrequencyMask:
    """Band-stop mask removing exactly the coordinates of one band."""
    if not 0 <= band_index < len(partition.bands):
        raise ParameterError(
            f"band index {band_index} out of range for a {len(partition.bands)}-band partition"
        )
    return build_union_mask(partition, (band_index,))


def build_union_mask(partition: BandPartition, band_indices: Iterable[int]) -> FrequencyMask:
    """Band-stop mask removing the union of several bands (empty union = identity)."""
    indices = tuple(sorted(set(int(j) for j in band_indices)))
    for j in indices:
        if not 0 <= j < len(partition.bands):
            raise ParameterError(
                f"band index {j} out of range for a {len(partition.bands)}-band partition"
            )
    mask = _union_mask_values(partition, indices)
    return FrequencyMask(mask=mask, bands=tuple(partition.bands[j] for j in indices))


# single-band masks are reused across every pair; per-pair union masks mostly
# miss, so the cache stays modest (N=112 masks are ~100 KB each)
@lru_cache(maxsize=256)
def _union_mask_values(partition: BandPartition, indices: tuple[int, ...]) -> np.ndarray:
    idx_map = _band_index_map_cached(partition)
    mask = np.ones(idx_map.shape, dtype=np.float64)
    if indices:
        mask[np.isin(idx_map, indices)] = 0.0
    mask.setflags(write=False)
    return mask


def apply_mask(spec: SpectralImage, mask: FrequencyMask) -> SpectralImage:
    """Elementwise product of the spectrum with the mask, per channel."""
    if spec.n != mask.n:
        raise DimensionError(f"spectrum side {spec.n} does not match mask side {mask.n}")
    return SpectralImage(
        spec.coeffs * mask.mask[:, :, np.newaxis],
        centered=spec.centered,
        channel_order=spec.channel_order,
    )


def mask_image(img: SpatialImage, mask: FrequencyMask) -> SpatialImage:
    """Remove a frequency band from an image: forward -> mask -> inverse."""
    return inverse_transform(apply_mask(forward_transform(img), mask))


def spectral_energy(spec: SpectralImage) -> float:
    """Total squared coefficient magnitude, N^2-scaled so it equals the spatial energy."""
    n = spec.n
    return float(n * n * np.sum(np.abs(spec.coeffs) ** 2))


def band_energies(spec: SpectralImage, partition: BandPartition) -> np.ndarray:
    """N^2-scaled spectral energy inside each band (summed over channels)."""
    if spec.n != partition.n:
        raise DimensionError(f"spectrum side {spec.n} does not match partition side {partition.n}")
    idx_map = band_index_map(partition)
    power = np.sum(np.abs(spec.coeffs) ** 2, axis=2)
    out = np.zeros(len(partition.bands))
    for j in range(len(partition.bands)):
        out[j] = power[idx_map == j].sum()
    return out * (spec.n * spec.n)
