"""Embedding backends and the cosine similarity they are compared with.

Two deterministic analytic backends live here: a spectral toy embedder whose
band support is known exactly (the oracle for influence tests) and a seeded
random-projection embedder for smoke tests. The loader for externally trained
models is in modelio.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEmbeddingError, DimensionError, ParameterError
from .imaging import bilinear_resize
from .spectral import BandPartition, SpatialImage, band_index_map, forward_transform


@dataclass(frozen=True, eq=False)
class Embedding:
    """Feature vector produced by a backend for one image."""

    values: np.ndarray
    model_id: str

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64).ravel()
        if arr.size < 1:
            raise DimensionError("embedding must have dimension >= 1")
        if not np.all(np.isfinite(arr)):
            raise ParameterError("embedding contains non-finite values")
        object.__setattr__(self, "values", arr)

    @property
    def dim(self) -> int:
        return self.values.size

    def is_zero(self) -> bool:
        return not np.any(self.values)


def cosine_similarity(a: Embedding, b: Embedding) -> float:
    """Cosine of the angle between two embeddings, clipped to [-1, 1].

    Raises DegenerateEmbeddingError for zero vectors rather than returning NaN.
    """
    if a.dim != b.dim:
        raise DimensionError(f"embedding dimensions differ: {a.dim} vs {b.dim}")
    na = np.linalg.norm(a.values)
    nb = np.linalg.norm(b.values)
    if na == 0.0 or nb == 0.0:
        raise DegenerateEmbeddingError(
            f"cannot compare degenerate (zero) embeddings from {a.model_id!r}/{b.model_id!r}"
        )
    return float(np.clip(np.dot(a.values, b.values) / (na * nb), -1.0, 1.0))


@dataclass(frozen=True)
class PreprocessConfig:
    """Affine pixel normalization applied before a network forward pass.

    Default matches the common face-model convention: value/255 - 0.5, then
    divided by 0.5, i.e. (v - 127.5) / 127.5 per channel.
    """

    expected_size: int = 112
    channel_order: str = "RGB"
    mean: tuple[float, ...] = (127.5, 127.5, 127.5)
    std: tuple[float, ...] = (127.5, 127.5, 127.5)
    resize_policy: str = "error"

    def __post_init__(self):
        if any(s == 0 for s in self.std):
            raise ParameterError("preprocess std must be nonzero")
        if self.channel_order not in ("RGB", "BGR"):
            raise ParameterError(f"unknown channel order {self.channel_order!r}")


def preprocess(img: SpatialImage, cfg: PreprocessConfig) -> np.ndarray:
    """Normalize to a C x H x W float32 tensor in the backend's channel order.

    Masked reconstructions may carry values outside [0, 255]; they pass through
    the same affine map unclamped.
    """
    arr = img.pixels
    if img.n != cfg.expected_size:
        if cfg.resize_policy == "bilinear":
            arr = bilinear_resize(arr, cfg.expected_size, cfg.expected_size)
        else:
            raise DimensionError(
                f"backend expects {cfg.expected_size}x{cfg.expected_size} input, got {img.n}x{img.n}"
            )
    if arr.shape[2] == 3 and img.channel_order != cfg.channel_order:
        arr = arr[:, :, ::-1]
    mean = np.asarray(cfg.mean[: arr.shape[2]])
    std = np.asarray(cfg.std[: arr.shape[2]])
    return ((arr - mean) / std).transpose(2, 0, 1).astype(np.float32)


class EmbeddingBackend:
    """Deterministic map from a SpatialImage to an Embedding.

    Subclasses set model_id, dim and parallel_safe; parallel_safe=False makes
    the evaluation layer serialize calls to this backend.
    """

    model_id: str = "backend"
    dim: int = 0
    parallel_safe: bool = True

    def embed(self, img: SpatialImage) -> Embedding:
        raise NotImplementedError


class SpectralToyEmbedder(EmbeddingBackend):
    """Reads coefficient magnitudes of a known set of frequency bands.

    The embedding is the per-channel concatenation of |F(k,l)| over all
    coordinates whose band index is in the supported set, rounded to a fixed
    decimal grid and L2-normalized. The rounding step is what makes the
    backend exactly blind to every other band: the numerical noise a
    mask -> reconstruct round trip adds at supported coordinates (~1e-13) is
    absorbed by the grid, so masking an unsupported band leaves the embedding
    bit-for-bit unchanged whenever the image's coefficient magnitudes keep a
    sane distance from the grid boundaries.
    """

    def __init__(self, supported_bands: frozenset[int], partition: BandPartition, decimals: int = 2):
        if not supported_bands:
            raise ParameterError("supported band set must not be empty")
        bad = [j for j in supported_bands if not 0 <= j < len(partition.bands)]
        if bad:
            raise ParameterError(f"band indices {bad} out of range for {len(partition.bands)} bands")
        self.supported_bands = frozenset(int(j) for j in supported_bands)
        self.partition = partition
        self.decimals = decimals
        self._select = np.isin(band_index_map(partition), sorted(self.supported_bands))
        self.coords_per_channel = int(self._select.sum())
        self.dim = self.coords_per_channel  # times the channel count once images are seen
        self.model_id = f"toy[{','.join(str(j) for j in sorted(self.supported_bands))}]"

    def embed(self, img: SpatialImage) -> Embedding:
        if img.n != self.partition.n:
            raise DimensionError(f"toy backend built for N={self.partition.n}, got N={img.n}")
        mags = np.abs(forward_transform(img).coeffs[self._select, :])
        values = np.round(mags.T.ravel(), self.decimals)
        self.dim = values.size
        norm = np.linalg.norm(values)
        if norm > 0:
            values = values / norm
        return Embedding(values, self.model_id)


def spectral_toy_embedder(
    supported_radii: set[int] | frozenset[int],
    partition: BandPartition,
    decimals: int = 2,
) -> SpectralToyEmbedder:
    """Backend that reads exactly the given bands of the given partition."""
    return SpectralToyEmbedder(frozenset(supported_radii), partition, decimals)


class SeededProjectionEmbedder(EmbeddingBackend):
    """Fixed random linear map of the flattened preprocessed image, L2-normalized."""

    def __init__(self, seed: int, d: int, cfg: PreprocessConfig | None = None):
        if d < 2:
            raise ParameterError(f"projection dimension must be >= 2, got {d}")
        self.seed = int(seed)
        self.dim = int(d)
        self.cfg = cfg  # None: adopt the first image's size and channel order
        self.model_id = f"projection[seed={self.seed},d={self.dim}]"
        self._matrix: np.ndarray | None = None
        self._init_lock = threading.Lock()

    def _map(self, n_features: int) -> np.ndarray:
        with self._init_lock:
            if self._matrix is None:
                rng = np.random.default_rng(self.seed)
                self._matrix = rng.standard_normal((self.dim, n_features)) / np.sqrt(n_features)
        if self._matrix.shape[1] != n_features:
            raise DimensionError(
                f"projection map built for {self._matrix.shape[1]} features, got {n_features}"
            )
        return self._matrix

    def embed(self, img: SpatialImage) -> Embedding:
        with self._init_lock:
            if self.cfg is None:
                self.cfg = PreprocessConfig(expected_size=img.n, channel_order=img.channel_order)
        x = preprocess(img, self.cfg).ravel().astype(np.float64)
        values = self._map(x.size) @ x
        norm = np.linalg.norm(values)
        if norm > 0:
            values = values / norm
        return Embedding(values, self.model_id)


def seeded_projection_embedder(seed: int, d: int, cfg: PreprocessConfig | None = None) -> SeededProjectionEmbedder:
    """Smoke-test backend: identical seed gives an identical map."""
    return SeededProjectionEmbedder(seed, d, cfg)
