"""Per-band influence profiles for image pairs and dataset-level aggregates.

The influence of a band on a verification decision is the change in the pair's
cosine similarity when that band is removed from both images. Profiles come in
two normalized flavors: absolute (magnitudes summing to 1) and directed
(signs kept, magnitudes summing to 1), sharing the same denominator so the two
plots are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedders import EmbeddingBackend, cosine_similarity
from .errors import (
    DegenerateEmbeddingError,
    DegenerateProfileError,
    DimensionError,
    ParameterError,
)
from .spectral import (
    BandPartition,
    SpatialImage,
    apply_mask,
    build_mask,
    forward_transform,
    inverse_transform,
)

#: Below this total delta mass a profile is considered degenerate.
DEGENERATE_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class InfluenceProfile:
    """Per-band influence of removing each frequency band from an image pair."""

    partition: BandPartition
    model_id: str
    reference_score: float
    raw_deltas: np.ndarray
    absolute: np.ndarray
    directed: np.ndarray
    degenerate: bool

    def __len__(self) -> int:
        return len(self.partition.bands)

    def to_dict(self) -> dict:
        """JSON-ready form (the FHP wire format consumed by the CLI)."""
        return {
            "model_id": self.model_id,
            "norm": self.partition.norm,
            "band_size": self.partition.nominal_band_size,
            "bands": [{"b": band.lower, "t": band.upper} for band in self.partition.bands],
            "reference_score": self.reference_score,
            "absolute": list(self.absolute),
            "directed": list(self.directed),
            "degenerate": self.degenerate,
        }


@dataclass(frozen=True, eq=False)
class AggregateProfile:
    """Mean and population standard deviation of influence values across pairs."""

    partition: BandPartition
    model_id: str
    mode: str
    mean: np.ndarray
    std: np.ndarray
    count: int

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "norm": self.partition.norm,
            "band_size": self.partition.nominal_band_size,
            "mode": self.mode,
            "count": self.count,
            "bands": [{"b": band.lower, "t": band.upper} for band in self.partition.bands],
            "mean": list(self.mean),
            "std": list(self.std),
        }


def _normalize(raw_deltas: np.ndarray) -> tuple[np.ndarray, np.ndarray, bool]:
    total = float(np.sum(np.abs(raw_deltas)))
    if total < DEGENERATE_EPS:
        zeros = np.zeros_like(raw_deltas)
        return zeros, zeros.copy(), True
    return np.abs(raw_deltas) / total, raw_deltas / total, False


def pair_influence(
    img_a: SpatialImage,
    img_b: SpatialImage,
    backend: EmbeddingBackend,
    partition: BandPartition,
) -> InfluenceProfile:
    """Mask every band of the partition on both images and record the score shifts.

    The reference score comes from the unaltered pair; for band j the delta is
    cs_j - cs_ref, so a negative value means removing the band hurt the match.
    Both images always receive the same mask.

    A degenerate embedding of the unaltered pair propagates as an error. If a
    masked pair embeds to zero (the mask removed everything the backend can
    see), that step's score is 0: no identity information remains.
    """
    if img_a.n != partition.n or img_b.n != partition.n:
        raise DimensionError(
            f"pair sizes ({img_a.n}, {img_b.n}) do not match partition N={partition.n}"
        )
    cs_ref = cosine_similarity(backend.embed(img_a), backend.embed(img_b))
    spec_a = forward_transform(img_a)
    spec_b = forward_transform(img_b)
    deltas = np.zeros(len(partition.bands))
    for j in range(len(partition.bands)):
        mask = build_mask(partition, j)
        masked_a = inverse_transform(apply_mask(spec_a, mask))
        masked_b = inverse_transform(apply_mask(spec_b, mask))
        try:
            cs_j = cosine_similarity(backend.embed(masked_a), backend.embed(masked_b))
        except DegenerateEmbeddingError:
            cs_j = 0.0
        deltas[j] = cs_j - cs_ref
    absolute, directed, degenerate = _normalize(deltas)
    return InfluenceProfile(
        partition=partition,
        model_id=backend.model_id,
        reference_score=cs_ref,
        raw_deltas=deltas,
        absolute=absolute,
        directed=directed,
        degenerate=degenerate,
    )


def influence_ordering(profile: InfluenceProfile) -> list[int]:
    """Band indices from highest to lowest absolute influence.

    Ties break toward the lower band index so the ordering is deterministic.
    """
    if profile.degenerate:
        raise DegenerateProfileError("cannot order bands of a degenerate (all-zero) profile")
    return sorted(range(len(profile)), key=lambda j: (-profile.absolute[j], j))


def aggregate_profiles(profiles: list[InfluenceProfile], mode: str = "absolute") -> AggregateProfile:
    """Per-band mean and population std of the selected mode across profiles.

    All profiles must share one partition; degenerate profiles must be
    filtered out by the caller beforehand.
    """
    if mode not in ("absolute", "directed"):
        raise ParameterError(f"mode must be 'absolute' or 'directed', got {mode!r}")
    if not profiles:
        raise ParameterError("cannot aggregate an empty profile list")
    partition = profiles[0].partition
    for p in profiles:
        if p.partition != partition:
            raise ParameterError("profiles mix different band partitions")
        if p.degenerate:
            raise DegenerateProfileError("degenerate profile passed to aggregate_profiles")
    stack = np.stack([getattr(p, mode) for p in profiles])
    return AggregateProfile(
        partition=partition,
        model_id=profiles[0].model_id,
        mode=mode,
        mean=stack.mean(axis=0),
        std=stack.std(axis=0),
        count=len(profiles),
    )
