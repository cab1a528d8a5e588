"""Frequency-band influence explanations for embedding-based face verification.

The pipeline: transform an image pair to the frequency domain, remove one
radial band at a time from both images, re-embed, and read how much each band
moved the pair's cosine similarity. Normalized per-band influences form
frequency heat plots; insertion/deletion curves against random-order baselines
quantify whether those influences are faithful.
"""

from .embedders import (
    Embedding,
    EmbeddingBackend,
    PreprocessConfig,
    cosine_similarity,
    preprocess,
    seeded_projection_embedder,
    spectral_toy_embedder,
)
from .errors import (
    DegenerateEmbeddingError,
    DegenerateProfileError,
    DimensionError,
    FreqlensError,
    ManifestError,
    MetricError,
    ModelFileError,
    ParameterError,
    SymmetryError,
)
from .evaluation import (
    DELETION,
    EER,
    FNMR,
    INSERTION,
    EvalCurve,
    ScoreSet,
    VerificationPair,
    compute_eer,
    compute_profiles,
    curve_auc,
    curves_to_csv,
    fmr_at,
    fnmr_at,
    run_curve,
    run_manifest,
    threshold_at_fmr,
)
from .imaging import (
    GENUINE,
    IMPOSTER,
    PairRecord,
    bilinear_resize,
    degrade_resolution,
    load_image,
    read_manifest,
    save_image,
)
from .influence import (
    AggregateProfile,
    InfluenceProfile,
    aggregate_profiles,
    influence_ordering,
    pair_influence,
)
from .spectral import (
    L1,
    L2,
    BandPartition,
    BandSpec,
    FrequencyMask,
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

__version__ = "0.1.0"

__all__ = [
    "AggregateProfile",
    "BandPartition",
    "BandSpec",
    "DegenerateEmbeddingError",
    "DegenerateProfileError",
    "DELETION",
    "DimensionError",
    "EER",
    "Embedding",
    "EmbeddingBackend",
    "EvalCurve",
    "FNMR",
    "FreqlensError",
    "FrequencyMask",
    "GENUINE",
    "IMPOSTER",
    "INSERTION",
    "InfluenceProfile",
    "L1",
    "L2",
    "ManifestError",
    "MetricError",
    "ModelFileError",
    "PairRecord",
    "ParameterError",
    "PreprocessConfig",
    "ScoreSet",
    "SpatialImage",
    "SpectralImage",
    "SymmetryError",
    "VerificationPair",
    "aggregate_profiles",
    "apply_mask",
    "band_energies",
    "band_index_map",
    "bilinear_resize",
    "build_mask",
    "build_partition",
    "build_union_mask",
    "compute_eer",
    "compute_profiles",
    "cosine_similarity",
    "curve_auc",
    "curves_to_csv",
    "degrade_resolution",
    "fmr_at",
    "fnmr_at",
    "forward_transform",
    "influence_ordering",
    "inverse_transform",
    "load_image",
    "mask_image",
    "pair_influence",
    "preprocess",
    "radius_grid",
    "read_manifest",
    "run_curve",
    "run_manifest",
    "save_image",
    "seeded_projection_embedder",
    "spectral_energy",
    "spectral_toy_embedder",
    "threshold_at_fmr",
]
