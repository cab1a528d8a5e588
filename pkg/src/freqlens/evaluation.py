"""Verification metrics and the adapted insertion/deletion curve protocol.

Curves progressively remove (deletion) or restore (insertion) frequency bands
in each pair's own influence order and track a verification metric over the
whole score set. Random per-pair band orders with the same band size serve as
the unaware baseline; a clearly faster-degrading deletion curve (or
faster-recovering insertion curve) than the baseline means the influence
estimates captured information the model actually uses.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .embedders import EmbeddingBackend, cosine_similarity
from .errors import DegenerateEmbeddingError, MetricError, ParameterError
from .imaging import GENUINE, IMPOSTER
from .influence import InfluenceProfile, influence_ordering, pair_influence
from .serialize import format_float
from .spectral import (
    BandPartition,
    SpatialImage,
    apply_mask,
    build_union_mask,
    forward_transform,
    inverse_transform,
)

DELETION = "deletion"
INSERTION = "insertion"
EER = "eer"
FNMR = "fnmr"

CSV_HEADER = "fraction,metric_value,ordering,seed"


@dataclass(frozen=True, eq=False)
class ScoreSet:
    """Genuine and imposter comparison scores."""

    genuine: np.ndarray
    imposter: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "genuine", np.asarray(self.genuine, dtype=np.float64).ravel())
        object.__setattr__(self, "imposter", np.asarray(self.imposter, dtype=np.float64).ravel())


@dataclass(frozen=True, eq=False)
class VerificationPair:
    """An in-memory image pair with its ground-truth label."""

    img_a: SpatialImage
    img_b: SpatialImage
    label: str
    tag: str | None = None

    def __post_init__(self):
        if self.label not in (GENUINE, IMPOSTER):
            raise ParameterError(f"label must be genuine or imposter, got {self.label!r}")


@dataclass(frozen=True, eq=False)
class EvalCurve:
    """Metric value as a function of the fraction of bands processed."""

    direction: str
    metric: str
    points: tuple[tuple[float, float], ...]
    band_size: float
    norm: str
    ordering: str
    seed: int | None
    threshold: float | None
    n_pairs: int
    n_degenerate: int

    def fractions(self) -> np.ndarray:
        return np.array([f for f, _ in self.points])

    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points])


def fmr_at(scores: ScoreSet, tau: float) -> float:
    """False match rate: fraction of imposter scores >= tau."""
    if scores.imposter.size == 0:
        raise MetricError("FMR needs at least one imposter score")
    return float(np.count_nonzero(scores.imposter >= tau) / scores.imposter.size)


def fnmr_at(scores: ScoreSet, tau: float) -> float:
    """False non-match rate: fraction of genuine scores < tau."""
    if scores.genuine.size == 0:
        raise MetricError("FNMR needs at least one genuine score")
    return float(np.count_nonzero(scores.genuine < tau) / scores.genuine.size)


def _candidate_thresholds(scores: ScoreSet) -> np.ndarray:
    pool = np.unique(np.concatenate([scores.genuine, scores.imposter]))
    mids = (pool[:-1] + pool[1:]) / 2.0
    return np.concatenate([[pool[0] - 1.0], mids, [pool[-1] + 1.0]])


def compute_eer(scores: ScoreSet) -> tuple[float, float]:
    """Equal error rate and its operating threshold.

    Sweeps the midpoints of the sorted unique scores (plus sentinels below and
    above every score), picks the threshold minimizing |FMR - FNMR| (smallest
    such threshold on ties), and reports the mean of the two rates there.
    """
    if scores.genuine.size == 0 or scores.imposter.size == 0:
        raise MetricError("EER needs both genuine and imposter scores")
    taus = _candidate_thresholds(scores)
    gen = np.sort(scores.genuine)
    imp = np.sort(scores.imposter)
    fnmr = np.searchsorted(gen, taus, side="left") / gen.size
    fmr = (imp.size - np.searchsorted(imp, taus, side="left")) / imp.size
    best = int(np.argmin(np.abs(fmr - fnmr)))
    return float((fmr[best] + fnmr[best]) / 2.0), float(taus[best])


def threshold_at_fmr(scores: ScoreSet, target_fmr: float) -> float:
    """Smallest threshold whose FMR does not exceed the target.

    On finite samples this is the float just above the (k+1)-th largest
    imposter score, where k is the largest match count with k/M <= target.
    """
    if not 0 < target_fmr < 1:
        raise ParameterError(f"target FMR must lie in (0, 1), got {target_fmr}")
    if scores.imposter.size == 0:
        raise MetricError("threshold_at_fmr needs at least one imposter score")
    m = scores.imposter.size
    allowed = np.flatnonzero(np.arange(m + 1) / m <= target_fmr)
    k = int(allowed[-1])
    desc = np.sort(scores.imposter)[::-1]
    return float(np.nextafter(desc[k], np.inf))


def curve_auc(curve: EvalCurve) -> float:
    """Trapezoidal area under the (fraction, value) points."""
    if len(curve.points) < 2:
        raise MetricError("AUC needs at least two curve points")
    return float(np.trapezoid(curve.values(), curve.fractions()))


def _pmap(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _unaltered_score(pair: VerificationPair, backend: EmbeddingBackend) -> float:
    return cosine_similarity(backend.embed(pair.img_a), backend.embed(pair.img_b))


def compute_profiles(
    pairs: Sequence[VerificationPair],
    backend: EmbeddingBackend,
    partition: BandPartition,
    jobs: int = 1,
) -> list[InfluenceProfile]:
    """Influence profile per pair, fanned out across workers when allowed."""
    jobs = max(1, jobs) if backend.parallel_safe else 1
    return _pmap(
        lambda p: pair_influence(p.img_a, p.img_b, backend, partition), pairs, jobs
    )


def _step_scores(
    pair: VerificationPair,
    backend: EmbeddingBackend,
    partition: BandPartition,
    order: Sequence[int],
    ref_score: float,
    direction: str,
) -> np.ndarray:
    """Pair scores at every curve step. Steps whose mask removes everything the
    backend can see produce zero embeddings; such a pair carries no identity
    information anymore and scores 0."""
    n_bands = len(partition.bands)
    spec_a = forward_transform(pair.img_a)
    spec_b = forward_transform(pair.img_b)
    out = np.zeros(n_bands + 1)
    for j in range(n_bands + 1):
        removed = list(order[:j]) if direction == DELETION else list(order[j:])
        if not removed:
            out[j] = ref_score
            continue
        mask = build_union_mask(partition, removed)
        try:
            ea = backend.embed(inverse_transform(apply_mask(spec_a, mask)))
            eb = backend.embed(inverse_transform(apply_mask(spec_b, mask)))
            out[j] = cosine_similarity(ea, eb)
        except DegenerateEmbeddingError:
            out[j] = 0.0
    return out


def run_curve(
    pairs: Sequence[VerificationPair],
    backend: EmbeddingBackend,
    partition: BandPartition,
    direction: str,
    metric: str,
    ordering: str = "influence",
    *,
    master_seed: int | None = None,
    target_fmr: float = 0.1,
    profiles: Sequence[InfluenceProfile] | None = None,
    jobs: int = 1,
) -> EvalCurve:
    """Evaluate one insertion or deletion curve over a pair corpus.

    Band orderings are per pair: the pair's own influence ranking, or an
    independent seeded shuffle (stream derived from (master_seed, pair index),
    so results do not depend on scheduling). Pairs with degenerate influence
    profiles are dropped from influence-ordered curves with a warning; random
    baselines keep every pair. The FNMR scenario freezes its threshold on the
    full unaltered score set before any masking.
    """
    if direction not in (DELETION, INSERTION):
        raise ParameterError(f"direction must be deletion or insertion, got {direction!r}")
    if metric not in (EER, FNMR):
        raise ParameterError(f"metric must be eer or fnmr, got {metric!r}")
    if ordering not in ("influence", "random"):
        raise ParameterError(f"ordering must be influence or random, got {ordering!r}")
    if ordering == "random" and master_seed is None:
        raise ParameterError("random ordering needs a master_seed")
    if not pairs:
        raise MetricError("cannot evaluate a curve on an empty pair list")
    labels = [p.label for p in pairs]
    if GENUINE not in labels or IMPOSTER not in labels:
        raise MetricError("curve evaluation needs at least one genuine and one imposter pair")
    jobs = max(1, jobs) if backend.parallel_safe else 1
    n_bands = len(partition.bands)

    ref_scores = _pmap(lambda p: _unaltered_score(p, backend), pairs, jobs)
    full_set = _split(pairs, ref_scores)
    tau = threshold_at_fmr(full_set, target_fmr) if metric == FNMR else None

    if ordering == "influence":
        if profiles is None:
            profiles = _pmap(
                lambda p: pair_influence(p.img_a, p.img_b, backend, partition), pairs, jobs
            )
        elif len(profiles) != len(pairs):
            raise ParameterError("profiles must align one-to-one with pairs")
        kept = [i for i, prof in enumerate(profiles) if not prof.degenerate]
        n_degenerate = len(pairs) - len(kept)
        if n_degenerate:
            warnings.warn(f"{n_degenerate} pair(s) with degenerate profiles dropped from curve")
        orders = {i: influence_ordering(profiles[i]) for i in kept}
        seed = None
    else:
        kept = list(range(len(pairs)))
        n_degenerate = 0
        orders = {
            i: list(np.random.default_rng([master_seed, i]).permutation(n_bands)) for i in kept
        }
        seed = master_seed

    kept_pairs = [pairs[i] for i in kept]
    if not kept_pairs:
        raise MetricError("every pair was dropped as degenerate; no curve to evaluate")
    kept_labels = [p.label for p in kept_pairs]
    if GENUINE not in kept_labels or IMPOSTER not in kept_labels:
        raise MetricError("degenerate-profile drops removed an entire label class")

    rows = _pmap(
        lambda i: _step_scores(pairs[i], backend, partition, orders[i], ref_scores[i], direction),
        kept,
        jobs,
    )
    matrix = np.stack(rows)  # pairs x steps

    points = []
    for j in range(n_bands + 1):
        step_set = _split(kept_pairs, matrix[:, j])
        value = compute_eer(step_set)[0] if metric == EER else fnmr_at(step_set, tau)
        points.append((j / n_bands, value))

    return EvalCurve(
        direction=direction,
        metric=metric,
        points=tuple(points),
        band_size=partition.nominal_band_size,
        norm=partition.norm,
        ordering=ordering,
        seed=seed,
        threshold=tau,
        n_pairs=len(kept_pairs),
        n_degenerate=n_degenerate,
    )


def _split(pairs: Sequence[VerificationPair], scores) -> ScoreSet:
    scores = np.asarray(scores, dtype=np.float64)
    is_genuine = np.array([p.label == GENUINE for p in pairs])
    return ScoreSet(genuine=scores[is_genuine], imposter=scores[~is_genuine])


def curves_to_csv(curves: Sequence[EvalCurve]) -> str:
    """All curves of a run in one CSV (the influence curve first by convention)."""
    lines = [CSV_HEADER]
    for curve in curves:
        seed = "" if curve.seed is None else str(curve.seed)
        for f, v in curve.points:
            lines.append(f"{format_float(f)},{format_float(v)},{curve.ordering},{seed}")
    return "\n".join(lines) + "\n"


def run_manifest(
    curve: EvalCurve,
    model_id: str,
    target_fmr: float | None,
    master_seed: int | None,
    **extra,
) -> dict:
    """The JSON run descriptor written next to a curves CSV."""
    manifest = {
        "model_id": model_id,
        "s": curve.band_size,
        "norm": curve.norm,
        "metric": curve.metric,
        "direction": curve.direction,
        "target_fmr": target_fmr,
        "master_seed": master_seed,
        "n_pairs": curve.n_pairs,
        "n_degenerate": curve.n_degenerate,
    }
    manifest.update(extra)
    return manifest
