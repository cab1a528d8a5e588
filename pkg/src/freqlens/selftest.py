"""Built-in health checks runnable from the CLI.

Each suite re-derives its expected values from first principles (explicit
transform sums, linear threshold scans, analytic band supports) so a passing
report certifies the fast paths against independent math, not against
themselves. `inject_fault` deliberately corrupts one suite to prove the
checker can fail.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .embedders import spectral_toy_embedder
from .evaluation import ScoreSet, compute_eer, threshold_at_fmr
from .influence import influence_ordering, pair_influence
from .spectral import (
    L1,
    L2,
    SpatialImage,
    apply_mask,
    band_index_map,
    build_mask,
    build_partition,
    forward_transform,
    inverse_transform,
    spectral_energy,
)
from .synthdata import lattice_pair

FAULT_MODES = ("mask-symmetry",)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _naive_centered_dft(pixels: np.ndarray) -> np.ndarray:
    n = pixels.shape[0]
    x = np.arange(n)
    out = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        for l in range(n):
            phase = np.exp(-2j * np.pi * (k * x[:, None] + l * x[None, :]) / n)
            out[k, l] = np.sum(pixels * phase) / (n * n)
    return np.roll(out, (n // 2, n // 2), axis=(0, 1))


def _check_roundtrip(rng) -> CheckResult:
    worst = 0.0
    for n in (4, 16, 112):
        for _ in range(3):
            img = SpatialImage(rng.uniform(0, 255, (n, n, 3)))
            back = inverse_transform(forward_transform(img))
            worst = max(worst, float(np.abs(back.pixels - img.pixels).max()))
    return CheckResult("transform round trip", worst < 1e-6, f"max abs error {worst:.2e}")


def _check_naive_agreement(rng) -> CheckResult:
    img = SpatialImage(rng.uniform(0, 255, (8, 8, 1)))
    fast = forward_transform(img).coeffs[:, :, 0]
    slow = _naive_centered_dft(img.pixels[:, :, 0])
    err = float(np.abs(fast - slow).max())
    return CheckResult("direct-sum transform agreement", err < 1e-9, f"max abs error {err:.2e}")


def _check_partitions(fault: str | None) -> CheckResult:
    perm = (112 - np.arange(112)) % 112
    for norm in (L1, L2):
        for s in (1, 2, 4, 8, 14):
            partition = build_partition(112, s, norm)
            if len(partition.bands) != -(-56 // s):
                return CheckResult("band partitions", False, f"band count wrong for s={s}")
            idx = band_index_map(partition)
            if (idx >= 0).sum() != 112 * 112 - 1 or idx[56, 56] != -1:
                return CheckResult("band partitions", False, f"coverage broken for s={s}/{norm}")
            for j in range(len(partition.bands)):
                mask = build_mask(partition, j).mask
                if fault == "mask-symmetry" and s == 8 and j == 2:
                    mask = mask.copy()
                    mask[10, 20] = 1.0 - mask[10, 20]
                if mask[56, 56] != 1.0:
                    return CheckResult("band partitions", False, "DC was masked")
                if not np.array_equal(mask, mask[np.ix_(perm, perm)]):
                    return CheckResult(
                        "band partitions", False, f"mask s={s}/{norm} band {j} lost mirror symmetry"
                    )
    return CheckResult("band partitions", True, "counts, coverage, DC, symmetry verified")


def _check_parseval(rng) -> CheckResult:
    worst = 0.0
    for _ in range(5):
        img = SpatialImage(rng.uniform(0, 255, (16, 16, 3)))
        spatial = float(np.sum(img.pixels**2))
        rel = abs(spectral_energy(forward_transform(img)) - spatial) / spatial
        worst = max(worst, rel)
    return CheckResult("Parseval identity", worst < 1e-6, f"max rel error {worst:.2e}")


def _check_masked_realness(rng) -> CheckResult:
    worst = 0.0
    img = SpatialImage(rng.uniform(0, 255, (112, 112, 3)))
    spec = forward_transform(img)
    for s in (1, 8, 14):
        partition = build_partition(112, s, L2)
        masked = apply_mask(spec, build_mask(partition, 0))
        raw = np.fft.ifft2(np.fft.ifftshift(masked.coeffs, axes=(0, 1)), axes=(0, 1))
        worst = max(worst, float(np.abs(raw.imag).max() / np.abs(raw).max()))
    return CheckResult("masked reconstructions stay real", worst < 1e-9, f"max rel residue {worst:.2e}")


def _check_toy_influence(rng) -> CheckResult:
    partition = build_partition(112, 14, L2)
    supported = {0, 2}
    backend = spectral_toy_embedder(supported, partition)
    for seed in range(3):
        img_a, img_b = lattice_pair(int(rng.integers(1 << 30)) + seed, partition, channels=1)
        profile = pair_influence(img_a, img_b, backend, partition)
        for j in range(4):
            if j in supported and profile.absolute[j] == 0.0:
                return CheckResult("toy influence oracle", False, f"band {j} lost its influence")
            if j not in supported and profile.absolute[j] != 0.0:
                return CheckResult(
                    "toy influence oracle", False, f"band {j} leaked influence {profile.absolute[j]}"
                )
        if set(influence_ordering(profile)[:2]) != supported:
            return CheckResult("toy influence oracle", False, "ordering does not lead with support")
    return CheckResult("toy influence oracle", True, "exact support recovery on lattice pairs")


def _check_eer_oracle(rng) -> CheckResult:
    for _ in range(30):
        genuine = rng.uniform(-1, 1, int(rng.integers(2, 40)))
        imposter = rng.uniform(-1, 1, int(rng.integers(2, 40)))
        scores = ScoreSet(genuine=genuine, imposter=imposter)
        eer, tau = compute_eer(scores)
        # linear scan over the same candidate definition
        pool = np.unique(np.concatenate([genuine, imposter]))
        candidates = [pool[0] - 1.0, pool[-1] + 1.0] + list((pool[:-1] + pool[1:]) / 2)
        best = min(
            (
                (
                    abs(
                        np.mean(imposter >= t) - np.mean(genuine < t)
                    ),
                    t,
                    (np.mean(imposter >= t) + np.mean(genuine < t)) / 2,
                )
                for t in sorted(candidates)
            ),
            key=lambda item: (item[0], item[1]),
        )
        if eer != best[2] or tau != best[1]:
            return CheckResult("EER threshold sweep", False, f"mismatch at eer={eer}")
    sep, _ = compute_eer(ScoreSet(genuine=np.full(5, 0.9), imposter=np.full(5, 0.1)))
    same, _ = compute_eer(ScoreSet(genuine=np.arange(5.0), imposter=np.arange(5.0)))
    ok = sep == 0.0 and same == 0.5
    return CheckResult("EER threshold sweep", ok, "matches linear-scan oracle")


def _check_fmr_threshold_oracle(rng) -> CheckResult:
    for _ in range(30):
        imposter = rng.uniform(-1, 1, int(rng.integers(2, 40)))
        target = float(rng.uniform(0.05, 0.9))
        tau = threshold_at_fmr(ScoreSet(genuine=np.array([1.0]), imposter=imposter), target)
        m = imposter.size
        candidates = sorted(np.nextafter(v, np.inf) for v in imposter)
        expected = next(
            t for t in candidates if np.count_nonzero(imposter >= t) / m <= target
        )
        if tau != expected:
            return CheckResult("FMR threshold rule", False, f"{tau} != {expected}")
        if np.count_nonzero(imposter >= tau) / m > target:
            return CheckResult("FMR threshold rule", False, "target exceeded")
    return CheckResult("FMR threshold rule", True, "smallest conforming threshold confirmed")


def run_selftest(inject_fault: str | None = None, seed: int = 7) -> list[CheckResult]:
    """Run every suite; `inject_fault='mask-symmetry'` must make one fail."""
    if inject_fault is not None and inject_fault not in FAULT_MODES:
        raise ValueError(f"unknown fault mode {inject_fault!r}; known: {FAULT_MODES}")
    rng = np.random.default_rng(seed)
    return [
        _check_roundtrip(rng),
        _check_naive_agreement(rng),
        _check_partitions(inject_fault),
        _check_parseval(rng),
        _check_masked_realness(rng),
        _check_toy_influence(rng),
        _check_eer_oracle(rng),
        _check_fmr_threshold_oracle(rng),
    ]


def format_report(results: list[CheckResult], elapsed: float | None = None) -> str:
    lines = [
        f"{'PASS' if r.ok else 'FAIL'}  {r.name}: {r.detail}" for r in results
    ]
    n_ok = sum(r.ok for r in results)
    summary = f"{n_ok}/{len(results)} suites passed"
    if elapsed is not None:
        summary += f" in {elapsed:.1f}s"
    lines.append(summary)
    return "\n".join(lines)


def main_selftest(inject_fault: str | None = None) -> int:
    start = time.perf_counter()
    results = run_selftest(inject_fault)
    print(format_report(results, time.perf_counter() - start))
    return 0 if all(r.ok for r in results) else 1
