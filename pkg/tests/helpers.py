"""Independent oracles for the test suite.

Everything here evaluates defining formulas directly (explicit sums, linear
scans, per-pixel loops) and deliberately avoids the package's own code paths.
"""

import math

import numpy as np


def naive_dft(pixels: np.ndarray) -> np.ndarray:
    """Direct double-sum transform with 1/N^2 scaling, DC moved to the center."""
    arr = np.asarray(pixels, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, np.newaxis]
    n = arr.shape[0]
    x = np.arange(n)
    out = np.zeros((n, n, arr.shape[2]), dtype=np.complex128)
    for k in range(n):
        for l in range(n):
            phase = np.exp(-2j * np.pi * (k * x[:, None] + l * x[None, :]) / n)
            for c in range(arr.shape[2]):
                out[k, l, c] = np.sum(arr[:, :, c] * phase) / (n * n)
    # move DC from (0, 0) to (n//2, n//2)
    return np.roll(out, (n // 2, n // 2), axis=(0, 1))


def naive_idft(centered_coeffs: np.ndarray) -> np.ndarray:
    """Direct unnormalized inverse sum from a DC-centered spectrum."""
    coeffs = np.asarray(centered_coeffs, dtype=np.complex128)
    if coeffs.ndim == 2:
        coeffs = coeffs[:, :, np.newaxis]
    n = coeffs.shape[0]
    spec = np.roll(coeffs, (-(n // 2), -(n // 2)), axis=(0, 1))
    k = np.arange(n)
    out = np.zeros_like(spec)
    for xx in range(n):
        for yy in range(n):
            phase = np.exp(2j * np.pi * (k[:, None] * xx + k[None, :] * yy) / n)
            for c in range(spec.shape[2]):
                out[xx, yy, c] = np.sum(spec[:, :, c] * phase)
    return out


def band_coordinate_count(n: int, norm: str, lower: float, upper: float | None) -> int:
    """Count grid coordinates with lower < ||(k - N/2, l - N/2)|| <= upper.

    upper=None means unbounded (the final band of a partition).
    """
    count = 0
    for k in range(n):
        for l in range(n):
            dk, dl = k - n // 2, l - n // 2
            r = abs(dk) + abs(dl) if norm == "l1" else math.hypot(dk, dl)
            if r > lower and (upper is None or r <= upper):
                count += 1
    return count


def brute_eer(genuine, imposter) -> tuple[float, float]:
    """Linear scan over midpoint thresholds; mirrors the published definition."""
    genuine = [float(g) for g in genuine]
    imposter = [float(i) for i in imposter]
    pool = sorted(set(genuine) | set(imposter))
    candidates = [pool[0] - 1.0]
    candidates += [(a + b) / 2.0 for a, b in zip(pool, pool[1:])]
    candidates += [pool[-1] + 1.0]
    best = None
    for tau in candidates:
        fmr = sum(1 for s in imposter if s >= tau) / len(imposter)
        fnmr = sum(1 for s in genuine if s < tau) / len(genuine)
        key = abs(fmr - fnmr)
        if best is None or key < best[0]:
            best = (key, tau, (fmr + fnmr) / 2.0)
    return best[2], best[1]


def brute_threshold_at_fmr(imposter, target: float) -> float:
    """Smallest candidate threshold with FMR <= target, by exhaustive scan."""
    imposter = [float(i) for i in imposter]
    m = len(imposter)
    candidates = sorted(np.nextafter(s, np.inf) for s in imposter)
    for tau in candidates:
        if sum(1 for s in imposter if s >= tau) / m <= target:
            return float(tau)
    raise AssertionError("no candidate threshold satisfies the target")


def reference_bilinear(arr: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Per-pixel bilinear resampling with half-pixel centers and edge clamp."""
    arr = np.asarray(arr, dtype=np.float64)
    squeeze = arr.ndim == 2
    if squeeze:
        arr = arr[:, :, np.newaxis]
    in_h, in_w, ch = arr.shape
    out = np.zeros((out_h, out_w, ch))
    for i in range(out_h):
        sy = min(max((i + 0.5) * in_h / out_h - 0.5, 0.0), in_h - 1.0)
        y0 = int(math.floor(sy))
        y1 = min(y0 + 1, in_h - 1)
        fy = sy - y0
        for j in range(out_w):
            sx = min(max((j + 0.5) * in_w / out_w - 0.5, 0.0), in_w - 1.0)
            x0 = int(math.floor(sx))
            x1 = min(x0 + 1, in_w - 1)
            fx = sx - x0
            for c in range(ch):
                top = arr[y0, x0, c] + fx * (arr[y0, x1, c] - arr[y0, x0, c])
                bot = arr[y1, x0, c] + fx * (arr[y1, x1, c] - arr[y1, x0, c])
                out[i, j, c] = top + fy * (bot - top)
    return out[:, :, 0] if squeeze else out


def trapezoid_by_hand(points) -> float:
    total = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        total += (x1 - x0) * (y0 + y1) / 2.0
    return total
