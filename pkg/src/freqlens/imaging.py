"""Image decoding, pair manifests, and the down/up-scale degradation transform."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import DimensionError, ManifestError, ParameterError
from .spectral import SpatialImage

GENUINE = "genuine"
IMPOSTER = "imposter"
LABELS = (GENUINE, IMPOSTER)


@dataclass(frozen=True)
class PairRecord:
    """One row of a verification-pair manifest."""

    path_a: Path
    path_b: Path
    label: str
    tag: str | None = None


def bilinear_resize(arr: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample with half-pixel-centered sampling and edge clamping.

    Interpolation is computed as v0 + f*(v1 - v0), which keeps constant inputs
    exactly constant.
    """
    if out_h < 1 or out_w < 1:
        raise ParameterError(f"target size must be positive, got {out_h}x{out_w}")
    arr = np.asarray(arr, dtype=np.float64)
    squeeze = arr.ndim == 2
    if squeeze:
        arr = arr[:, :, np.newaxis]
    for axis, out_size in ((0, out_h), (1, out_w)):
        in_size = arr.shape[axis]
        if in_size == out_size:
            continue
        src = (np.arange(out_size) + 0.5) * (in_size / out_size) - 0.5
        src = np.clip(src, 0.0, in_size - 1.0)
        i0 = np.floor(src).astype(np.int64)
        i1 = np.minimum(i0 + 1, in_size - 1)
        frac = src - i0
        lo = np.take(arr, i0, axis=axis)
        hi = np.take(arr, i1, axis=axis)
        shape = [1, 1, 1]
        shape[axis] = out_size
        arr = lo + frac.reshape(shape) * (hi - lo)
    return arr[:, :, 0] if squeeze else arr


def degrade_resolution(img: SpatialImage, m: float) -> SpatialImage:
    """Bilinearly shrink the image by factor m, then scale back to its original size."""
    if not 0 < m < 1:
        raise ParameterError(f"downscaling factor must satisfy 0 < m < 1, got {m}")
    small = math.floor(img.n * m)
    if small < 2:
        raise ParameterError(f"intermediate size floor({img.n} * {m}) = {small} is below 2")
    down = bilinear_resize(img.pixels, small, small)
    up = bilinear_resize(down, img.n, img.n)
    return SpatialImage(up, channel_order=img.channel_order)


def load_image(
    path: str | Path,
    expected_size: int | None = None,
    resize_policy: str = "error",
) -> SpatialImage:
    """Decode a PNG/JPEG file into an RGB SpatialImage with values in [0, 255].

    Grayscale files are replicated to 3 channels; an alpha channel is dropped
    with a warning. If expected_size is given and the decoded size differs,
    resize_policy decides: "error" raises, "bilinear" resamples.
    """
    path = Path(path)
    if not path.is_file():
        raise ParameterError(f"image file not found: {path}")
    try:
        with Image.open(path) as im:
            if "A" in im.getbands():
                warnings.warn(f"{path.name}: alpha channel dropped")
            if im.mode != "RGB":
                im = im.convert("RGB")
            arr = np.asarray(im, dtype=np.float64)
    except ParameterError:
        raise
    except Exception as exc:
        raise ParameterError(f"cannot decode {path}: {exc}") from exc
    h, w = arr.shape[:2]
    if expected_size is not None and (h, w) != (expected_size, expected_size):
        if resize_policy == "bilinear":
            arr = bilinear_resize(arr, expected_size, expected_size)
        elif resize_policy == "error":
            raise DimensionError(
                f"{path.name}: got {h}x{w}, expected {expected_size}x{expected_size} "
                "(pass resize_policy='bilinear' to resample)"
            )
        else:
            raise ParameterError(f"unknown resize policy {resize_policy!r}")
    return SpatialImage(arr, channel_order="RGB")


def save_image(img: SpatialImage, path: str | Path) -> None:
    """Write as PNG; values are clamped to [0, 255] and rounded only here."""
    arr = np.clip(np.rint(img.pixels), 0, 255).astype(np.uint8)
    if arr.shape[2] == 1:
        arr = arr[:, :, 0]
    elif img.channel_order == "BGR":
        arr = arr[:, :, ::-1]
    Image.fromarray(arr).save(Path(path), format="PNG")


def read_manifest(path: str | Path) -> list[PairRecord]:
    """Parse a pair-manifest CSV with header path_a,path_b,label[,tag].

    Relative image paths are resolved against the manifest's directory.
    Malformed rows raise ManifestError naming the offending line.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    base = path.parent
    records: list[PairRecord] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"path_a", "path_b", "label"}
        fields = set(reader.fieldnames or ())
        if not required <= fields:
            raise ManifestError(
                f"{path.name}: header must contain path_a,path_b,label (got {sorted(fields)})"
            )
        for lineno, row in enumerate(reader, start=2):
            label = (row.get("label") or "").strip()
            if label not in LABELS:
                raise ManifestError(
                    f"{path.name} line {lineno}: unknown label {label!r} "
                    f"(expected one of {list(LABELS)})"
                )
            pa, pb = (row.get("path_a") or "").strip(), (row.get("path_b") or "").strip()
            if not pa or not pb:
                raise ManifestError(f"{path.name} line {lineno}: empty image path")
            tag = (row.get("tag") or "").strip() or None
            records.append(
                PairRecord(
                    path_a=_resolve(base, pa),
                    path_b=_resolve(base, pb),
                    label=label,
                    tag=tag,
                )
            )
    if not records:
        warnings.warn(f"{path.name}: manifest contains no pair rows")
    return records


def _resolve(base: Path, p: str) -> Path:
    q = Path(p)
    return q if q.is_absolute() else base / q
