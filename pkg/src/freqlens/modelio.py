"""Backend over externally trained networks stored in the portable model format.

A model ships as two files: a serialized-graph archive loadable without the
training code (.pt2 from torch.export, or a TorchScript .pt) and a JSON
sidecar describing the embedding contract:

    {"model_id": ..., "embedding_dim": 512, "input_size": 112,
     "channel_order": "RGB" | "BGR", "mean": [...], "std": [...]}

An optional "serialize_calls": true entry makes the evaluation layer call the
backend from one thread at a time.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .embedders import Embedding, EmbeddingBackend, PreprocessConfig, preprocess
from .errors import ModelFileError
from .spectral import SpatialImage

SIDECAR_KEYS = ("model_id", "embedding_dim", "input_size", "channel_order", "mean", "std")


def load_sidecar(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ModelFileError(f"model sidecar not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"sidecar {path} is not valid JSON: {exc}") from exc
    missing = [k for k in SIDECAR_KEYS if k not in data]
    if missing:
        raise ModelFileError(f"sidecar {path} is missing keys: {missing}")
    return data


class PortableModelEmbedder(EmbeddingBackend):
    """Runs a serialized network on preprocessed images, on CPU, gradient-free."""

    def __init__(self, model_file: str | Path, sidecar: str | Path | None = None):
        try:
            import torch
        except ImportError as exc:  # pragma: no cover - torch is an optional extra
            raise ModelFileError(
                "loading external models requires torch (pip install freqlens[model])"
            ) from exc
        model_file = Path(model_file)
        if not model_file.is_file():
            raise ModelFileError(f"model file not found: {model_file}")
        meta = load_sidecar(sidecar if sidecar is not None else model_file.with_suffix(".json"))
        try:
            if model_file.suffix == ".pt2":
                self._module = torch.export.load(str(model_file)).module()
            else:
                self._module = torch.jit.load(str(model_file), map_location="cpu").eval()
        except ModelFileError:
            raise
        except Exception as exc:
            raise ModelFileError(f"cannot load model {model_file}: {exc}") from exc
        self._torch = torch
        self.model_id = str(meta["model_id"])
        self.dim = int(meta["embedding_dim"])
        self.parallel_safe = not bool(meta.get("serialize_calls", False))
        self.cfg = PreprocessConfig(
            expected_size=int(meta["input_size"]),
            channel_order=str(meta["channel_order"]),
            mean=tuple(float(v) for v in meta["mean"]),
            std=tuple(float(v) for v in meta["std"]),
            resize_policy=str(meta.get("resize_policy", "error")),
        )

    def embed(self, img: SpatialImage) -> Embedding:
        x = preprocess(img, self.cfg)
        with self._torch.inference_mode():
            out = self._module(self._torch.from_numpy(x).unsqueeze(0))
        values = np.asarray(out.squeeze(0).numpy(), dtype=np.float64)
        if values.ndim != 1 or values.size != self.dim:
            raise ModelFileError(
                f"model {self.model_id} returned shape {tuple(out.shape)}, "
                f"expected a {self.dim}-dimensional embedding"
            )
        return Embedding(values, self.model_id)


def external_model_embedder(
    model_file: str | Path, sidecar: str | Path | None = None
) -> PortableModelEmbedder:
    """Load a model file plus its JSON sidecar into an embedding backend."""
    return PortableModelEmbedder(model_file, sidecar)
