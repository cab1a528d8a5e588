"""Convert a face-recognition checkpoint into the portable model + sidecar files.

The output contract is shared with the analysis package: a .pt2 graph archive
(torch.export) next to a JSON sidecar naming the embedding dimension, input
size, channel order and preprocessing constants. Export is verified by pushing
seeded probe images through the source network and the reloaded export and
comparing embeddings by cosine; the probes and their embeddings are recorded
in a report so downstream consumers can re-check parity later.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from .iresnet import build_backbone

PARITY_THRESHOLD = 0.9999
PROBE_SEEDS = (11, 22, 33)


class ExportError(RuntimeError):
    pass


@dataclass
class ExportReport:
    model_id: str
    embedding_dim: int
    parity: float
    format_version: str
    ok: bool
    probes: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "model_id": self.model_id,
            "embedding_dim": self.embedding_dim,
            "parity": self.parity,
            "format_version": self.format_version,
            "ok": self.ok,
            "probes": self.probes,
        }


def probe_image(seed: int, size: int) -> np.ndarray:
    """Deterministic RGB probe, HWC float64 with values in [0, 255]."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, (size, size, 3)).astype(np.float64)


def preprocess(pixels: np.ndarray, channel_order: str, mean, std) -> torch.Tensor:
    """Same affine map the analysis side applies: (v - mean) / std, CHW float32."""
    arr = pixels[:, :, ::-1] if channel_order == "BGR" else pixels
    arr = (arr - np.asarray(mean)) / np.asarray(std)
    return torch.from_numpy(arr.transpose(2, 0, 1).copy()).float().unsqueeze(0)


def _strip_prefixes(state_dict: dict) -> dict:
    out = {}
    for key, value in state_dict.items():
        for prefix in ("module.", "backbone.", "model."):
            if key.startswith(prefix):
                key = key[len(prefix):]
        out[key] = value
    return out


def load_checkpoint(path: str | Path, arch: str, embedding_dim: int, input_size: int) -> torch.nn.Module:
    """Instantiate the architecture and load weights, or load a TorchScript file."""
    path = Path(path)
    if not path.is_file():
        raise ExportError(f"checkpoint not found: {path}")
    try:
        payload = torch.load(str(path), map_location="cpu", weights_only=True)
    except Exception:
        try:
            return torch.jit.load(str(path), map_location="cpu").eval()
        except Exception as exc:
            raise ExportError(f"cannot load checkpoint {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ExportError(f"checkpoint {path} is neither a state dict nor a TorchScript file")
    for wrapper in ("state_dict", "model_state_dict", "backbone"):
        if wrapper in payload and isinstance(payload[wrapper], dict):
            payload = payload[wrapper]
    model = build_backbone(arch, embedding_dim=embedding_dim, input_size=input_size)
    try:
        model.load_state_dict(_strip_prefixes(payload), strict=True)
    except RuntimeError as exc:
        raise ExportError(f"checkpoint does not match architecture {arch!r}: {exc}") from exc
    return model.eval()


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))


def export_model(
    checkpoint: str | Path,
    out: str | Path,
    *,
    arch: str = "iresnet100",
    model_id: str | None = None,
    embedding_dim: int = 512,
    input_size: int = 112,
    channel_order: str = "RGB",
    mean: tuple[float, float, float] = (127.5, 127.5, 127.5),
    std: tuple[float, float, float] = (127.5, 127.5, 127.5),
    strict: bool = True,
) -> ExportReport:
    """Write <out>, its sidecar and a parity report; returns the report.

    Nothing is written if the checkpoint cannot be loaded. With strict=True a
    parity below the 0.9999 threshold raises after the failed report is
    written.
    """
    out = Path(out)
    if out.suffix != ".pt2":
        raise ExportError(f"output must use the .pt2 suffix, got {out.name}")
    source = load_checkpoint(checkpoint, arch, embedding_dim, input_size)
    model_id = model_id or Path(checkpoint).stem

    example = torch.zeros(1, 3, input_size, input_size)
    exported = torch.export.export(source, (example,))
    out.parent.mkdir(parents=True, exist_ok=True)
    torch.export.save(exported, str(out))

    sidecar = {
        "model_id": model_id,
        "embedding_dim": embedding_dim,
        "input_size": input_size,
        "channel_order": channel_order,
        "mean": list(mean),
        "std": list(std),
    }
    out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")

    reloaded = torch.export.load(str(out)).module()
    parity = 1.0
    probes = []
    with torch.inference_mode():
        for seed in PROBE_SEEDS:
            pixels = probe_image(seed, input_size)
            x = preprocess(pixels, channel_order, mean, std)
            src_emb = source(x).squeeze(0).numpy().astype(np.float64)
            exp_emb = reloaded(x).squeeze(0).numpy().astype(np.float64)
            if src_emb.shape != (embedding_dim,):
                raise ExportError(
                    f"model produced shape {src_emb.shape}, expected ({embedding_dim},)"
                )
            parity = min(parity, _cosine(src_emb, exp_emb))
            probes.append({"seed": seed, "embedding": exp_emb.tolist()})

    report = ExportReport(
        model_id=model_id,
        embedding_dim=embedding_dim,
        parity=parity,
        format_version=f"pt2/torch-{torch.__version__}",
        ok=parity >= PARITY_THRESHOLD,
        probes=probes,
    )
    report_path = out.with_suffix(".report.json")
    report_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    if strict and not report.ok:
        raise ExportError(
            f"export parity {parity:.6f} fell below {PARITY_THRESHOLD} (see {report_path})"
        )
    return report
