"""Checkpoint-to-portable-format export tool for face-recognition backbones."""

from .export import PARITY_THRESHOLD, ExportError, ExportReport, export_model, probe_image
from .iresnet import ARCHS, IResNet, build_backbone

__version__ = "0.1.0"

__all__ = [
    "ARCHS",
    "ExportError",
    "ExportReport",
    "IResNet",
    "PARITY_THRESHOLD",
    "build_backbone",
    "export_model",
    "probe_image",
]
