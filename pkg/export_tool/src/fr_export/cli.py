"""Command line for the checkpoint export tool."""

from __future__ import annotations

import argparse
import sys

from .export import ExportError, export_model
from .iresnet import ARCHS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fr-export",
        description="Convert a face-recognition checkpoint to the portable .pt2 + sidecar format",
    )
    parser.add_argument("checkpoint", help="state-dict checkpoint or TorchScript file")
    parser.add_argument("out", help="output model path (.pt2)")
    parser.add_argument("--arch", choices=sorted(ARCHS), default="iresnet100")
    parser.add_argument("--model-id", default=None, help="defaults to the checkpoint stem")
    parser.add_argument("--embedding-dim", type=int, default=512)
    parser.add_argument("--input-size", type=int, default=112)
    parser.add_argument("--channel-order", choices=("RGB", "BGR"), default="RGB")
    parser.add_argument("--mean", type=float, nargs=3, default=(127.5, 127.5, 127.5))
    parser.add_argument("--std", type=float, nargs=3, default=(127.5, 127.5, 127.5))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = export_model(
            args.checkpoint,
            args.out,
            arch=args.arch,
            model_id=args.model_id,
            embedding_dim=args.embedding_dim,
            input_size=args.input_size,
            channel_order=args.channel_order,
            mean=tuple(args.mean),
            std=tuple(args.std),
        )
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"exported {report.model_id} (dim {report.embedding_dim}) "
        f"with parity {report.parity:.6f} [{report.format_version}]"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
