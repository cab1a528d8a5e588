"""Command-line surface: explain, curves, aggregate, degrade, selftest.

All outputs are reproducible: identical configuration and seeds give
byte-identical JSON/CSV regardless of --jobs, and floats are printed with
9 significant digits.
"""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .embedders import EmbeddingBackend, seeded_projection_embedder, spectral_toy_embedder
from .errors import FreqlensError, ParameterError
from .evaluation import (
    EvalCurve,
    VerificationPair,
    compute_profiles,
    curve_auc,
    curves_to_csv,
    run_curve,
    run_manifest,
)
from .imaging import degrade_resolution, load_image, read_manifest, save_image
from .influence import aggregate_profiles, pair_influence
from .serialize import write_json
from .spectral import BandPartition, NORMS, SpatialImage, build_partition
from .svgplot import bar_chart, bar_chart_with_errors, line_chart

RECOMMENDED_BAND_SIZES = (1, 2, 4, 8, 14)
MODEL_DIR_ENV = "FREQLENS_MODEL_DIR"


@dataclass
class RunConfig:
    """Resolved settings shared by the pipeline commands."""

    band_size: float
    norm: str
    jobs: int
    model: str | None = None
    sidecar: str | None = None
    toy_bands: str | None = None
    projection: str | None = None
    low_res: float | None = None
    cross_resolution: bool = False
    resize: str = "error"

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        cfg = cls(
            band_size=args.band_size,
            norm=args.norm,
            jobs=args.jobs,
            model=getattr(args, "model", None),
            sidecar=getattr(args, "sidecar", None),
            toy_bands=getattr(args, "toy_bands", None),
            projection=getattr(args, "projection", None),
            low_res=getattr(args, "low_res", None),
            cross_resolution=getattr(args, "cross_resolution", False),
            resize=getattr(args, "resize", "error"),
        )
        if cfg.band_size not in RECOMMENDED_BAND_SIZES:
            warnings.warn(
                f"band size {cfg.band_size} is outside the studied set {RECOMMENDED_BAND_SIZES}"
            )
        selected = [x for x in (cfg.model, cfg.toy_bands, cfg.projection) if x is not None]
        if len(selected) != 1:
            raise ParameterError(
                "select exactly one backend: --model, --toy-bands or --projection"
            )
        return cfg

    def expected_size(self) -> int | None:
        """Input size pinned by the model sidecar, if a model backend is used."""
        if self.model is None:
            return None
        from .modelio import load_sidecar

        model_path = _resolve_model_path(self.model)
        sidecar = Path(self.sidecar) if self.sidecar else model_path.with_suffix(".json")
        return int(load_sidecar(sidecar)["input_size"])

    def make_backend(self, partition: BandPartition) -> EmbeddingBackend:
        if self.toy_bands is not None:
            bands = {int(tok) for tok in self.toy_bands.split(",") if tok.strip()}
            return spectral_toy_embedder(bands, partition)
        if self.projection is not None:
            try:
                seed_str, dim_str = self.projection.split(",")
                return seeded_projection_embedder(int(seed_str), int(dim_str))
            except ValueError as exc:
                raise ParameterError(
                    f"--projection takes 'SEED,DIM', got {self.projection!r}"
                ) from exc
        from .modelio import external_model_embedder

        return external_model_embedder(_resolve_model_path(self.model), self.sidecar)


def _resolve_model_path(model: str) -> Path:
    path = Path(model)
    if not path.is_file() and not path.is_absolute():
        candidate = Path(os.environ.get(MODEL_DIR_ENV, "")) / model
        if os.environ.get(MODEL_DIR_ENV) and candidate.is_file():
            return candidate
    return path


def _add_common(parser: argparse.ArgumentParser, with_degrade: bool = True) -> None:
    parser.add_argument("--band-size", type=float, default=8, help="band width s (default 8)")
    parser.add_argument("--norm", choices=NORMS, default="l2", help="radius norm (default l2)")
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="parallel workers across pairs (results are jobs-invariant)")
    backend = parser.add_argument_group("backend (choose one)")
    backend.add_argument("--model", help="model file in the portable format (+ JSON sidecar)")
    backend.add_argument("--sidecar", help="explicit sidecar path (default: model with .json)")
    backend.add_argument("--toy-bands", help="spectral toy backend reading these band indices, e.g. 0,1")
    backend.add_argument("--projection", help="seeded projection backend as 'SEED,DIM'")
    parser.add_argument("--resize", choices=("error", "bilinear"), default="error",
                        help="policy when image sizes disagree with the backend")
    if with_degrade:
        parser.add_argument("--low-res", type=float, default=None, metavar="M",
                            help="degrade both images by down/up-scaling with factor M")
        parser.add_argument("--cross-resolution", action="store_true",
                            help="degrade only the second image of each pair")


def _prepare_pair_images(
    img_a: SpatialImage, img_b: SpatialImage, cfg: RunConfig
) -> tuple[SpatialImage, SpatialImage]:
    factor = cfg.low_res if cfg.low_res is not None else 0.25
    if cfg.cross_resolution:  # one sharp side, one degraded side
        img_b = degrade_resolution(img_b, factor)
    elif cfg.low_res is not None:
        img_a = degrade_resolution(img_a, factor)
        img_b = degrade_resolution(img_b, factor)
    return img_a, img_b


def _load_pairs(manifest_path: str, cfg: RunConfig) -> list[VerificationPair]:
    records = read_manifest(manifest_path)
    expected = cfg.expected_size()
    pairs = []
    for rec in records:
        img_a = load_image(rec.path_a, expected, cfg.resize)
        img_b = load_image(rec.path_b, expected, cfg.resize)
        img_a, img_b = _prepare_pair_images(img_a, img_b, cfg)
        pairs.append(VerificationPair(img_a, img_b, rec.label, rec.tag))
    return pairs


def _partition_for(images_n: int, cfg: RunConfig) -> BandPartition:
    return build_partition(images_n, cfg.band_size, cfg.norm)


def _band_labels(partition: BandPartition) -> list[str]:
    return [f"{band.upper:g}" for band in partition.bands]


def cmd_explain(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    expected = cfg.expected_size()
    img_a = load_image(args.image_a, expected, cfg.resize)
    img_b = load_image(args.image_b, expected, cfg.resize)
    if img_a.n != img_b.n:
        raise ParameterError(f"image sizes differ: {img_a.n} vs {img_b.n}")
    img_a, img_b = _prepare_pair_images(img_a, img_b, cfg)
    partition = _partition_for(img_a.n, cfg)
    backend = cfg.make_backend(partition)
    profile = pair_influence(img_a, img_b, backend, partition)
    out = Path(args.out)
    write_json(out, profile.to_dict())
    print(f"wrote {out}")
    if args.svg:
        modes = ("absolute", "directed") if args.mode == "both" else (args.mode,)
        for mode in modes:
            svg_path = out.with_name(out.stem + f"_{mode}.svg")
            values = getattr(profile, mode)
            svg_path.write_text(
                bar_chart(
                    values,
                    _band_labels(partition),
                    title=f"{backend.model_id} ({mode}, s={partition.nominal_band_size:g})",
                    ylabel=f"{mode} influence",
                    signed=(mode == "directed"),
                )
            )
            print(f"wrote {svg_path}")
    if profile.degenerate:
        print("warning: degenerate profile (no band moved the score)", file=sys.stderr)
        return 1
    return 0


def cmd_curves(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    pairs = _load_pairs(args.manifest, cfg)
    if not pairs:
        raise ParameterError("manifest contains no pairs")
    partition = _partition_for(pairs[0].img_a.n, cfg)
    backend = cfg.make_backend(partition)

    profiles = compute_profiles(pairs, backend, partition, jobs=cfg.jobs)
    influence_curve = run_curve(
        pairs, backend, partition, args.direction, args.metric,
        ordering="influence", target_fmr=args.target_fmr,
        profiles=profiles, jobs=cfg.jobs,
    )
    baselines: list[EvalCurve] = []
    for i in range(args.baseline_seeds):
        baselines.append(
            run_curve(
                pairs, backend, partition, args.direction, args.metric,
                ordering="random", master_seed=args.master_seed + i,
                target_fmr=args.target_fmr, jobs=cfg.jobs,
            )
        )

    out = Path(args.out)
    out.write_text(curves_to_csv([influence_curve, *baselines]))
    manifest = run_manifest(
        influence_curve, backend.model_id, args.target_fmr, args.master_seed,
        baseline_seeds=[args.master_seed + i for i in range(args.baseline_seeds)],
        influence_auc=curve_auc(influence_curve),
        baseline_auc_mean=(
            float(np.mean([curve_auc(c) for c in baselines])) if baselines else None
        ),
    )
    if cfg.low_res is not None or cfg.cross_resolution:
        manifest["interpolation"] = "bilinear-halfpixel-clamp"
        manifest["low_res"] = cfg.low_res
        manifest["cross_resolution"] = cfg.cross_resolution
    manifest_path = out.with_name(out.stem + "_manifest.json")
    write_json(manifest_path, manifest)
    print(f"wrote {out} and {manifest_path}")

    if args.svg:
        series = [
            {
                "points": list(influence_curve.points),
                "label": "influence",
                "dashed": False,
            }
        ] + [
            {
                "points": list(c.points),
                "label": f"random (seed {c.seed})",
                "dashed": True,
            }
            for c in baselines
        ]
        svg_path = out.with_suffix(".svg")
        svg_path.write_text(
            line_chart(
                series,
                title=f"{args.direction} / {args.metric} (s={partition.nominal_band_size:g})",
                xlabel="fraction of bands",
                ylabel=args.metric.upper(),
            )
        )
        print(f"wrote {svg_path}")
    return 0


def cmd_aggregate(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    pairs = _load_pairs(args.manifest, cfg)
    if not pairs:
        raise ParameterError("manifest contains no pairs")
    partition = _partition_for(pairs[0].img_a.n, cfg)
    backend = cfg.make_backend(partition)
    groups: dict[str, list] = {}
    n_degenerate = 0
    for pair, profile in zip(pairs, compute_profiles(pairs, backend, partition, jobs=cfg.jobs)):
        if profile.degenerate:
            n_degenerate += 1
            continue
        key = (pair.tag or "untagged") if args.group_by_tag else "all"
        groups.setdefault(key, []).append(profile)
    if not groups:
        raise ParameterError("every pair produced a degenerate profile; nothing to aggregate")
    if n_degenerate:
        warnings.warn(f"{n_degenerate} degenerate profile(s) excluded from the aggregate")

    payload = {
        "mode": args.mode,
        "n_degenerate": n_degenerate,
        "groups": {
            key: aggregate_profiles(profs, args.mode).to_dict()
            for key, profs in sorted(groups.items())
        },
    }
    out = Path(args.out)
    write_json(out, payload)
    print(f"wrote {out}")
    if args.svg:
        for key, profs in sorted(groups.items()):
            agg = aggregate_profiles(profs, args.mode)
            svg_path = out.with_name(out.stem + f"_{key}.svg")
            svg_path.write_text(
                bar_chart_with_errors(
                    agg.mean, agg.std, _band_labels(partition),
                    title=f"{key}: mean {args.mode} influence (n={agg.count})",
                    ylabel=f"{args.mode} influence",
                )
            )
            print(f"wrote {svg_path}")
    return 0


def cmd_degrade(args: argparse.Namespace) -> int:
    img = load_image(args.input)
    save_image(degrade_resolution(img, args.factor), args.output)
    print(f"wrote {args.output}")
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    from .selftest import main_selftest

    return main_selftest(args.inject_fault)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freqlens",
        description="Frequency-band influence explanations for embedding-based verification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_explain = sub.add_parser("explain", help="influence profile (FHP) for one image pair")
    p_explain.add_argument("image_a")
    p_explain.add_argument("image_b")
    p_explain.add_argument("--mode", choices=("absolute", "directed", "both"), default="absolute")
    p_explain.add_argument("--out", default="fhp.json")
    p_explain.add_argument("--svg", action="store_true", help="also render bar plot(s)")
    _add_common(p_explain)
    p_explain.set_defaults(func=cmd_explain)

    p_curves = sub.add_parser("curves", help="insertion/deletion curves over a pair manifest")
    p_curves.add_argument("--manifest", required=True)
    p_curves.add_argument("--metric", choices=("eer", "fnmr"), default="eer")
    p_curves.add_argument("--direction", choices=("deletion", "insertion"), default="deletion")
    p_curves.add_argument("--target-fmr", type=float, default=0.1,
                          help="FMR anchoring the frozen FNMR threshold (default 0.1)")
    p_curves.add_argument("--master-seed", type=int, default=0)
    p_curves.add_argument("--baseline-seeds", type=int, default=3,
                          help="number of random-order baseline curves")
    p_curves.add_argument("--out", default="curves.csv")
    p_curves.add_argument("--svg", action="store_true")
    _add_common(p_curves)
    p_curves.set_defaults(func=cmd_curves)

    p_agg = sub.add_parser("aggregate", help="mean/std influence profile over a manifest")
    p_agg.add_argument("--manifest", required=True)
    p_agg.add_argument("--mode", choices=("absolute", "directed"), default="absolute")
    p_agg.add_argument("--group-by-tag", action="store_true")
    p_agg.add_argument("--out", default="aggregate.json")
    p_agg.add_argument("--svg", action="store_true")
    _add_common(p_agg)
    p_agg.set_defaults(func=cmd_aggregate)

    p_deg = sub.add_parser("degrade", help="down/up-scale an image (bilinear)")
    p_deg.add_argument("input")
    p_deg.add_argument("output")
    p_deg.add_argument("--factor", type=float, default=0.25)
    p_deg.set_defaults(func=cmd_degrade)

    p_self = sub.add_parser("selftest", help="run the built-in verification suites")
    p_self.add_argument("--inject-fault", choices=("mask-symmetry",), default=None,
                        help="corrupt one suite to verify the checker catches it")
    p_self.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FreqlensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
