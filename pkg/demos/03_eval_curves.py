#!/usr/bin/env python3
"""Judge explanation quality with insertion/deletion curves.

Bands are masked in each pair's own influence order; if the influences are
faithful, the verification error (EER here) climbs faster than under random
band orders on deletion, and recovers faster on insertion.

    python demos/03_eval_curves.py
"""

import os

from freqlens import (
    DELETION,
    EER,
    INSERTION,
    L2,
    build_partition,
    curve_auc,
    pair_influence,
    run_curve,
    spectral_toy_embedder,
)
from freqlens.svgplot import line_chart
from freqlens.synthdata import make_identity_corpus

OUT = "demo_out"


def main():
    os.makedirs(OUT, exist_ok=True)
    partition = build_partition(112, 8, L2)
    backend = spectral_toy_embedder(set(range(7)), partition)
    pairs = make_identity_corpus(17, partition, n_genuine=12, n_imposter=12, channels=1)
    profiles = [pair_influence(p.img_a, p.img_b, backend, partition) for p in pairs]

    for direction in (DELETION, INSERTION):
        influence_curve = run_curve(
            pairs, backend, partition, direction, EER, profiles=profiles, jobs=4
        )
        baselines = [
            run_curve(pairs, backend, partition, direction, EER,
                      ordering="random", master_seed=seed, jobs=4)
            for seed in range(3)
        ]
        print(f"\n{direction}: influence AUC {curve_auc(influence_curve):.3f}, "
              f"baselines {[round(curve_auc(b), 3) for b in baselines]}")
        print("  fractions:", [f"{f:.2f}" for f, _ in influence_curve.points])
        print("  influence:", [f"{v:.2f}" for _, v in influence_curve.points])

        series = [{"points": list(influence_curve.points), "label": "influence"}]
        series += [
            {"points": list(b.points), "label": f"random {b.seed}", "dashed": True}
            for b in baselines
        ]
        path = f"{OUT}/curve_{direction}.svg"
        with open(path, "w") as fh:
            fh.write(line_chart(series, title=f"{direction} / EER",
                                xlabel="fraction of bands", ylabel="EER"))
        print(f"  wrote {path}")


if __name__ == "__main__":
    main()
