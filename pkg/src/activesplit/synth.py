"""Seeded synthetic structure-activity corpus.

Stand-in datasets whose names and sizes mirror a standard 25-target
ChEMBL benchmark panel. Molecules belong to scaffold clusters built
from a small motif alphabet; activity mixes a motif-level trend that a
linear model can read off the bits, cluster offsets it cannot, a dense
linear bit trend, and heavy-tailed assay noise. Folded 128-bit
fingerprints collide heavily on congeneric series, so larger datasets
contain many molecules with identical bit patterns but different
measured activities.
"""

import argparse
import os

import numpy as np

from .data import FP_BITS, Dataset, write_dataset
from .rng import derive_seed, make_rng

# (name, target id, molecule count) for the 25-target panel
PANEL = [
    ("A2a", "CHEMBL1867", 203),
    ("ABL1", "CHEMBL1862", 773),
    ("Acetylcholin", "CHEMBL220", 3159),
    ("Androgen", "CHEMBL1871", 1290),
    ("Aurora-A", "CHEMBL4722", 2125),
    ("B-raf", "CHEMBL5145", 1730),
    ("Cannabinoid", "CHEMBL218", 1116),
    ("Carbonic", "CHEMBL205", 603),
    ("Caspase", "CHEMBL2334", 1606),
    ("Coagulation", "CHEMBL204", 1700),
    ("COX-1", "CHEMBL221", 1343),
    ("COX-2", "CHEMBL230", 2855),
    ("Dihydrofolate", "CHEMBL202", 584),
    ("Dopamine", "CHEMBL217", 479),
    ("Ephrin", "CHEMBL222", 1740),
    ("erbB1", "CHEMBL203", 4868),
    ("Estrogen", "CHEMBL206", 1705),
    ("Glucocorticoid", "CHEMBL2034", 1447),
    ("Glycogen", "CHEMBL262", 1757),
    ("HERG", "CHEMBL240", 5207),
    ("JAK2", "CHEMBL2971", 2655),
    ("LCK", "CHEMBL258", 1352),
    ("Monoamine", "CHEMBL1951", 1379),
    ("Opioid", "CHEMBL233", 840),
    ("Vanilloid", "CHEMBL4794", 1923),
]

DEFAULT_CORPUS_SEED = 8080

# per-target assay noise levels (relative scale) and trend share of
# the cluster offsets; targets without an entry draw a noise level
# from their own stream and use the default trend share
NOISE_LEVELS = {
    "A2a": 0.12,
    "Dopamine": 1.3,
    "Dihydrofolate": 1.0,
}
TREND_SHARES = {
    "Dopamine": 0.62,
    "Dihydrofolate": 0.62,
}
KICKER_LEVELS = {
    "A2a": 0.25,
}


def _standardize(x):
    sd = x.std()
    return (x - x.mean()) / (sd if sd > 0 else 1.0)


def synth_dataset(name, target_id, n, seed=DEFAULT_CORPUS_SEED, *,
                  n_motifs=24, cluster_size=4, motif_prob=0.35,
                  flip_prob=0.05, linear_scale=0.45, kicker_scale=None,
                  cluster_scale=2.5, offset_linear_mix=None, noise_scale=None,
                  outlier_prob=0.04, outlier_mult=6.0, dup_frac=None,
                  spread=1.1, center=6.0) -> Dataset:
    """One synthetic dataset of n molecules.

    Molecules belong to scaffold clusters. Every cluster template is a
    union of disjoint bit motifs, so all templates live in a span of
    rank ~n_motifs. Cluster activity offsets mix a motif-linear trend
    (share `offset_linear_mix`, readable from the bits of unseen
    clusters) with a random lookup that a linear model over the bits
    cannot fit, while trees resolve clusters by reading a few motif
    bits. A dense linear bit trend adds within-cluster variation; noise
    is t(3) with occasional one-sided assay failures that badly
    underestimate a potency. `dup_frac` is the fingerprint collision
    rate (identical bits, different activity); by default it grows with
    dataset size the way folded-fingerprint collisions pile up on large
    congeneric series.
    """
    rng = make_rng(derive_seed(seed, "synth", name, n))
    if noise_scale is None:
        noise_scale = NOISE_LEVELS.get(name, float(rng.uniform(0.3, 1.4)))
    if offset_linear_mix is None:
        offset_linear_mix = TREND_SHARES.get(name, 0.45)
    if kicker_scale is None:
        kicker_scale = KICKER_LEVELS.get(name, 0.8)
    if dup_frac is None:
        dup_frac = 0.0

    # bit layout: 4 bits per disjoint motif, remaining columns are
    # molecule-level noise bits with no cluster signature
    perm = rng.permutation(FP_BITS)
    motif_of_bit = np.full(FP_BITS, -1)
    for m in range(n_motifs):
        motif_of_bit[perm[m * 4 : (m + 1) * 4]] = m
    mid_cols = perm[n_motifs * 4 :]

    k = max(n_motifs + 8, int(round(n / cluster_size)))
    membership = rng.random((k, n_motifs)) < motif_prob  # cluster -> motifs
    templates = np.zeros((k, FP_BITS), dtype=np.uint8)
    for m in range(n_motifs):
        templates[:, motif_of_bit == m] = membership[:, m : m + 1]

    cluster = rng.integers(0, k, size=n)
    # most motifs are tight scaffold cores whose bits rarely flicker;
    # the rest vary freely molecule to molecule
    bit_flip = np.full(FP_BITS, flip_prob)
    tight = rng.random(n_motifs) < 0.6
    for m in range(n_motifs):
        if tight[m]:
            bit_flip[motif_of_bit == m] = rng.uniform(0.004, 0.015)
        else:
            bit_flip[motif_of_bit == m] = rng.uniform(0.03, 0.08)
    flips = rng.random((n, FP_BITS)) < bit_flip
    bits = (templates[cluster] ^ flips).astype(np.uint8)
    mid_density = rng.uniform(0.2, 0.5, size=len(mid_cols))
    bits[:, mid_cols] = rng.random((n, len(mid_cols))) < mid_density

    # fingerprint collisions: copy the bit pattern of an earlier
    # same-cluster molecule (the activities stay individual)
    if dup_frac > 0:
        order_in_cluster = {}
        for i in range(n):
            members = order_in_cluster.setdefault(int(cluster[i]), [])
            if members and rng.random() < dup_frac:
                bits[i] = bits[members[int(rng.integers(0, len(members)))]]
            members.append(i)

    w = rng.normal(size=FP_BITS) * (rng.random(FP_BITS) < 0.5)
    w[mid_cols] = 0.0
    linear = _standardize(bits @ w)
    # dense small effects across the scaffold-free columns: additive
    # models sum them exactly, greedy trees cannot afford the splits
    w_kick = rng.normal(size=len(mid_cols))
    kicker = _standardize(bits[:, mid_cols].astype(np.float64) @ w_kick)

    # mostly-positive motif weights: high-activity clusters are
    # motif-rich, so the top of the range is compositionally novel
    h = 1.0 + 0.5 * rng.normal(size=n_motifs)
    trend = _standardize(membership.astype(np.float64) @ h)
    lookup = _standardize(rng.normal(size=k))
    offsets = (np.sqrt(offset_linear_mix) * trend
               + np.sqrt(1.0 - offset_linear_mix) * lookup)

    noise = rng.normal(size=n)
    fails = rng.random(n) < outlier_prob
    noise[fails] = -np.abs(noise[fails]) * outlier_mult

    signal = (linear_scale * linear
              + kicker_scale * kicker
              + cluster_scale * _standardize(offsets[cluster])
              + noise_scale * noise)
    activities = center + spread * _standardize(signal)

    width = len(str(n))
    ids = [f"{name}-{i + 1:0{width}d}" for i in range(n)]
    return Dataset(name, target_id, ids, activities, bits)


def write_corpus(outdir, seed=DEFAULT_CORPUS_SEED, subset=None, **gen_kwargs):
    """Write the panel (or a named subset) as CSV files; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    wanted = set(subset) if subset else None
    paths = []
    for name, target_id, n in PANEL:
        if wanted is not None and name not in wanted:
            continue
        ds = synth_dataset(name, target_id, n, seed=seed, **gen_kwargs)
        path = os.path.join(outdir, f"{name}.csv")
        write_dataset(ds, path)
        paths.append(path)
    if wanted is not None and len(paths) != len(wanted):
        have = {name for name, _, _ in PANEL}
        raise ValueError(f"unknown dataset names: {sorted(wanted - have)}")
    return paths


def smallest_names(count=3):
    """Names of the `count` smallest panel datasets, ascending by size."""
    return [name for name, _, n in sorted(PANEL, key=lambda t: t[2])[:count]]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m activesplit.synth",
        description="generate the synthetic benchmark corpus")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--seed", type=int, default=DEFAULT_CORPUS_SEED)
    parser.add_argument("--datasets", help="comma-separated subset of names")
    args = parser.parse_args(argv)
    subset = args.datasets.split(",") if args.datasets else None
    paths = write_corpus(args.out, seed=args.seed, subset=subset)
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
