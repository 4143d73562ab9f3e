#!/usr/bin/env python3
"""Graded change measures: APD and centroid cosine.

APD averages the cosine distance over every cross-period pair of usage
vectors; a word whose usages drift between periods gets a high score.
COS compares only the two set centroids, which is cheaper but blind to
sense mixtures that leave the mean in place.
"""

import numpy as np

from lscd import ApdMode, UsageVectorSet, apd, cos_centroid, cosine_distance

rng = np.random.default_rng(21)
dim = 16


def around(direction: np.ndarray, n: int, spread: float) -> np.ndarray:
    return direction + rng.normal(scale=spread, size=(n, dim))


stable_direction = rng.normal(size=dim)
novel_direction = rng.normal(size=dim)

# A stable word: both periods sample the same region.
V_stable = UsageVectorSet("mercato", "t1", around(stable_direction, 40, 0.3))
W_stable = UsageVectorSet("mercato", "t2", around(stable_direction, 40, 0.3))

# A changing word: period 2 mixes the old sense with a new one.
W_mixed = np.vstack([
    around(stable_direction, 20, 0.3),
    around(novel_direction, 20, 0.3),
])
V_change = UsageVectorSet("palmare", "t1", around(stable_direction, 40, 0.3))
W_change = UsageVectorSet("palmare", "t2", W_mixed)

print("pairwise cosine distance of two example vectors:",
      round(cosine_distance(stable_direction, novel_direction), 4))

for name, V, W in [("stable", V_stable, W_stable), ("changing", V_change, W_change)]:
    print(f"\n{name} word:")
    print(f"  APD (exhaustive) = {apd(V, W).value:.4f}")
    print(f"  COS (centroids)  = {cos_centroid(V, W).value:.4f}")

# Sampled APD draws a seeded subset from each side before comparing.
# Same seed, same subsets, same score; a sample that covers both sets
# reproduces the exhaustive value exactly.
mode = ApdMode.sampled(sample_size=10, seed=3)
print("\nsampled APD on the changing word:")
print(f"  sample_size=10, seed=3 -> {apd(V_change, W_change, mode).value:.4f}")
print(f"  same call again        -> {apd(V_change, W_change, mode).value:.4f}")
covering = ApdMode.sampled(sample_size=40, seed=3)
assert apd(V_change, W_change, covering).value == apd(V_change, W_change).value
print("  sample_size=40 equals the exhaustive score exactly")
