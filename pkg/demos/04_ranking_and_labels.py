#!/usr/bin/env python3
"""From graded scores to binary labels: top-k and consensus.

Binary change detection asks for 0/1 labels, but measures produce
graded scores. The bridge is ranking: sort targets by score and label
the top k as changed. When several configurations produce rankings,
a consensus labels only the targets that every ranking puts in its
top k — the agreement size tells how stable the decision is.
"""

from lscd import (
    ScoreTable,
    consensus_top_k,
    label_top_k,
    max_positives,
    rank_targets,
)

targets = [f"w{i:02d}" for i in range(18)]

table_a = ScoreTable.from_pairs("apd", "first+last", [
    (t, score) for t, score in zip(targets, [
        0.91, 0.88, 0.79, 0.74, 0.71, 0.64, 0.52, 0.50, 0.47,
        0.40, 0.35, 0.33, 0.30, 0.28, 0.22, 0.18, 0.12, 0.07,
    ])
])
table_b = ScoreTable.from_pairs("apd", "last4", [
    (t, score) for t, score in zip(targets, [
        0.91, 0.85, 0.80, 0.70, 0.73, 0.66, 0.46, 0.55, 0.41,
        0.47, 0.31, 0.36, 0.27, 0.30, 0.24, 0.15, 0.14, 0.05,
    ])
])

ranking_a = rank_targets(table_a)
ranking_b = rank_targets(table_b)
print("top 5 under first+last:", [t for t, _ in ranking_a.entries[:5]])
print("top 5 under last4:     ", [t for t, _ in ranking_b.entries[:5]])

# at most half of all targets should be labeled changed
print(f"\npositives guard for {len(targets)} targets: {max_positives(len(targets))}")

prediction = label_top_k(ranking_a, 7)
positives = sorted(t for t, v in prediction.items() if v == 1)
print(f"top-7 labeling under first+last: {positives}")

consensus, agreement = consensus_top_k([ranking_a, ranking_b], 9)
agreed = sorted(t for t, v in consensus.items() if v == 1)
print(f"\nconsensus of both top-9 sets: {agreed}")
print(f"agreement size: {agreement} of 9")
