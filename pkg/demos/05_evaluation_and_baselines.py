#!/usr/bin/env python3
"""Evaluating predictions: accuracy, F1, Spearman, and two baselines.

The binary task is scored with classification accuracy against gold
labels (here: 6 of 18 targets changed). F1 scores the positive class;
Spearman's rho compares graded scores against graded gold. Every
submission should beat the majority baseline (all zeros) and a
frequency baseline built from corpus counts alone.
"""

import io
from pathlib import Path

from lscd import (
    GoldRecord,
    accuracy,
    build_leaderboard,
    display_score,
    f1,
    frequency_baseline,
    majority_baseline,
    parse_corpus,
    spearman,
    write_leaderboard,
)

OUT = Path(__file__).parent / "_out"
OUT.mkdir(exist_ok=True)

targets = [f"w{i:02d}" for i in range(18)]
gold = GoldRecord(labels={t: int(i < 6) for i, t in enumerate(targets)})

# A submission that finds 4 of the 6 changed words among its 7 positives.
predicted_positive = {"w00", "w01", "w02", "w03", "w06", "w07", "w08"}
submission = {t: int(t in predicted_positive) for t in targets}

acc = accuracy(submission, gold)
print(f"accuracy: {acc:.4f} (displayed {display_score(acc)})")
print(f"F1 of the positive class: {f1(submission, gold):.4f}")

majority = majority_baseline(targets)
print(f"majority baseline accuracy: {accuracy(majority, gold):.4f}"
      f" (displayed {display_score(accuracy(majority, gold))})")

# Spearman against graded gold, on a ranking that is mostly right.
graded_gold = {t: float(6 - i) if i < 6 else 0.0 for i, t in enumerate(targets)}
scores = {t: 1.0 - 0.05 * i for i, t in enumerate(targets)}
print(f"spearman vs graded gold: {spearman(scores, graded_gold):.4f}")

# Frequency baseline from two tiny corpora: a target whose relative
# frequency moves a lot scores high even without any embeddings.
def corpus_of(period: str, casa: int, campo: int) -> str:
    sentence = ["casa\tcasa"] * casa + ["campo\tcampo"] * campo + ["x\tx"] * 30
    return "\n".join(sentence) + "\n"

c1 = parse_corpus(io.StringIO(corpus_of("t1", casa=12, campo=3)), "t1")
c2 = parse_corpus(io.StringIO(corpus_of("t2", casa=2, campo=3)), "t2")
table, prediction = frequency_baseline(c1, c2, ["casa", "campo"], k=1)
print("\nfrequency-baseline scores:",
      {t: round(v, 4) for t, v in table.scores.items()})
print("frequency-baseline labels:", prediction)

# The leaderboard mirrors the shared-task report: one row per submission
# plus the majority baseline, best accuracy first.
rows = build_leaderboard({"apd-top7": submission}, gold)
path = OUT / "leaderboard.tsv"
write_leaderboard(rows, path)
print(f"\nleaderboard written to {path}:")
print(path.read_text(encoding="utf-8").rstrip())
