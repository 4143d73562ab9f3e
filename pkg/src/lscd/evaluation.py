"""Scoring predictions against gold labels, plus task baselines.

Accuracy and F1 work on binary predictions; Spearman's rho (average
ranks for ties) correlates graded scores with graded gold. The majority
baseline predicts 0 everywhere; the frequency baseline scores each
target by the absolute difference of add-one-smoothed log2 relative
frequencies between the two corpora.

Exact values are kept throughout; reports print 4 decimals, and
`display_score` renders the 2-decimal round-half-even display form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from ._util import atomic_write
from .corpus import ANY_TOKEN_FORM, Corpus, count_frequency
from .decision import Prediction, label_top_k, rank_targets
from .errors import LscdError, TargetMismatchError
from .measures import ScoreTable

LEADERBOARD_HEADER = "submission\tthreshold\taccuracy"


@dataclass(frozen=True)
class GoldRecord:
    """Binary gold labels by target, with optional graded gold scores."""

    labels: Mapping[str, int]
    graded: Mapping[str, float] | None = None

    def __post_init__(self) -> None:
        bad = {t: v for t, v in self.labels.items() if v not in (0, 1)}
        if bad:
            raise LscdError(f"gold labels must be 0/1, got {bad}")

    def targets(self) -> set[str]:
        return set(self.labels)

    def positives(self) -> set[str]:
        return {t for t, v in self.labels.items() if v == 1}


def _check_targets(pred_targets: set[str], gold_targets: set[str]) -> None:
    if pred_targets != gold_targets:
        raise TargetMismatchError(
            "prediction and gold target sets differ",
            missing=gold_targets - pred_targets,
            unexpected=pred_targets - gold_targets,
        )


def accuracy(pred: Mapping[str, int], gold: GoldRecord) -> float:
    """Fraction of targets whose predicted label equals the gold label."""
    _check_targets(set(pred), gold.targets())
    agree = sum(1 for t, label in pred.items() if label == gold.labels[t])
    return agree / len(pred)


def f1(pred: Mapping[str, int], gold: GoldRecord) -> float:
    """F1 of the positive class (label 1); 0 when precision+recall is 0."""
    _check_targets(set(pred), gold.targets())
    tp = sum(1 for t, label in pred.items() if label == 1 and gold.labels[t] == 1)
    fp = sum(1 for t, label in pred.items() if label == 1 and gold.labels[t] == 0)
    fn = sum(1 for t, label in pred.items() if label == 0 and gold.labels[t] == 1)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks, tied values sharing the mean of their rank span."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(scores: ScoreTable | Mapping[str, float],
             graded_gold: Mapping[str, float]) -> float:
    """Spearman's rho between scores and graded gold over shared targets.

    Computed as Pearson correlation of average ranks. Constant input on
    either side leaves rho undefined and raises.
    """
    values = scores.scores if isinstance(scores, ScoreTable) else scores
    _check_targets(set(values), set(graded_gold))
    if len(values) < 2:
        raise LscdError(f"spearman needs at least 2 targets, got {len(values)}")
    targets = sorted(values)
    x = np.array([values[t] for t in targets], dtype=np.float64)
    y = np.array([graded_gold[t] for t in targets], dtype=np.float64)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise LscdError("spearman undefined for constant input")
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    # Rank deviations are exact multiples of 0.5, so for identical rank
    # vectors numerator and denominator are the same exact float and the
    # monotone case evaluates to exactly +/-1.0.
    numerator = float(np.dot(dx, dy))
    denominator = math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy)))
    return numerator / denominator


def majority_baseline(targets: Iterable[str]) -> Prediction:
    """Predict 0 (no change) for every target."""
    prediction = {target: 0 for target in targets}
    if not prediction:
        raise LscdError("majority baseline needs a non-empty target set")
    return prediction


def frequency_baseline(c1: Corpus, c2: Corpus, targets: Sequence[str],
                       k: int) -> tuple[ScoreTable, Prediction]:
    """Score targets by |log2((f1+1)/(N1+1)) - log2((f2+1)/(N2+1))|.

    Counts use any-token-form matching; add-one smoothing keeps scores
    finite for targets absent from one (or both) corpora. The prediction
    labels the top k of the resulting ranking.
    """
    n1 = c1.token_total()
    n2 = c2.token_total()
    pairs = []
    for target in targets:
        f_1, _ = count_frequency(c1, target, ANY_TOKEN_FORM)
        f_2, _ = count_frequency(c2, target, ANY_TOKEN_FORM)
        score = abs(math.log2((f_1 + 1) / (n1 + 1)) - math.log2((f_2 + 1) / (n2 + 1)))
        pairs.append((target, score))
    table = ScoreTable.from_pairs("freq", ANY_TOKEN_FORM, pairs)
    prediction = label_top_k(rank_targets(table), k)
    return table, prediction


def format_score(value: float) -> str:
    """Canonical 4-decimal report form."""
    return f"{value:.4f}"


def display_score(value: float) -> str:
    """2-decimal display with round-half-even on the exact float value."""
    return str(Decimal(value).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


# --- gold files ---


def read_gold(source: str | Path | TextIO) -> GoldRecord:
    """Binary gold TSV: target<TAB>label with labels 0/1."""
    labels = _read_two_column(source, {"0": 0, "1": 1}, "gold")
    return GoldRecord(labels=labels)


def read_graded_gold(source: str | Path | TextIO) -> dict[str, float]:
    """Graded gold TSV: target<TAB>score with real-valued scores."""
    return _read_two_column(source, None, "graded gold")


def _read_two_column(source, label_map, what):
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            try:
                return _read_two_column(handle, label_map, what)
            except LscdError as err:
                raise LscdError(f"{source}: {err}") from None
    out: dict = {}
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise LscdError(f"line {lineno}: expected target<TAB>value")
        target, value_text = fields
        if target in out:
            raise LscdError(f"line {lineno}: duplicate target {target!r}")
        if label_map is not None:
            if value_text not in label_map:
                raise LscdError(
                    f"line {lineno}: label must be one of {sorted(label_map)},"
                    f" got {value_text!r}"
                )
            out[target] = label_map[value_text]
        else:
            try:
                out[target] = float(value_text)
            except ValueError:
                raise LscdError(f"line {lineno}: bad value {value_text!r}") from None
    if not out:
        raise LscdError(f"empty {what} file")
    return out


# --- leaderboard ---


@dataclass(frozen=True)
class LeaderboardRow:
    submission: str
    threshold: str
    accuracy: float


def build_leaderboard(predictions: Mapping[str, Prediction],
                      gold: GoldRecord) -> list[LeaderboardRow]:
    """One row per submission plus the majority baseline, best first.

    The threshold column reports each submission's positive count; rows
    sort by accuracy descending, then submission name.
    """
    if not predictions:
        raise LscdError("no predictions to evaluate")
    rows = [
        LeaderboardRow(
            submission=name,
            threshold=str(sum(pred.values())),
            accuracy=accuracy(pred, gold),
        )
        for name, pred in predictions.items()
    ]
    rows.append(
        LeaderboardRow(
            submission="majority-baseline",
            threshold="-",
            accuracy=accuracy(majority_baseline(gold.targets()), gold),
        )
    )
    rows.sort(key=lambda row: (-row.accuracy, row.submission))
    return rows


def write_leaderboard(rows: Sequence[LeaderboardRow], path: str | Path) -> None:
    with atomic_write(path) as handle:
        handle.write(LEADERBOARD_HEADER + "\n")
        for row in rows:
            handle.write(f"{row.submission}\t{row.threshold}\t{format_score(row.accuracy)}\n")
