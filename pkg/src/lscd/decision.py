"""From graded scores to binary change labels.

Targets are ranked by descending score (ties broken by target, so the
order is fully deterministic), the top k are labeled 1, and a consensus
over several rankings labels 1 only the targets every ranking puts in
its top k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, TextIO

from ._util import atomic_write
from .errors import LscdError, TargetMismatchError
from .measures import ScoreTable

Prediction = dict[str, int]


@dataclass(frozen=True)
class Ranking:
    """(target, score) pairs, descending by score, ties by target."""

    entries: tuple[tuple[str, float], ...]

    def targets(self) -> set[str]:
        return {target for target, _ in self.entries}

    def top_targets(self, k: int) -> set[str]:
        if not 0 <= k <= len(self.entries):
            raise LscdError(f"k={k} outside [0, {len(self.entries)}]")
        return {target for target, _ in self.entries[:k]}

    def __len__(self) -> int:
        return len(self.entries)


def rank_targets(scores: ScoreTable) -> Ranking:
    ordered = sorted(scores.scores.items(), key=lambda item: (-item[1], item[0]))
    return Ranking(entries=tuple(ordered))


def label_top_k(ranking: Ranking, k: int) -> Prediction:
    """Label the first k of the ranking 1, everything else 0."""
    positives = ranking.top_targets(k)
    return {target: int(target in positives) for target, _ in ranking.entries}


def consensus_top_k(rankings: Sequence[Ranking], k: int) -> tuple[Prediction, int]:
    """Label 1 exactly the targets in every ranking's top k.

    Returns the prediction and the size of that agreement set.
    """
    if not rankings:
        raise LscdError("consensus needs at least one ranking")
    base = rankings[0].targets()
    for other in rankings[1:]:
        if other.targets() != base:
            raise TargetMismatchError(
                "rankings cover different target sets",
                missing=base - other.targets(),
                unexpected=other.targets() - base,
            )
    agreed = rankings[0].top_targets(k)
    for other in rankings[1:]:
        agreed &= other.top_targets(k)
    prediction = {target: int(target in agreed) for target in sorted(base)}
    return prediction, len(agreed)


def max_positives(n_targets: int) -> int:
    """Default guard: at most half of all targets may be labeled 1."""
    return math.ceil(n_targets / 2)


# --- prediction files ---


def write_predictions(prediction: Mapping[str, int], path: str | Path) -> None:
    """TSV target<TAB>label, one line per target, sorted by target."""
    with atomic_write(path) as handle:
        for target in sorted(prediction):
            handle.write(f"{target}\t{prediction[target]}\n")


def read_predictions(source: str | Path | TextIO) -> Prediction:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            try:
                return read_predictions(handle)
            except LscdError as err:
                raise LscdError(f"{source}: {err}") from None
    prediction: Prediction = {}
    for lineno, line in enumerate(source, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise LscdError(f"line {lineno}: expected target<TAB>label")
        target, label_text = fields
        if label_text not in ("0", "1"):
            raise LscdError(f"line {lineno}: label must be 0 or 1, got {label_text!r}")
        if target in prediction:
            raise LscdError(f"line {lineno}: duplicate target {target!r}")
        prediction[target] = int(label_text)
    if not prediction:
        raise LscdError("empty prediction file")
    return prediction
