"""Graded change measures between two usage vector sets.

APD averages the cosine distance over all ordered cross-period vector
pairs; COS is the cosine distance between the two set centroids. An
optional sampled APD mode draws a seeded subset from each set first
(without replacement, selected indices kept in ascending order, so a
sample that covers a whole set reproduces exhaustive mode exactly).

All accumulation is float64. Pairwise sums use numpy's pairwise
summation over the row-major distance matrix, which is a fixed order
for fixed input, so repeated runs give identical scores.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence, TextIO

import numpy as np

from ._util import atomic_write, derive_rng, sample_indices
from .embeddings import UsageVectorSet
from .errors import LscdError

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"


@dataclass(frozen=True)
class ApdMode:
    kind: str = EXHAUSTIVE
    sample_size: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in (EXHAUSTIVE, SAMPLED):
            raise ValueError(f"unknown APD mode {self.kind!r}")
        if self.kind == SAMPLED:
            if self.sample_size is None or self.sample_size < 1:
                raise ValueError("sampled mode needs sample_size >= 1")
            if self.seed is None:
                raise ValueError("sampled mode needs a seed")

    @classmethod
    def exhaustive(cls) -> "ApdMode":
        return cls(kind=EXHAUSTIVE)

    @classmethod
    def sampled(cls, sample_size: int, seed: int) -> "ApdMode":
        return cls(kind=SAMPLED, sample_size=sample_size, seed=seed)


@dataclass(frozen=True)
class ChangeScore:
    target: str
    value: float
    measure_id: str
    config_id: str


def cosine_distance(v: Sequence[float] | np.ndarray, w: Sequence[float] | np.ndarray) -> float:
    """1 - cos(v, w), clamped into [0, 2] against floating-point noise."""
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.shape != w.shape or v.ndim != 1:
        raise ValueError(f"dimension mismatch: {v.shape} vs {w.shape}")
    norm_v = float(np.linalg.norm(v))
    norm_w = float(np.linalg.norm(w))
    if norm_v == 0.0 or norm_w == 0.0:
        raise LscdError("cosine distance undefined for zero-norm vector")
    distance = 1.0 - float(np.dot(v, w)) / (norm_v * norm_w)
    return min(2.0, max(0.0, distance))


def _checked_norms(vector_set: UsageVectorSet, role: str) -> np.ndarray:
    if len(vector_set) == 0:
        raise LscdError(
            f"empty vector set for {vector_set.target!r}/{vector_set.period_id} ({role})"
        )
    norms = np.linalg.norm(vector_set.vectors, axis=1)
    zero_rows = np.flatnonzero(norms == 0.0)
    if zero_rows.size:
        raise LscdError(
            f"zero-norm vector at row {int(zero_rows[0])} of"
            f" {vector_set.target!r}/{vector_set.period_id} ({role}):"
            " cosine distance undefined for every pair involving it"
        )
    return norms


def _pairwise_mean_distance(v: np.ndarray, v_norms: np.ndarray,
                            w: np.ndarray, w_norms: np.ndarray) -> float:
    vn = v / v_norms[:, None]
    wn = w / w_norms[:, None]
    distances = 1.0 - vn @ wn.T
    np.clip(distances, 0.0, 2.0, out=distances)
    return float(distances.mean())


def apd(V: UsageVectorSet, W: UsageVectorSet, mode: ApdMode | None = None,
        config_id: str = "") -> ChangeScore:
    """Average pairwise cosine distance between the two sets.

    Exhaustive mode compares all |V| x |W| ordered pairs; sampled mode
    first draws min(sample_size, n) vectors from each set without
    replacement, seeding the generator per (target, period) so scores
    are reproducible across runs and platforms.
    """
    if mode is None:
        mode = ApdMode.exhaustive()
    if V.dimension != W.dimension:
        raise ValueError(f"dimension mismatch: {V.dimension} vs {W.dimension}")
    v_norms = _checked_norms(V, "V")
    w_norms = _checked_norms(W, "W")
    v, w = V.vectors, W.vectors
    if mode.kind == SAMPLED:
        assert mode.sample_size is not None and mode.seed is not None
        v_idx = sample_indices(len(V), min(mode.sample_size, len(V)),
                               derive_rng(mode.seed, V.target, V.period_id))
        w_idx = sample_indices(len(W), min(mode.sample_size, len(W)),
                               derive_rng(mode.seed, W.target, W.period_id))
        v, v_norms = v[v_idx], v_norms[v_idx]
        w, w_norms = w[w_idx], w_norms[w_idx]
    value = _pairwise_mean_distance(v, v_norms, w, w_norms)
    return ChangeScore(target=V.target, value=value, measure_id="apd", config_id=config_id)


def cos_centroid(V: UsageVectorSet, W: UsageVectorSet, config_id: str = "") -> ChangeScore:
    """Cosine distance between the arithmetic-mean vectors of the two sets."""
    if V.dimension != W.dimension:
        raise ValueError(f"dimension mismatch: {V.dimension} vs {W.dimension}")
    _checked_norms(V, "V")
    _checked_norms(W, "W")
    centroid_v = V.vectors.mean(axis=0)
    centroid_w = W.vectors.mean(axis=0)
    if np.linalg.norm(centroid_v) == 0.0 or np.linalg.norm(centroid_w) == 0.0:
        raise LscdError(
            f"zero-norm centroid for {V.target!r}: centroid cosine undefined"
        )
    value = cosine_distance(centroid_v, centroid_w)
    return ChangeScore(target=V.target, value=value, measure_id="cos", config_id=config_id)


# Registry of graded change measures, keyed by measure_id. Extensible:
# register new callables with the apd/cos signature minus the mode.
MeasureFn = Callable[[UsageVectorSet, UsageVectorSet, ApdMode | None, str], ChangeScore]


def _cos_adapter(V: UsageVectorSet, W: UsageVectorSet, mode: ApdMode | None,
                 config_id: str) -> ChangeScore:
    return cos_centroid(V, W, config_id=config_id)


MEASURES: dict[str, MeasureFn] = {
    "apd": apd,
    "cos": _cos_adapter,
}


# --- score tables ---

SCORE_HEADER = "target\tscore\tmeasure\tconfig"


@dataclass(frozen=True)
class ScoreTable:
    """Per-target graded change scores under one (measure, config)."""

    measure_id: str
    config_id: str
    scores: Mapping[str, float] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, measure_id: str, config_id: str,
                   pairs: Iterable[tuple[str, float]]) -> "ScoreTable":
        scores: dict[str, float] = {}
        for target, value in pairs:
            if target in scores:
                raise LscdError(
                    f"duplicate target {target!r} in score table"
                    f" ({measure_id}/{config_id})"
                )
            scores[target] = float(value)
        return cls(measure_id=measure_id, config_id=config_id, scores=scores)

    @classmethod
    def from_change_scores(cls, scores: Iterable[ChangeScore]) -> "ScoreTable":
        scores = list(scores)
        if not scores:
            raise LscdError("cannot build a score table from zero scores")
        measure_ids = {s.measure_id for s in scores}
        config_ids = {s.config_id for s in scores}
        if len(measure_ids) != 1 or len(config_ids) != 1:
            raise LscdError(
                f"mixed configurations in one table: {measure_ids} / {config_ids}"
            )
        return cls.from_pairs(
            scores[0].measure_id,
            scores[0].config_id,
            ((s.target, s.value) for s in scores),
        )

    def targets(self) -> set[str]:
        return set(self.scores)


def write_score_file(tables: Iterable[ScoreTable], path: str | Path) -> None:
    """TSV with header target/score/measure/config, scores at 6 decimals."""
    with atomic_write(path) as handle:
        handle.write(SCORE_HEADER + "\n")
        for table in tables:
            for target, value in table.scores.items():
                handle.write(
                    f"{target}\t{value:.6f}\t{table.measure_id}\t{table.config_id}\n"
                )


def read_score_file(source: str | Path | TextIO) -> list[ScoreTable]:
    """Parse a score TSV into one ScoreTable per (measure, config)."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            try:
                return read_score_file(handle)
            except LscdError as err:
                raise LscdError(f"{source}: {err}") from None
    lines = iter(enumerate(source, start=1))
    try:
        _, header = next(lines)
    except StopIteration:
        raise LscdError("empty score file") from None
    if header.rstrip("\n") != SCORE_HEADER:
        raise LscdError(f"bad score file header: {header.rstrip()!r}")
    grouped: dict[tuple[str, str], list[tuple[str, float]]] = {}
    for lineno, line in lines:
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise LscdError(f"line {lineno}: expected 4 fields, got {len(fields)}")
        target, score_text, measure_id, config_id = fields
        try:
            value = float(score_text)
        except ValueError:
            raise LscdError(f"line {lineno}: bad score {score_text!r}") from None
        grouped.setdefault((measure_id, config_id), []).append((target, value))
    return [
        ScoreTable.from_pairs(measure_id, config_id, pairs)
        for (measure_id, config_id), pairs in grouped.items()
    ]
