"""Per-layer usage vectors: wire format parsing and layer combination.

Wire format is JSON Lines, UTF-8. The first line is a header
``{"target": str, "period": str, "dimension": int, "layer_count": int}``;
every following line carries one (usage, layer) vector
``{"usage_key": str, "layer": int, "vector": [float, ...]}``.
Vectors are stored at 32-bit precision (floats are written in decimal
with round-trip-exact precision for 32-bit values); layer means are
accumulated at 64-bit precision.

Layer indices are 1-based over encoder output layers: "first" is the
first transformer output layer, "last" is layer_count. The two named
presets are ``first+last`` ({1, layer_count}) and ``last4``
({layer_count-3 .. layer_count}).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, TextIO

import numpy as np

from ._util import atomic_write
from .errors import EmbeddingFormatError

LAYER_PRESETS = ("first+last", "last4")


@dataclass(frozen=True)
class LayerEmbeddingSet:
    """Per-usage, per-layer vectors for one target word in one period.

    `layers` maps each layer index to an (n_usages, dimension) float32
    matrix whose rows follow `usage_keys` order. Every usage carries the
    same set of layer indices, all within [1, layer_count].
    """

    target: str
    period_id: str
    dimension: int
    layer_count: int
    usage_keys: tuple[str, ...]
    layers: Mapping[int, np.ndarray]

    def layer_indices(self) -> frozenset[int]:
        return frozenset(self.layers)

    def n_usages(self) -> int:
        return len(self.usage_keys)


@dataclass(frozen=True)
class LayerSpec:
    """Non-empty set of 1-based layer indices to average."""

    layer_indices: frozenset[int]

    def __post_init__(self) -> None:
        if not self.layer_indices:
            raise ValueError("LayerSpec needs at least one layer index")
        if any(i < 1 for i in self.layer_indices):
            raise ValueError(f"layer indices must be >= 1, got {sorted(self.layer_indices)}")


@dataclass(frozen=True)
class UsageVectorSet:
    """The combined vectors for one (target, period), one row per usage."""

    target: str
    period_id: str
    vectors: np.ndarray  # (n_usages, dimension) float64

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    def __len__(self) -> int:
        return int(self.vectors.shape[0])


def resolve_layer_spec(spec: str, layer_count: int) -> LayerSpec:
    """Turn a preset name or comma-separated index list into a LayerSpec."""
    if spec == "first+last":
        return LayerSpec(frozenset({1, layer_count}))
    if spec == "last4":
        if layer_count < 4:
            raise ValueError(f"preset 'last4' needs layer_count >= 4, got {layer_count}")
        return LayerSpec(frozenset(range(layer_count - 3, layer_count + 1)))
    try:
        indices = frozenset(int(part) for part in spec.split(","))
    except ValueError:
        raise ValueError(
            f"unknown layer spec {spec!r}: expected one of {LAYER_PRESETS} "
            "or comma-separated indices like '1,12'"
        ) from None
    return LayerSpec(indices)


def parse_embedding_file(source: str | Path | TextIO) -> LayerEmbeddingSet:
    """Parse the embedding wire format, validating all set invariants."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            try:
                return parse_embedding_file(handle)
            except EmbeddingFormatError as err:
                raise EmbeddingFormatError(f"{source}: {err}") from None

    lines = iter(enumerate(source, start=1))
    header = None
    for lineno, line in lines:
        if line.strip():
            header = _parse_header(line, lineno)
            break
    if header is None:
        raise EmbeddingFormatError("empty embedding file: missing header line")
    target, period, dimension, layer_count = header

    usage_keys: list[str] = []
    key_order: dict[str, int] = {}
    # per usage: layer -> vector, kept as lists until shapes are validated
    per_usage: dict[str, dict[int, np.ndarray]] = {}
    for lineno, line in lines:
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            raise EmbeddingFormatError(f"line {lineno}: invalid JSON ({err})") from None
        if not isinstance(record, dict) or set(record) != {"usage_key", "layer", "vector"}:
            raise EmbeddingFormatError(
                f"line {lineno}: expected fields usage_key, layer, vector"
            )
        key = record["usage_key"]
        layer = record["layer"]
        vector = record["vector"]
        if not isinstance(key, str) or not isinstance(layer, int):
            raise EmbeddingFormatError(f"line {lineno}: bad usage_key or layer type")
        if not 1 <= layer <= layer_count:
            raise EmbeddingFormatError(
                f"line {lineno}: unknown layer index {layer} for usage_key {key!r}"
                f" (layer_count is {layer_count})"
            )
        if len(vector) != dimension:
            raise EmbeddingFormatError(
                f"line {lineno}: dimension mismatch for usage_key {key!r}:"
                f" got {len(vector)}, expected {dimension}"
            )
        if key not in key_order:
            key_order[key] = len(usage_keys)
            usage_keys.append(key)
            per_usage[key] = {}
        if layer in per_usage[key]:
            raise EmbeddingFormatError(
                f"line {lineno}: duplicate usage_key {key!r} for layer {layer}"
            )
        per_usage[key][layer] = np.asarray(vector, dtype=np.float32)

    if not usage_keys:
        raise EmbeddingFormatError("embedding file has a header but no vector records")

    layer_set = frozenset(per_usage[usage_keys[0]])
    for key in usage_keys:
        if frozenset(per_usage[key]) != layer_set:
            raise EmbeddingFormatError(
                f"usage_key {key!r} carries layers {sorted(per_usage[key])},"
                f" expected {sorted(layer_set)} like the first usage"
            )

    layers = {
        layer: np.stack([per_usage[key][layer] for key in usage_keys])
        for layer in sorted(layer_set)
    }
    return LayerEmbeddingSet(
        target=target,
        period_id=period,
        dimension=dimension,
        layer_count=layer_count,
        usage_keys=tuple(usage_keys),
        layers=layers,
    )


def _parse_header(line: str, lineno: int) -> tuple[str, str, int, int]:
    try:
        header = json.loads(line)
    except json.JSONDecodeError as err:
        raise EmbeddingFormatError(f"line {lineno}: invalid JSON header ({err})") from None
    if not isinstance(header, dict) or set(header) != {
        "target",
        "period",
        "dimension",
        "layer_count",
    }:
        raise EmbeddingFormatError(
            f"line {lineno}: header must have fields target, period, dimension, layer_count"
        )
    dimension = header["dimension"]
    layer_count = header["layer_count"]
    if not isinstance(dimension, int) or dimension < 1:
        raise EmbeddingFormatError(f"line {lineno}: dimension must be a positive integer")
    if not isinstance(layer_count, int) or layer_count < 1:
        raise EmbeddingFormatError(f"line {lineno}: layer_count must be a positive integer")
    return header["target"], header["period"], dimension, layer_count


def write_embedding_file(embedding_set: LayerEmbeddingSet, path: str | Path) -> None:
    """Serialize a LayerEmbeddingSet back to the wire format, atomically."""
    with atomic_write(path) as handle:
        handle.write(format_embedding_header(
            embedding_set.target,
            embedding_set.period_id,
            embedding_set.dimension,
            embedding_set.layer_count,
        ) + "\n")
        for row, key in enumerate(embedding_set.usage_keys):
            for layer in sorted(embedding_set.layers):
                vector = embedding_set.layers[layer][row]
                handle.write(format_embedding_record(key, layer, vector) + "\n")


def format_embedding_header(target: str, period: str, dimension: int, layer_count: int) -> str:
    return json.dumps(
        {"target": target, "period": period, "dimension": dimension, "layer_count": layer_count},
        ensure_ascii=False,
    )


def format_embedding_record(usage_key: str, layer: int, vector: Iterable[float]) -> str:
    # float() of a float32 is exact in float64, and json writes shortest
    # round-trip decimals, so parsing back to float32 recovers every bit.
    values = [float(np.float32(x)) for x in vector]
    return json.dumps(
        {"usage_key": usage_key, "layer": layer, "vector": values}, ensure_ascii=False
    )


def combine_layers(embedding_set: LayerEmbeddingSet, spec: LayerSpec) -> UsageVectorSet:
    """Component-wise mean of the selected layers, per usage.

    Accumulates in float64; usage order is preserved. Singleton specs are
    the identity on that layer's vectors.
    """
    missing = sorted(spec.layer_indices - set(embedding_set.layers))
    if missing:
        raise ValueError(
            f"layers {missing} not present in embedding set for"
            f" {embedding_set.target!r}/{embedding_set.period_id}"
            f" (has {sorted(embedding_set.layers)})"
        )
    selected = [embedding_set.layers[i].astype(np.float64) for i in sorted(spec.layer_indices)]
    combined = sum(selected[1:], start=selected[0]) / len(selected)
    return UsageVectorSet(
        target=embedding_set.target,
        period_id=embedding_set.period_id,
        vectors=combined,
    )
