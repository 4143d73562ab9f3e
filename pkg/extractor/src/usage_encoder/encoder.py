"""Encode usage dumps into per-layer target-token vectors.

Input is the usage JSONL produced by the extraction stage: one object
per usage with the context window as pre-tokenized words and the target
word's offset. Output is the embedding wire format: a JSON header with
target/period/dimension/layer_count, then one record per (usage, layer)
holding the target token's vector from that encoder output layer.

Alignment and aggregation rules:
- The context's surface forms are fed to the tokenizer as a word list;
  the fast-tokenizer word alignment maps the target word to its
  subword pieces.
- When the target splits into several pieces, the emitted vector is the
  arithmetic mean of the piece vectors.
- Contexts that exceed the maximum sequence length are truncated at the
  word level, symmetrically around the target: neighbors join the kept
  window on whichever side currently holds fewer subword pieces (ties
  go left) while the budget lasts. The target itself is never dropped;
  if its own pieces do not fit, encoding fails naming the usage.
- Layer indices are 1-based over encoder output layers; the input
  embedding layer is never exported.

Assumes a word-local (WordPiece-style) tokenizer so that slicing the
word window does not change per-word tokenization.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

DEFAULT_MODEL = "dbmdz/bert-base-italian-xxl-cased"


class EncodingError(Exception):
    """Bad input dump, unusable model, or a usage that cannot be encoded."""


@dataclass(frozen=True)
class EncoderConfig:
    model: str = DEFAULT_MODEL
    max_length: int = 512
    device: str = "cpu"
    batch_size: int = 8

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_length < 3:
            raise ValueError(f"max_length must be >= 3, got {self.max_length}")


@dataclass(frozen=True)
class UsageRecord:
    target: str
    period: str
    sentence_index: int
    token_index: int
    target_offset: int
    words: tuple[str, ...]

    @property
    def usage_key(self) -> str:
        return f"{self.period}:{self.sentence_index}:{self.token_index}"


def read_usage_dump(path: str | Path) -> list[UsageRecord]:
    """Parse the usage JSONL; all records must share one target/period."""
    records: list[UsageRecord] = []
    seen_keys: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as err:
                raise EncodingError(f"{path}:{lineno}: invalid JSON ({err})") from None
            try:
                record = UsageRecord(
                    target=raw["target"],
                    period=raw["period"],
                    sentence_index=raw["sentence_index"],
                    token_index=raw["token_index"],
                    target_offset=raw["target_offset"],
                    words=tuple(tok["surface"] for tok in raw["tokens"]),
                )
            except (KeyError, TypeError) as err:
                raise EncodingError(f"{path}:{lineno}: bad usage record ({err})") from None
            if not 0 <= record.target_offset < len(record.words):
                raise EncodingError(
                    f"{path}:{lineno}: target_offset {record.target_offset} outside context"
                )
            if record.usage_key in seen_keys:
                raise EncodingError(f"{path}:{lineno}: duplicate usage {record.usage_key}")
            seen_keys.add(record.usage_key)
            records.append(record)
    if not records:
        raise EncodingError(f"{path}: no usages to encode")
    identities = {(r.target, r.period) for r in records}
    if len(identities) != 1:
        raise EncodingError(f"{path}: mixed targets/periods {sorted(identities)}")
    return records


def mean_pool(piece_vectors: np.ndarray) -> np.ndarray:
    """Mean over the piece axis; a single piece passes through unchanged."""
    if piece_vectors.ndim != 2 or piece_vectors.shape[0] == 0:
        raise ValueError(f"expected (n_pieces, dim) with n_pieces >= 1, got {piece_vectors.shape}")
    if piece_vectors.shape[0] == 1:
        return piece_vectors[0]
    return piece_vectors.mean(axis=0)


def select_window(piece_counts: Sequence[int], target_index: int,
                  piece_budget: int) -> tuple[int, int]:
    """Word span [lo, hi] around the target fitting the piece budget.

    Grows outward from the target, adding the neighbor on the side with
    fewer kept pieces (tie: left), so the window stays balanced.
    """
    target_pieces = piece_counts[target_index]
    if target_pieces > piece_budget:
        raise EncodingError(
            f"target pieces ({target_pieces}) exceed the sequence budget ({piece_budget})"
        )
    lo = hi = target_index
    used = target_pieces
    left_used = right_used = 0
    while True:
        fits_left = lo > 0 and used + piece_counts[lo - 1] <= piece_budget
        fits_right = hi < len(piece_counts) - 1 and used + piece_counts[hi + 1] <= piece_budget
        if not fits_left and not fits_right:
            return lo, hi
        if fits_left and (not fits_right or left_used <= right_used):
            lo -= 1
            left_used += piece_counts[lo]
            used += piece_counts[lo]
        else:
            hi += 1
            right_used += piece_counts[hi]
            used += piece_counts[hi]


def _load_model(config: EncoderConfig):
    import torch
    from transformers import AutoModel, AutoTokenizer

    try:
        tokenizer = AutoTokenizer.from_pretrained(config.model, use_fast=True)
        model = AutoModel.from_pretrained(config.model)
    except Exception as err:
        raise EncodingError(f"cannot load model {config.model!r}: {err}") from None
    if not getattr(tokenizer, "is_fast", False):
        raise EncodingError(
            f"model {config.model!r} has no fast tokenizer; word alignment needs one"
        )
    model.eval()
    model.to(torch.device(config.device))
    return tokenizer, model


def _piece_counts(tokenizer, words: Sequence[str]) -> list[int]:
    encoding = tokenizer(list(words), is_split_into_words=True, add_special_tokens=False)
    counts = [0] * len(words)
    for word_index in encoding.word_ids():
        if word_index is not None:
            counts[word_index] += 1
    return counts


def _windowed_words(tokenizer, record: UsageRecord,
                    max_length: int) -> tuple[list[str], int]:
    """The (possibly truncated) word list and the target's index in it."""
    counts = _piece_counts(tokenizer, record.words)
    if counts[record.target_offset] == 0:
        raise EncodingError(
            f"usage {record.usage_key}: tokenizer drops the target token"
            f" {record.words[record.target_offset]!r}"
        )
    budget = max_length - tokenizer.num_special_tokens_to_add()
    total = sum(counts)
    if total <= budget:
        return list(record.words), record.target_offset
    try:
        lo, hi = select_window(counts, record.target_offset, budget)
    except EncodingError as err:
        raise EncodingError(f"usage {record.usage_key}: {err}") from None
    return list(record.words[lo : hi + 1]), record.target_offset - lo


def _batches(items: list, size: int) -> Iterator[list]:
    for start in range(0, len(items), size):
        yield items[start : start + size]


def encode_usages(dump_path: str | Path, config: EncoderConfig,
                  out_path: str | Path) -> None:
    """Run the encoder over a usage dump and write the wire-format file."""
    import torch

    records = read_usage_dump(dump_path)
    tokenizer, model = _load_model(config)
    device = torch.device(config.device)

    prepared = [_windowed_words(tokenizer, record, config.max_length)
                for record in records]

    target = records[0].target
    period = records[0].period
    dimension = int(model.config.hidden_size)
    layer_count: int | None = None

    out_path = Path(out_path)
    fd, tmp_name = tempfile.mkstemp(dir=out_path.parent,
                                    prefix=out_path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            header_written = False
            for batch_indexes in _batches(list(range(len(records))), config.batch_size):
                word_lists = [prepared[i][0] for i in batch_indexes]
                encoding = tokenizer(
                    word_lists,
                    is_split_into_words=True,
                    padding=True,
                    return_tensors="pt",
                )
                word_ids_per_row = [encoding.word_ids(row) for row in range(len(word_lists))]
                encoding = encoding.to(device)
                with torch.no_grad():
                    output = model(**encoding, output_hidden_states=True)
                hidden_states = output.hidden_states  # [0] is the input embedding
                if layer_count is None:
                    layer_count = len(hidden_states) - 1
                    handle.write(json.dumps(
                        {"target": target, "period": period,
                         "dimension": dimension, "layer_count": layer_count},
                        ensure_ascii=False,
                    ) + "\n")
                    header_written = True
                for row, usage_index in enumerate(batch_indexes):
                    target_word = prepared[usage_index][1]
                    positions = [
                        pos for pos, word in enumerate(word_ids_per_row[row])
                        if word == target_word
                    ]
                    if not positions:
                        raise EncodingError(
                            f"usage {records[usage_index].usage_key}: target lost in encoding"
                        )
                    for layer in range(1, layer_count + 1):
                        pieces = hidden_states[layer][row, positions, :]
                        vector = mean_pool(pieces.cpu().numpy().astype(np.float64))
                        values = [float(np.float32(x)) for x in vector]
                        handle.write(json.dumps(
                            {"usage_key": records[usage_index].usage_key,
                             "layer": layer, "vector": values},
                            ensure_ascii=False,
                        ) + "\n")
            assert header_written
        os.replace(tmp_name, out_path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
