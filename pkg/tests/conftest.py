from __future__ import annotations

import numpy as np
import pytest

from lscd.corpus import Token, Usage
from lscd.embeddings import UsageVectorSet


def corpus_text(sentences: list[list[tuple]]) -> str:
    """Render sentences of (surface[, lemma[, pos]]) tuples as corpus text."""
    blocks = []
    for sentence in sentences:
        lines = ["\t".join(fields) for fields in sentence]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def vector_set(rng: np.random.Generator, n: int, dim: int,
               target: str = "w", period: str = "t1") -> UsageVectorSet:
    """Random non-degenerate vector set (no zero norms by construction)."""
    vectors = rng.normal(size=(n, dim))
    vectors += np.sign(vectors) * 0.1  # keep every component away from 0
    return UsageVectorSet(target=target, period_id=period, vectors=vectors)


def simple_usage(words: list[str], target_offset: int, target: str | None = None,
                 period: str = "t1", lemmas: list[str] | None = None) -> Usage:
    """Usage over a one-sentence context given as surface words."""
    lemmas = lemmas if lemmas is not None else [w.lower() for w in words]
    tokens = tuple(Token(surface=w, lemma=l) for w, l in zip(words, lemmas))
    return Usage(
        target=target if target is not None else lemmas[target_offset],
        period_id=period,
        sentence_index=0,
        token_index=target_offset,
        context=tokens,
        target_offset=target_offset,
        window_radius=0,
    )


def fixture_embedding_set(target: str, period: str, changed: bool = False,
                          n_usages: int = 5, dim: int = 8,
                          layer_count: int = 4) -> "LayerEmbeddingSet":
    """Deterministic synthetic per-layer vectors for one (target, period).

    Stable targets share one direction across periods; changed targets
    point somewhere else in t2, so cross-period distances separate the
    two groups cleanly.
    """
    import zlib

    from lscd.embeddings import LayerEmbeddingSet

    direction_key = f"{target}#changed" if (changed and period == "t2") else target
    dir_rng = np.random.default_rng(zlib.crc32(direction_key.encode()))
    direction = dir_rng.normal(size=dim)
    direction /= np.linalg.norm(direction)
    noise_rng = np.random.default_rng(zlib.crc32(f"{target}:{period}".encode()))
    layers = {}
    for layer in range(1, layer_count + 1):
        noise = noise_rng.normal(scale=0.05, size=(n_usages, dim))
        layers[layer] = (direction + noise).astype(np.float32)
    return LayerEmbeddingSet(
        target=target,
        period_id=period,
        dimension=dim,
        layer_count=layer_count,
        usage_keys=tuple(f"{period}:{i}:0" for i in range(n_usages)),
        layers=layers,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240211)
