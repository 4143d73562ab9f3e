"""Small shared helpers: seeded RNG derivation and atomic file writes."""

from __future__ import annotations

import os
import tempfile
import zlib
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, TextIO

import numpy as np


def derive_rng(seed: int, *context: str) -> np.random.Generator:
    """PCG64 generator from an integer seed plus string context parts.

    The context parts (e.g. target lemma, period id) are hashed with CRC-32
    and fed into a SeedSequence together with the seed, so the same
    (seed, context) pair yields the same stream on every platform while
    different targets/periods get independent streams.
    """
    entropy = [seed & 0xFFFFFFFFFFFFFFFF]
    entropy.extend(zlib.crc32(part.encode("utf-8")) for part in context)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def sample_indices(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw `size` distinct indices from range(n), returned in ascending order.

    Sorting makes the selection a pure subset choice: when size == n the
    result is exactly arange(n), so downstream computations on a full
    sample are bit-identical to the unsampled ones.
    """
    if size > n:
        raise ValueError(f"cannot sample {size} items from {n}")
    picked = rng.choice(n, size=size, replace=False)
    picked.sort()
    return picked


@contextmanager
def atomic_write(path: str | Path) -> Iterator[TextIO]:
    """Write to a temp file in the target directory, then rename into place.

    A partially written output can never be observed under the final name.
    """
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent, prefix=path.name + ".", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            yield handle
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
