#!/usr/bin/env python3
"""The whole pipeline through the command-line interface.

extract -> score -> label -> consensus -> evaluate, with a frequency
baseline on the side. Embedding files are synthesized here (in a real
run they come from an encoder that reads the usage dumps and writes
the same wire format).
"""

import subprocess
import sys
import zlib
from pathlib import Path

import numpy as np

from lscd import LayerEmbeddingSet, write_embedding_file

OUT = Path(__file__).parent / "_out" / "pipeline"
OUT.mkdir(parents=True, exist_ok=True)

TARGETS = [f"parola{i:02d}" for i in range(18)]
CHANGED = {TARGETS[i] for i in (0, 4, 7, 9, 14, 16)}


def run(*argv: object) -> None:
    command = [sys.executable, "-m", "lscd", *map(str, argv)]
    print("$", "lscd", *command[3:])
    subprocess.run(command, check=True)


# --- inputs: two corpora, a target list, gold labels ---
# Occurrence counts vary per target but independently of the gold labels,
# so the frequency baseline has signal to rank yet no free lunch.

for period in ("t1", "t2"):
    lines = []
    for i, target in enumerate(TARGETS):
        occurrences = 2 + (i % 4) if period == "t1" else 2 + ((3 * i + 1) % 5)
        for j in range(occurrences):
            lines += [f"filler{j}", f"{target}\t{target}", f"pad{period}", ""]
    (OUT / f"corpus_{period}.txt").write_text("\n".join(lines), encoding="utf-8")
(OUT / "targets.txt").write_text("".join(t + "\n" for t in TARGETS), encoding="utf-8")
(OUT / "gold.tsv").write_text(
    "".join(f"{t}\t{int(t in CHANGED)}\n" for t in TARGETS), encoding="utf-8"
)

# --- synthetic embeddings: changed targets drift between periods ---

emb_dir = OUT / "embeddings"
emb_dir.mkdir(exist_ok=True)
for target in TARGETS:
    for period in ("t1", "t2"):
        key = f"{target}#new" if (target in CHANGED and period == "t2") else target
        direction = np.random.default_rng(zlib.crc32(key.encode())).normal(size=8)
        noise_rng = np.random.default_rng(zlib.crc32(f"{target}:{period}".encode()))
        layers = {
            layer: (direction + noise_rng.normal(scale=0.05, size=(5, 8))).astype(np.float32)
            for layer in range(1, 5)
        }
        write_embedding_file(
            LayerEmbeddingSet(target=target, period_id=period, dimension=8,
                              layer_count=4,
                              usage_keys=tuple(f"{period}:{i}:0" for i in range(5)),
                              layers=layers),
            emb_dir / f"embeddings_{target}_{period}.jsonl",
        )

# --- the pipeline ---

run("extract",
    "--corpus-t1", OUT / "corpus_t1.txt",
    "--corpus-t2", OUT / "corpus_t2.txt",
    "--targets", OUT / "targets.txt",
    "--out-dir", OUT / "usages")

run("score",
    "--embeddings-dir", emb_dir,
    "--targets", OUT / "targets.txt",
    "--out", OUT / "scores.tsv")

run("label", "--scores", OUT / "scores.tsv",
    "--config", "first+last", "-k", "7", "--out", OUT / "pred_first_last.tsv")

run("consensus", "--scores", OUT / "scores.tsv",
    "--config", "first+last", "--config", "last4", "-k", "9",
    "--out", OUT / "pred_consensus.tsv")

run("baseline-freq",
    "--corpus-t1", OUT / "corpus_t1.txt",
    "--corpus-t2", OUT / "corpus_t2.txt",
    "--targets", OUT / "targets.txt", "-k", "6",
    "--out-scores", OUT / "freq_scores.tsv", "--out-pred", OUT / "freq_pred.tsv")

run("evaluate",
    "--pred", f"first+last,7={OUT / 'pred_first_last.tsv'}",
    "--pred", f"consensus,9={OUT / 'pred_consensus.tsv'}",
    "--pred", f"frequency={OUT / 'freq_pred.tsv'}",
    "--gold", OUT / "gold.tsv",
    "--out", OUT / "leaderboard.tsv")

print("\nleaderboard:")
print((OUT / "leaderboard.tsv").read_text(encoding="utf-8").rstrip())
