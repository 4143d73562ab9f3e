from __future__ import annotations

import json
from pathlib import Path

import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizerFast

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "il", "la", "cane", "corre", "rosso", "e", "campo", "verde",
    "ca", "##sa",            # "casa" splits into two pieces
    "pa", "##lm", "##are",   # "palmare" splits into three
]


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory) -> Path:
    """Tiny randomly initialized BERT-style model saved to disk."""
    directory = tmp_path_factory.mktemp("tiny-model")
    (directory / "vocab.txt").write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    (directory / "tokenizer_config.json").write_text(
        json.dumps({"tokenizer_class": "BertTokenizer", "do_lower_case": True}),
        encoding="utf-8",
    )
    tokenizer = BertTokenizerFast.from_pretrained(directory)
    tokenizer.save_pretrained(directory)

    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=16,
        num_hidden_layers=4,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=64,
    )
    torch.manual_seed(99)
    model = BertModel(config)
    model.eval()
    model.save_pretrained(directory)
    return directory


def usage_record(words: list[str], target_offset: int, target: str,
                 period: str = "t1", sentence_index: int = 0,
                 token_index: int | None = None) -> dict:
    return {
        "target": target,
        "period": period,
        "sentence_index": sentence_index,
        "token_index": token_index if token_index is not None else target_offset,
        "target_offset": target_offset,
        "window_radius": 1,
        "tokens": [{"surface": w, "lemma": w.lower()} for w in words],
    }


def write_dump(path: Path, records: list[dict]) -> Path:
    path.write_text(
        "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records),
        encoding="utf-8",
    )
    return path
