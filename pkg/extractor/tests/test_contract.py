"""Contract checks against the downstream wire-format consumer: output
must parse with the pipeline's own parser, multi-piece targets must be
piece means, and batching must not change the vectors."""

from __future__ import annotations

import numpy as np
import pytest
import torch
from lscd.embeddings import parse_embedding_file
from transformers import AutoModel, AutoTokenizer

from usage_encoder import EncoderConfig, encode_usages

from conftest import usage_record, write_dump


def hooked_hidden_states(model_dir, words: list[str]):
    """Reference forward pass exposing per-piece hidden states."""
    tokenizer = AutoTokenizer.from_pretrained(model_dir, use_fast=True)
    model = AutoModel.from_pretrained(model_dir)
    model.eval()
    encoding = tokenizer([words], is_split_into_words=True, return_tensors="pt")
    with torch.no_grad():
        output = model(**encoding, output_hidden_states=True)
    return encoding.word_ids(0), output.hidden_states


def test_three_usage_dump_parses_via_pipeline_parser(tmp_path, model_dir):
    dump = write_dump(tmp_path / "usages_casa_t1.jsonl", [
        usage_record(["il", "casa", "corre"], 1, "casa", sentence_index=0),
        usage_record(["la", "casa", "verde"], 1, "casa", sentence_index=1),
        usage_record(["casa", "e", "campo"], 0, "casa", sentence_index=2),
    ])
    out = tmp_path / "embeddings_casa_t1.jsonl"
    encode_usages(dump, EncoderConfig(model=str(model_dir)), out)

    parsed = parse_embedding_file(out)
    assert parsed.target == "casa"
    assert parsed.period_id == "t1"
    assert parsed.dimension == 16
    assert parsed.layer_count == 4
    assert parsed.usage_keys == ("t1:0:1", "t1:1:1", "t1:2:0")
    assert parsed.layer_indices() == {1, 2, 3, 4}
    for layer in range(1, 5):
        assert parsed.layers[layer].shape == (3, 16)
    # header + 3 usages x 4 layers
    assert len(out.read_text(encoding="utf-8").splitlines()) == 13


def test_multi_subword_target_is_mean_of_piece_vectors(tmp_path, model_dir):
    words = ["il", "casa", "corre"]
    dump = write_dump(tmp_path / "u.jsonl", [usage_record(words, 1, "casa")])
    out = tmp_path / "e.jsonl"
    encode_usages(dump, EncoderConfig(model=str(model_dir), batch_size=1), out)
    parsed = parse_embedding_file(out)

    word_ids, hidden_states = hooked_hidden_states(model_dir, words)
    positions = [i for i, w in enumerate(word_ids) if w == 1]
    assert len(positions) == 2  # "casa" -> ca + ##sa
    for layer in range(1, 5):
        pieces = hidden_states[layer][0, positions, :].numpy().astype(np.float64)
        expected = np.float32(pieces.mean(axis=0))
        np.testing.assert_allclose(
            parsed.layers[layer][0], expected, rtol=1e-6, atol=1e-7
        )


def test_single_piece_target_equals_hidden_state(tmp_path, model_dir):
    words = ["il", "cane", "corre"]
    dump = write_dump(tmp_path / "u.jsonl", [usage_record(words, 1, "cane")])
    out = tmp_path / "e.jsonl"
    encode_usages(dump, EncoderConfig(model=str(model_dir), batch_size=1), out)
    parsed = parse_embedding_file(out)

    word_ids, hidden_states = hooked_hidden_states(model_dir, words)
    positions = [i for i, w in enumerate(word_ids) if w == 1]
    assert len(positions) == 1
    for layer in range(1, 5):
        piece = hidden_states[layer][0, positions[0], :].numpy()
        np.testing.assert_array_equal(parsed.layers[layer][0], np.float32(piece))


def test_rerun_is_byte_identical(tmp_path, model_dir):
    dump = write_dump(tmp_path / "u.jsonl", [
        usage_record(["il", "casa", "corre"], 1, "casa", sentence_index=0),
        usage_record(["la", "casa"], 1, "casa", sentence_index=1),
    ])
    config = EncoderConfig(model=str(model_dir))
    outputs = []
    for run in range(2):
        out = tmp_path / f"run{run}.jsonl"
        encode_usages(dump, config, out)
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_batch_size_does_not_change_vectors(tmp_path, model_dir):
    contexts = [
        ["il", "casa", "corre"],
        ["la", "casa", "verde", "e", "rosso"],
        ["casa"],
        ["campo", "e", "casa", "corre", "il", "cane"],
        ["rosso", "casa", "rosso"],
        ["il", "il", "casa"],
        ["casa", "campo"],
        ["verde", "casa", "cane", "corre"],
        ["e", "casa", "e"],
    ]
    records = [
        usage_record(words, words.index("casa"), "casa", sentence_index=i)
        for i, words in enumerate(contexts)
    ]
    dump = write_dump(tmp_path / "u.jsonl", records)

    outputs = {}
    for batch_size in (1, 8):
        out = tmp_path / f"e{batch_size}.jsonl"
        encode_usages(dump, EncoderConfig(model=str(model_dir), batch_size=batch_size), out)
        outputs[batch_size] = parse_embedding_file(out)

    assert outputs[1].usage_keys == outputs[8].usage_keys
    for layer in range(1, 5):
        np.testing.assert_allclose(
            outputs[1].layers[layer], outputs[8].layers[layer],
            rtol=1e-5, atol=1e-6,
        )


def test_twelve_layer_encoder_emits_thirty_six_records(tmp_path):
    import json

    from transformers import BertConfig, BertModel, BertTokenizerFast

    from conftest import VOCAB

    directory = tmp_path / "deep-model"
    directory.mkdir()
    (directory / "vocab.txt").write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    (directory / "tokenizer_config.json").write_text(
        json.dumps({"tokenizer_class": "BertTokenizer", "do_lower_case": True}),
        encoding="utf-8",
    )
    BertTokenizerFast.from_pretrained(directory).save_pretrained(directory)
    torch.manual_seed(5)
    model = BertModel(BertConfig(
        vocab_size=len(VOCAB), hidden_size=8, num_hidden_layers=12,
        num_attention_heads=2, intermediate_size=16, max_position_embeddings=32,
    ))
    model.eval()
    model.save_pretrained(directory)

    dump = write_dump(tmp_path / "u.jsonl", [
        usage_record(["il", "casa"], 1, "casa", sentence_index=i) for i in range(3)
    ])
    out = tmp_path / "e.jsonl"
    encode_usages(dump, EncoderConfig(model=str(directory)), out)
    assert len(out.read_text(encoding="utf-8").splitlines()) == 1 + 3 * 12
    parsed = parse_embedding_file(out)
    assert parsed.layer_count == 12
    assert parsed.layer_indices() == set(range(1, 13))


def test_truncated_context_equals_encoding_of_kept_window(tmp_path, model_dir):
    # 15 single-piece words around a 2-piece target; max_length 9 keeps
    # a budget of 7 pieces: the target plus a balanced word window
    left = ["il", "la", "cane", "corre", "rosso", "e", "campo"]
    right = ["verde", "il", "la", "cane", "corre", "rosso", "e", "campo"]
    words = left + ["casa"] + right
    dump = write_dump(tmp_path / "full.jsonl", [usage_record(words, len(left), "casa")])
    out_full = tmp_path / "full_out.jsonl"
    encode_usages(dump, EncoderConfig(model=str(model_dir), max_length=9,
                                      batch_size=1), out_full)

    # budget 7 = 2 target pieces + 5 neighbors: 3 left, 2 right (left on ties)
    window = left[-3:] + ["casa"] + right[:2]
    dump_window = write_dump(tmp_path / "window.jsonl",
                             [usage_record(window, 3, "casa")])
    out_window = tmp_path / "window_out.jsonl"
    encode_usages(dump_window, EncoderConfig(model=str(model_dir), max_length=9,
                                             batch_size=1), out_window)

    full = parse_embedding_file(out_full)
    sliced = parse_embedding_file(out_window)
    for layer in range(1, 5):
        np.testing.assert_allclose(full.layers[layer], sliced.layers[layer],
                                   rtol=1e-6, atol=1e-7)
