"""Time-sliced corpus parsing and target-word usage extraction.

Corpus files are UTF-8, one token per line as TAB-separated
``surface[\\tlemma[\\tpos]]`` fields, sentences separated by blank lines.
A missing lemma column defaults to the surface form.

Extraction matches a target either in any token form (case-folded surface
or lemma) or strictly by lemma, and caps the number of usages with a
seeded uniform sample without replacement. The cap counts token
occurrences, not sentences: a sentence containing the target twice
contributes two usages, each with its own token index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from ._util import atomic_write, derive_rng, sample_indices
from .errors import CorpusFormatError

ANY_TOKEN_FORM = "any-token-form"
LEMMA_FORM = "lemma-form"
MATCH_MODES = (ANY_TOKEN_FORM, LEMMA_FORM)

DEFAULT_WINDOW_RADIUS = 1


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str | None = None


@dataclass(frozen=True)
class Sentence:
    index: int
    tokens: tuple[Token, ...]


@dataclass(frozen=True)
class Corpus:
    period_id: str
    sentences: tuple[Sentence, ...]

    def token_total(self) -> int:
        return sum(len(s.tokens) for s in self.sentences)


@dataclass(frozen=True)
class Usage:
    """One occurrence of a target word with its sentence-window context.

    `context` concatenates the tokens of the target sentence plus up to
    `window_radius` sentences on each side; `target_offset` indexes the
    matched token within that concatenation.
    """

    target: str
    period_id: str
    sentence_index: int
    token_index: int
    context: tuple[Token, ...]
    target_offset: int
    window_radius: int


def _token_matches(token: Token, target_folded: str, mode: str) -> bool:
    if mode == ANY_TOKEN_FORM:
        return (
            token.surface.casefold() == target_folded
            or token.lemma.casefold() == target_folded
        )
    if mode == LEMMA_FORM:
        return token.lemma.casefold() == target_folded
    raise ValueError(f"unknown match mode {mode!r}; expected one of {MATCH_MODES}")


def parse_corpus(stream: Iterable[str], period_id: str) -> Corpus:
    """Parse a corpus file into sentences of tokens.

    Raises CorpusFormatError naming the 1-based line number for lines with
    more than three fields or with empty fields, and for empty input.
    """
    sentences: list[Sentence] = []
    block: list[Token] = []

    def flush() -> None:
        if block:
            sentences.append(Sentence(index=len(sentences), tokens=tuple(block)))
            block.clear()

    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip():
            flush()
            continue
        fields = line.split("\t")
        if len(fields) > 3:
            raise CorpusFormatError(
                f"line {lineno}: expected 1-3 tab-separated fields, got {len(fields)}"
            )
        if any(not f for f in fields):
            raise CorpusFormatError(f"line {lineno}: empty field")
        surface = fields[0]
        lemma = fields[1] if len(fields) >= 2 else surface
        pos = fields[2] if len(fields) == 3 else None
        block.append(Token(surface=surface, lemma=lemma, pos=pos))
    flush()

    if not sentences:
        raise CorpusFormatError("empty corpus: no sentences found")
    return Corpus(period_id=period_id, sentences=tuple(sentences))


def load_corpus(path: str | Path, period_id: str) -> Corpus:
    with open(path, encoding="utf-8") as handle:
        try:
            return parse_corpus(handle, period_id)
        except CorpusFormatError as err:
            raise CorpusFormatError(f"{path}: {err}") from None


def extract_usages(
    corpus: Corpus,
    target: str,
    mode: str = ANY_TOKEN_FORM,
    window_radius: int = DEFAULT_WINDOW_RADIUS,
    max_usages: int = 200,
    seed: int = 0,
) -> list[Usage]:
    """All usages of `target` in `corpus`, capped at `max_usages`.

    When more matches exist than the cap, a uniform sample without
    replacement is drawn with the given seed (stream derived per
    target/period, see _util.derive_rng). Output is ordered by
    (sentence_index, token_index) either way. Zero matches give an
    empty list, not an error.
    """
    if max_usages < 1:
        raise ValueError(f"max_usages must be >= 1, got {max_usages}")
    if window_radius < 0:
        raise ValueError(f"window_radius must be >= 0, got {window_radius}")

    target_folded = target.casefold()
    matches: list[Usage] = []
    n_sentences = len(corpus.sentences)
    for sentence in corpus.sentences:
        hit_positions = [
            i
            for i, token in enumerate(sentence.tokens)
            if _token_matches(token, target_folded, mode)
        ]
        if not hit_positions:
            continue
        lo = max(0, sentence.index - window_radius)
        hi = min(n_sentences - 1, sentence.index + window_radius)
        context: list[Token] = []
        offset_base = 0
        for si in range(lo, hi + 1):
            if si == sentence.index:
                offset_base = len(context)
            context.extend(corpus.sentences[si].tokens)
        for token_index in hit_positions:
            matches.append(
                Usage(
                    target=target,
                    period_id=corpus.period_id,
                    sentence_index=sentence.index,
                    token_index=token_index,
                    context=tuple(context),
                    target_offset=offset_base + token_index,
                    window_radius=window_radius,
                )
            )

    if len(matches) <= max_usages:
        return matches
    rng = derive_rng(seed, target, corpus.period_id)
    picked = sample_indices(len(matches), max_usages, rng)
    return [matches[i] for i in picked]


def count_frequency(corpus: Corpus, target: str, mode: str = ANY_TOKEN_FORM) -> tuple[int, int]:
    """(number of tokens matching `target` under `mode`, total token count)."""
    target_folded = target.casefold()
    count = 0
    total = 0
    for sentence in corpus.sentences:
        total += len(sentence.tokens)
        count += sum(
            1 for token in sentence.tokens if _token_matches(token, target_folded, mode)
        )
    return count, total


# --- usage dump wire format (JSON Lines) ---

_USAGE_FIELDS = {
    "target",
    "period",
    "sentence_index",
    "token_index",
    "target_offset",
    "window_radius",
    "tokens",
}


def _usage_to_json(usage: Usage) -> str:
    tokens = []
    for token in usage.context:
        obj: dict[str, str] = {"surface": token.surface, "lemma": token.lemma}
        if token.pos is not None:
            obj["pos"] = token.pos
        tokens.append(obj)
    record = {
        "target": usage.target,
        "period": usage.period_id,
        "sentence_index": usage.sentence_index,
        "token_index": usage.token_index,
        "target_offset": usage.target_offset,
        "window_radius": usage.window_radius,
        "tokens": tokens,
    }
    return json.dumps(record, ensure_ascii=False)


def write_usages(usages: Sequence[Usage], path: str | Path) -> None:
    """Dump usages as JSON Lines, atomically."""
    with atomic_write(path) as handle:
        for usage in usages:
            handle.write(_usage_to_json(usage) + "\n")


def _usage_from_record(record: dict, lineno: int) -> Usage:
    if not isinstance(record, dict):
        raise CorpusFormatError(f"line {lineno}: expected a JSON object")
    keys = set(record)
    if keys != _USAGE_FIELDS:
        missing = _USAGE_FIELDS - keys
        extra = keys - _USAGE_FIELDS
        raise CorpusFormatError(
            f"line {lineno}: bad usage record fields"
            f" (missing {sorted(missing)}, unexpected {sorted(extra)})"
        )
    tokens = []
    for tok in record["tokens"]:
        tok_keys = set(tok)
        if not {"surface", "lemma"} <= tok_keys or tok_keys - {"surface", "lemma", "pos"}:
            raise CorpusFormatError(f"line {lineno}: bad token fields {sorted(tok_keys)}")
        tokens.append(Token(surface=tok["surface"], lemma=tok["lemma"], pos=tok.get("pos")))
    usage = Usage(
        target=record["target"],
        period_id=record["period"],
        sentence_index=record["sentence_index"],
        token_index=record["token_index"],
        context=tuple(tokens),
        target_offset=record["target_offset"],
        window_radius=record["window_radius"],
    )
    if not 0 <= usage.target_offset < len(usage.context):
        raise CorpusFormatError(
            f"line {lineno}: target_offset {usage.target_offset} outside context"
            f" of length {len(usage.context)}"
        )
    return usage


def read_usages(source: str | Path | TextIO) -> list[Usage]:
    """Parse a usage dump written by write_usages."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return read_usages(handle)
    usages = []
    for lineno, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as err:
            raise CorpusFormatError(f"line {lineno}: invalid JSON ({err})") from None
        usages.append(_usage_from_record(record, lineno))
    return usages
