#!/usr/bin/env python3
"""Parsing time-sliced corpora and extracting target usages.

A corpus file is one token per line (surface[TAB]lemma[TAB]pos), with
blank lines separating sentences. We parse one corpus per period,
pull out every occurrence of a target word with one sentence of
context on each side, and dump the usages as JSON Lines.
"""

import io
from pathlib import Path

from lscd import (
    ANY_TOKEN_FORM,
    LEMMA_FORM,
    count_frequency,
    extract_usages,
    parse_corpus,
    write_usages,
)

OUT = Path(__file__).parent / "_out"
OUT.mkdir(exist_ok=True)

# A toy period-1 corpus. "casa" appears as a plain noun, in inflected
# form ("case" with lemma casa), and capitalized at sentence start.
CORPUS_T1 = """\
La\tla\tDET
casa\tcasa\tNOUN
rossa\trosso\tADJ

Case\tcasa\tNOUN
e\te\tCONJ
palazzi\tpalazzo\tNOUN

Il\til\tDET
mercato\tmercato\tNOUN
"""

corpus = parse_corpus(io.StringIO(CORPUS_T1), "t1")
print(f"parsed {len(corpus.sentences)} sentences, {corpus.token_total()} tokens")

# any-token-form matching folds case and accepts either surface or lemma
for mode in (ANY_TOKEN_FORM, LEMMA_FORM):
    usages = extract_usages(corpus, "casa", mode=mode, window_radius=1)
    print(f"\nmode={mode}: {len(usages)} usages")
    for usage in usages:
        words = [t.surface for t in usage.context]
        words[usage.target_offset] = f"[{words[usage.target_offset]}]"
        print(f"  sentence {usage.sentence_index}: {' '.join(words)}")

# the same matching rules drive raw frequency counts
count, total = count_frequency(corpus, "casa", ANY_TOKEN_FORM)
print(f"\nfrequency of 'casa': {count}/{total} tokens")

# extraction caps usages with a seeded uniform sample; rerunning with the
# same seed reproduces the same subset, byte for byte after serialization
usages = extract_usages(corpus, "casa", max_usages=2, seed=42)
path = OUT / "usages_casa_t1.jsonl"
write_usages(usages, path)
print(f"\nwrote {len(usages)} of 2 capped usages to {path}")
print(path.read_text(encoding="utf-8").rstrip())
