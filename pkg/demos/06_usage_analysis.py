#!/usr/bin/env python3
"""Why did a ranking go wrong? Two quantitative probes.

A word can look changed because one period is full of proper nouns
(capitalized uses), or look stable because a fixed phrase dominates
both periods and floods APD with near-identical pairs. Both effects
are measurable from the extracted usages alone.
"""

from pathlib import Path

from lscd import Token, Usage, build_profile, collocation_share, uppercase_share
from lscd.analysis import write_analysis_report

OUT = Path(__file__).parent / "_out"
OUT.mkdir(exist_ok=True)


def usage(words: list[str], offset: int, target: str, period: str) -> Usage:
    tokens = tuple(Token(surface=w, lemma=w.lower()) for w in words)
    return Usage(target=target, period_id=period, sentence_index=0,
                 token_index=offset, context=tokens, target_offset=offset,
                 window_radius=0)


# Period with proper-noun contamination: 31 of 100 uses are capitalized.
t1_usages = [
    usage(["il", "Cappuccio" if i < 31 else "cappuccio", "rosso"], 1,
          target="cappuccio", period="t1")
    for i in range(100)
]
print(f"uppercase share in t1: {uppercase_share(t1_usages):.2f}")

# Period dominated by one phrase: 70 of 100 uses sit inside
# "cavallino rampante", so most usage pairs compare like with like.
t0_usages = [
    usage(["il", "cavallino" if i < 70 else "cavallo", "rampante"], 2,
          target="rampante", period="t1")
    for i in range(100)
]
share = collocation_share(t0_usages, ["cavallino", "rampante"])
print(f"'cavallino rampante' share: {share:.2f}")

# A longer pattern can only match a subset of a shorter one.
longer = collocation_share(t0_usages, ["il", "cavallino", "rampante"])
print(f"'il cavallino rampante' share: {longer:.2f} (never above the shorter)")

profile = build_profile(t0_usages, patterns=[["cavallino", "rampante"]])
path = OUT / "analysis.tsv"
write_analysis_report([profile], path)
print(f"\nanalysis report written to {path}:")
print(path.read_text(encoding="utf-8").rstrip())
