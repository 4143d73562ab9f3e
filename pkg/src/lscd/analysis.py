"""Error-analysis probes over extracted usages.

Two quantitative signals that explain ranking mistakes: the share of
usages whose target token is capitalized (proper-noun contamination),
and the share dominated by a fixed collocation pattern around the
target (a frequent phrase masking change).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from ._util import atomic_write
from .corpus import Usage
from .errors import LscdError


@dataclass(frozen=True)
class UsageProfile:
    target: str
    period_id: str
    total_usages: int
    uppercase_count: int
    collocation_counts: Mapping[str, int]


def _uppercase_count(usages: Sequence[Usage]) -> int:
    return sum(1 for u in usages if u.context[u.target_offset].surface[:1].isupper())


def uppercase_share(usages: Sequence[Usage]) -> float:
    """Fraction of usages whose target surface starts with an upper-case letter.

    Fully capitalized tokens count; the probe is about initial capitals.
    """
    if not usages:
        raise LscdError("uppercase_share needs at least one usage")
    return _uppercase_count(usages) / len(usages)


def _pattern_target_position(pattern: Sequence[str], target: str) -> int:
    target_folded = target.casefold()
    positions = [i for i, lemma in enumerate(pattern) if lemma.casefold() == target_folded]
    if len(positions) != 1:
        raise LscdError(
            f"pattern {list(pattern)!r} must contain the target {target!r}"
            f" exactly once, found {len(positions)} times"
        )
    return positions[0]


def _collocation_count(usages: Sequence[Usage], pattern: Sequence[str]) -> int:
    position = _pattern_target_position(pattern, usages[0].target)
    pattern_folded = [lemma.casefold() for lemma in pattern]
    hits = 0
    for usage in usages:
        start = usage.target_offset - position
        end = start + len(pattern_folded)
        if start < 0 or end > len(usage.context):
            continue
        window = [tok.lemma.casefold() for tok in usage.context[start:end]]
        if window == pattern_folded:
            hits += 1
    return hits


def collocation_share(usages: Sequence[Usage], pattern: Sequence[str]) -> float:
    """Fraction of usages whose context realizes `pattern` around the target.

    The pattern is an ordered lemma sequence containing the target lemma
    exactly once; it matches when its lemmas occur contiguously in the
    context with the pattern's target position aligned to the usage's
    target token. Lemma comparison is case-folded.
    """
    if not usages:
        raise LscdError("collocation_share needs at least one usage")
    return _collocation_count(usages, pattern) / len(usages)


def build_profile(usages: Sequence[Usage],
                  patterns: Sequence[Sequence[str]] = ()) -> UsageProfile:
    """UsageProfile for one (target, period) usage sequence."""
    if not usages:
        raise LscdError("cannot profile an empty usage sequence")
    first = usages[0]
    return UsageProfile(
        target=first.target,
        period_id=first.period_id,
        total_usages=len(usages),
        uppercase_count=_uppercase_count(usages),
        collocation_counts={
            " ".join(pattern): _collocation_count(usages, pattern)
            for pattern in patterns
        },
    )


def write_analysis_report(profiles: Sequence[UsageProfile], path: str | Path) -> None:
    """TSV target<TAB>period<TAB>metric<TAB>value, shares at 4 decimals."""
    with atomic_write(path) as handle:
        handle.write("target\tperiod\tmetric\tvalue\n")
        for profile in profiles:
            share = profile.uppercase_count / profile.total_usages
            handle.write(
                f"{profile.target}\t{profile.period_id}\tuppercase_share\t{share:.4f}\n"
            )
            for pattern, count in profile.collocation_counts.items():
                share = count / profile.total_usages
                handle.write(
                    f"{profile.target}\t{profile.period_id}\t"
                    f"collocation_share:{pattern}\t{share:.4f}\n"
                )
