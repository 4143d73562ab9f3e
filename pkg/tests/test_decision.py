from __future__ import annotations

import io

import pytest

from lscd.decision import (
    Ranking,
    consensus_top_k,
    label_top_k,
    max_positives,
    rank_targets,
    read_predictions,
    write_predictions,
)
from lscd.errors import LscdError, TargetMismatchError
from lscd.measures import ScoreTable


def table(pairs) -> ScoreTable:
    return ScoreTable.from_pairs("apd", "test", pairs)


def oracle_order(pairs):
    """Independent sort: lexicographic pass, then stable sort by score desc."""
    by_target = sorted(pairs, key=lambda item: item[0])
    return [t for t, _ in sorted(by_target, key=lambda item: -item[1])]


def test_rank_two_elements():
    ranking = rank_targets(table([("a", 0.3), ("b", 0.9)]))
    assert [t for t, _ in ranking.entries] == ["b", "a"]


def test_rank_breaks_ties_lexicographically():
    ranking = rank_targets(table([("b", 0.5), ("a", 0.5)]))
    assert [t for t, _ in ranking.entries] == ["a", "b"]


def test_rank_matches_oracle_sort(rng):
    for _ in range(25):
        scores = rng.permutation(18) / 7.0
        pairs = [(f"w{i:02d}", float(s)) for i, s in enumerate(scores)]
        ranking = rank_targets(table(pairs))
        assert [t for t, _ in ranking.entries] == oracle_order(pairs)


def test_label_top_zero_all_negative():
    ranking = rank_targets(table([("a", 0.1), ("b", 0.2)]))
    assert label_top_k(ranking, 0) == {"a": 0, "b": 0}


def test_label_top_seven_of_eighteen():
    pairs = [(f"w{i:02d}", 18.0 - i) for i in range(18)]
    prediction = label_top_k(rank_targets(table(pairs)), 7)
    assert sum(prediction.values()) == 7
    assert all(prediction[f"w{i:02d}"] == 1 for i in range(7))
    assert all(prediction[f"w{i:02d}"] == 0 for i in range(7, 18))


def test_label_full_ranking_all_positive():
    ranking = rank_targets(table([("a", 0.1), ("b", 0.2)]))
    assert label_top_k(ranking, 2) == {"a": 1, "b": 1}


def test_label_k_out_of_range():
    ranking = rank_targets(table([("a", 0.1)]))
    with pytest.raises(LscdError):
        label_top_k(ranking, 2)
    with pytest.raises(LscdError):
        label_top_k(ranking, -1)


def test_consensus_identical_rankings():
    pairs = [(f"w{i:02d}", 18.0 - i) for i in range(18)]
    ranking = rank_targets(table(pairs))
    prediction, agreement = consensus_top_k([ranking, ranking], 9)
    assert agreement == 9
    assert sum(prediction.values()) == 9


def test_consensus_disjoint_top_k():
    first = Ranking(entries=(("a", 4.0), ("b", 3.0), ("c", 2.0), ("d", 1.0)))
    second = Ranking(entries=(("c", 4.0), ("d", 3.0), ("a", 2.0), ("b", 1.0)))
    prediction, agreement = consensus_top_k([first, second], 2)
    assert agreement == 0
    assert set(prediction.values()) == {0}


def test_consensus_matches_set_intersection_oracle(rng):
    for _ in range(25):
        targets = [f"w{i:02d}" for i in range(12)]
        rankings = []
        for _ in range(3):
            scores = rng.permutation(12).astype(float)
            rankings.append(rank_targets(table(list(zip(targets, scores)))))
        k = int(rng.integers(0, 13))
        prediction, agreement = consensus_top_k(rankings, k)
        expected = set(targets)
        for ranking in rankings:
            expected &= {t for t, _ in ranking.entries[:k]}
        assert {t for t, v in prediction.items() if v == 1} == expected
        assert agreement == len(expected)
        # consensus positives are inside every constituent top-k set
        for ranking in rankings:
            assert expected <= ranking.top_targets(k)


def test_consensus_rejects_mismatched_targets():
    first = rank_targets(table([("a", 1.0), ("b", 0.5)]))
    second = rank_targets(table([("a", 1.0), ("c", 0.5)]))
    with pytest.raises(TargetMismatchError):
        consensus_top_k([first, second], 1)


def test_top_k_monotone_and_exact_counts(rng):
    scores = rng.integers(0, 5, size=10) / 4.0
    ranking = rank_targets(table([(f"w{i}", float(s)) for i, s in enumerate(scores)]))
    previous: set[str] = set()
    for k in range(11):
        prediction = label_top_k(ranking, k)
        positives = {t for t, v in prediction.items() if v == 1}
        assert len(positives) == k
        assert previous <= positives
        previous = positives


def test_rank_invariant_under_positive_affine_transforms(rng):
    # dyadic score grid keeps a*x + b exact, so order comparisons are stable
    pairs = [(f"w{i}", float(v) / 8.0) for i, v in enumerate(rng.integers(0, 32, size=15))]
    baseline = [t for t, _ in rank_targets(table(pairs)).entries]
    for a, b in [(0.5, 0.0), (2.0, 1.25), (4.0, -3.5), (1.0, 100.0)]:
        transformed = [(t, a * v + b) for t, v in pairs]
        assert [t for t, _ in rank_targets(table(transformed)).entries] == baseline


def test_max_positives_guard_value():
    assert max_positives(18) == 9
    assert max_positives(5) == 3
    assert max_positives(1) == 1


def test_prediction_file_roundtrip(tmp_path):
    prediction = {"zebra": 1, "alpha": 0, "mid": 1}
    path = tmp_path / "pred.tsv"
    write_predictions(prediction, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines == ["alpha\t0", "mid\t1", "zebra\t1"]  # sorted by target
    assert read_predictions(path) == prediction


def test_prediction_file_errors():
    with pytest.raises(LscdError, match="empty"):
        read_predictions(io.StringIO(""))
    with pytest.raises(LscdError, match="label"):
        read_predictions(io.StringIO("a\t2\n"))
    with pytest.raises(LscdError, match="duplicate"):
        read_predictions(io.StringIO("a\t1\na\t0\n"))
    with pytest.raises(LscdError, match="line 1"):
        read_predictions(io.StringIO("a,1\n"))
