# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import numpy as np
import pytest

from pseudolay.document import DocumentEntities, EntityRecord
from pseudolay.evaluate import (
    EvalReport,
    assignment_cost,
    evaluate_corpus,
    exact_match,
    format_table,
    mean_edit_distance,
    normalize_entity_text,
    word_levenshtein,
)
from pseudolay.util.errors import ValidationError


def entities(*texts, type="attorney_profile"):
    return [EntityRecord(type, text) for text in texts]


def dp_levenshtein(a, b):
    table = np.zeros((len(a) + 1, len(b) + 1), dtype=int)
    table[:, 0] = np.arange(len(a) + 1)
    table[0, :] = np.arange(len(b) + 1)
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i, j] = min(
                table[i - 1, j] + 1,
                table[i, j - 1] + 1,
                table[i - 1, j - 1] + (a[i - 1] != b[j - 1]),
            )
    return int(table[-1, -1])


def exhaustive_cost(cost, pred_lengths, gold_lengths):
    """Cheapest partial matching by enumerating every choice per pred row."""

    def best(i, used):
        if i == len(pred_lengths):
            return sum(g for j, g in enumerate(gold_lengths) if j not in used)
        options = [pred_lengths[i] + best(i + 1, used)]
        for j in range(len(gold_lengths)):
            if j not in used:
                options.append(cost[i][j] + best(i + 1, used | {j}))
        return min(options)

    return best(0, frozenset())


def random_sequence(rng, max_len, vocabulary="abcd"):
    return [vocabulary[k] for k in rng.integers(len(vocabulary), size=rng.integers(0, max_len + 1))]


def test_normalize_entity_text():
    assert normalize_entity_text(["John", "Smith"]) == "John Smith"
    assert normalize_entity_text(["John", "", "Smith"]) == "John Smith"
    assert normalize_entity_text(["John \t", " Smith"]) == "John Smith"
    assert normalize_entity_text(["JOHN"]) != normalize_entity_text(["John"])
    assert normalize_entity_text(["JOHN"], ignore_case=True) == "john"


def test_exact_match():
    gold = entities("A x", "B y", "C z")
    report = exact_match(gold, gold)
    assert (report.precision, report.recall, report.f1) == (1.0, 1.0, 1.0)

    report = exact_match([], gold)
    assert (report.precision, report.recall, report.f1) == (0.0, 0.0, 0.0)

    report = exact_match(entities("A x", "A x", "B y"), gold)
    assert report.true_positives == 2
    assert report.precision == pytest.approx(2 / 3)
    assert report.recall == pytest.approx(2 / 3)
    assert report.f1 == pytest.approx(2 / 3)

    # types must agree too
    report = exact_match(entities("A x", type="other"), entities("A x"))
    assert report.true_positives == 0

    report = exact_match(entities("D"), gold)
    assert report.f1 == 0.0


def test_exact_match_permutation_invariant():
    rng = np.random.default_rng(1)
    pool = ["A", "B", "C", "D", "A B"]
    for _ in range(20):
        pred = entities(*rng.choice(pool, size=5))
        gold = entities(*rng.choice(pool, size=4))
        report = exact_match(pred, gold)
        shuffled = [pred[i] for i in rng.permutation(len(pred))]
        assert exact_match(shuffled, gold) == report


def test_word_levenshtein():
    assert word_levenshtein(["a", "b"], ["a", "b"]) == 0
    assert word_levenshtein(["a", "b"], []) == 2
    assert word_levenshtein(["John", "Q", "Smith"], ["John", "Smith", "Esq"]) == 2


def test_word_levenshtein_matches_dp():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        a, b = random_sequence(rng, 12), random_sequence(rng, 12)
        assert word_levenshtein(a, b) == dp_levenshtein(a, b)


def test_word_levenshtein_is_a_metric():
    rng = np.random.default_rng(5)
    for _ in range(200):
        a, b, c = (random_sequence(rng, 6, "ab") for _ in range(3))
        assert word_levenshtein(a, a) == 0
        assert word_levenshtein(a, b) == word_levenshtein(b, a)
        assert word_levenshtein(a, c) <= word_levenshtein(a, b) + word_levenshtein(b, c)
        if a != b:
            assert word_levenshtein(a, b) > 0


def test_mean_edit_distance():
    gold = [["John", "Smith"], ["Baker", "LLP"]]
    assert mean_edit_distance(gold, gold) == 0.0
    assert mean_edit_distance([["a", "b"]], []) == 2.0
    assert mean_edit_distance([], []) == 0.0

    # pairwise costs [[1, 9], [9, 2]]
    g1, g2 = ["a"] * 9, ["c"] * 9
    p1 = ["a"] * 8 + ["b"]
    p2 = ["c"] * 7 + ["d"] * 2
    assert word_levenshtein(p1, g2) == word_levenshtein(p2, g1) == 9
    assert mean_edit_distance([p1, p2], [g1, g2]) == 1.5
    assert mean_edit_distance([p2, p1], [g1, g2]) == 1.5


def test_assignment_matches_enumeration():
    rng = np.random.default_rng(0)
    for _ in range(200):
        pred = [random_sequence(rng, 5) for _ in range(rng.integers(0, 7))]
        gold = [random_sequence(rng, 5) for _ in range(rng.integers(0, 7))]
        cost = [[word_levenshtein(p, g) for g in gold] for p in pred]
        expected = exhaustive_cost(cost, [len(p) for p in pred], [len(g) for g in gold])

        total, denominator = assignment_cost(pred, gold)
        assert total == expected
        assert denominator == max(len(pred), len(gold), 1)


def test_evaluate_corpus_pools_documents():
    pred = [
        DocumentEntities("a", tuple(entities("John Smith", "Baker LLP"))),
        DocumentEntities("b", tuple(entities("Jane Roe"))),
    ]
    gold = [
        DocumentEntities("a", tuple(entities("John Smith", "Baker Stone LLP"))),
        DocumentEntities("b", tuple(entities("Jane Roe"))),
        DocumentEntities("c", tuple(entities("Mary Major"))),
    ]
    report, table = evaluate_corpus(pred, gold)

    assert (report.true_positives, report.predicted_count, report.gold_count) == (2, 3, 4)
    assert report.precision == pytest.approx(2 / 3)
    assert report.recall == pytest.approx(0.5)
    # costs: a = 1 over 2 entities, b = 0 over 1, c = 2 over 1
    assert report.edit_cost == 3 and report.edit_denominator == 4
    assert report.mean_edit_distance == pytest.approx(0.75)

    assert list(table.index) == ["a", "b", "c", "TOTAL"]
    assert table.loc["b", "f1"] == 1.0
    assert "TOTAL" in format_table(table)


def test_evaluate_corpus_rejects_duplicate_documents():
    once = [DocumentEntities("a", tuple(entities("John Smith")))]
    twice = once + [DocumentEntities("a", tuple(entities("Jane Roe")))]

    with pytest.raises(ValidationError, match="predicted"):
        evaluate_corpus(twice, once)
    with pytest.raises(ValidationError, match="gold"):
        evaluate_corpus(once, twice)


def test_self_comparison():
    docs = [DocumentEntities("a", tuple(entities("John Smith", "Baker LLP")))]
    report, _ = evaluate_corpus(docs, docs)
    assert report.f1 == 1.0
    assert report.mean_edit_distance == 0.0


def test_report_arithmetic():
    report = EvalReport.from_counts(0, 0, 0)
    assert report.f1 == 0.0 and report.mean_edit_distance == 0.0
    assert (report + EvalReport.from_counts(1, 2, 1)).precision == 0.5
