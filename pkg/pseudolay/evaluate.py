# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import logging
from collections import Counter
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment

from pseudolay.util.edit_distance import levenshtein
from pseudolay.util.errors import ValidationError

logger = logging.getLogger(__name__)


def _ratio(numerator, denominator):
    return numerator / denominator if denominator else 0.0


@dataclass(frozen=True)
class EvalReport:
    """Exact-match counts and scores, plus the word-level edit distance.

    ``edit_cost`` and ``edit_denominator`` are kept so reports of several
    documents can be pooled.
    """

    true_positives: int
    predicted_count: int
    gold_count: int
    precision: float
    recall: float
    f1: float
    mean_edit_distance: float = 0.0
    edit_cost: int = 0
    edit_denominator: int = 0

    @classmethod
    def from_counts(cls, tp, predicted, gold, edit_cost=0, edit_denominator=0):
        precision = _ratio(tp, predicted)
        recall = _ratio(tp, gold)
        f1 = _ratio(2 * precision * recall, precision + recall)
        return cls(
            tp,
            predicted,
            gold,
            precision,
            recall,
            f1,
            _ratio(edit_cost, edit_denominator),
            edit_cost,
            edit_denominator,
        )

    def __add__(self, other):
        return EvalReport.from_counts(
            self.true_positives + other.true_positives,
            self.predicted_count + other.predicted_count,
            self.gold_count + other.gold_count,
            self.edit_cost + other.edit_cost,
            self.edit_denominator + other.edit_denominator,
        )

    def to_dict(self):
        return asdict(self)


def normalize_entity_text(tokens, ignore_case=False):
    """Tokens joined by single spaces, empty tokens and runs of whitespace
    collapsed."""
    text = " ".join(" ".join(tokens).split())
    return text.casefold() if ignore_case else text


def _key(entity, ignore_case):
    return entity.type, normalize_entity_text(entity.tokens, ignore_case)


def exact_match(pred, gold, ignore_case=False):
    """
    Compare two entity multisets by normalized (type, text). Entities need
    ``type`` and ``tokens`` attributes.
    """
    pred_counts = Counter(_key(e, ignore_case) for e in pred)
    gold_counts = Counter(_key(e, ignore_case) for e in gold)
    tp = sum((pred_counts & gold_counts).values())
    return EvalReport.from_counts(
        tp, sum(pred_counts.values()), sum(gold_counts.values())
    )


def word_levenshtein(a, b):
    return levenshtein(list(a), list(b))


def assignment_cost(pred, gold):
    """
    Minimum total word edit distance of a one-to-one matching between
    ``pred`` and ``gold`` token sequences, where an unmatched sequence costs
    its length. Returns (cost, max(len(pred), len(gold), 1)).
    """
    n, m = len(pred), len(gold)
    denominator = max(n, m, 1)
    if n == 0 and m == 0:
        return 0, denominator

    pred_lengths = [len(p) for p in pred]
    gold_lengths = [len(g) for g in gold]
    forbidden = sum(pred_lengths) + sum(gold_lengths) + 1

    # square problem: pred rows, then one "unmatched" row per gold entity;
    # gold columns, then one "unmatched" column per pred entity
    cost = np.zeros((n + m, m + n), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            cost[i, j] = word_levenshtein(pred[i], gold[j])
    cost[:n, m:] = forbidden
    cost[n:, :m] = forbidden
    for i in range(n):
        cost[i, m + i] = pred_lengths[i]
    for j in range(m):
        cost[n + j, j] = gold_lengths[j]

    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum()), denominator


def mean_edit_distance(pred, gold):
    total, denominator = assignment_cost(pred, gold)
    return total / denominator


def evaluate_document(pred, gold, ignore_case=False):
    """EvalReport of one document's predicted and gold EntityRecords."""
    report = exact_match(pred, gold, ignore_case)
    cost, denominator = assignment_cost(
        [normalize_entity_text(e.tokens, ignore_case).split() for e in pred],
        [normalize_entity_text(e.tokens, ignore_case).split() for e in gold],
    )
    return EvalReport.from_counts(
        report.true_positives,
        report.predicted_count,
        report.gold_count,
        cost,
        denominator,
    )


def _by_doc_id(docs, side):
    by_id = {}
    for doc in docs:
        if doc.doc_id in by_id:
            raise ValidationError(
                "duplicate doc_id {!r} in {} entities".format(doc.doc_id, side)
            )
        by_id[doc.doc_id] = doc.entities
    return by_id


def evaluate_corpus(pred_docs, gold_docs, ignore_case=False):
    """
    Score DocumentEntities per document and pool the counts corpus-wide.
    A document missing on one side counts as having no entities there.
    A doc_id listed twice on one side is a ValidationError.

    Returns the pooled EvalReport and a DataFrame with one row per document
    and a final ``TOTAL`` row.
    """
    pred_by_id = _by_doc_id(pred_docs, "predicted")
    gold_by_id = _by_doc_id(gold_docs, "gold")

    missing = sorted(set(gold_by_id) - set(pred_by_id))
    if missing:
        logger.warning("%d gold document(s) have no predictions", len(missing))

    rows, total = [], EvalReport.from_counts(0, 0, 0)
    for doc_id in sorted(set(pred_by_id) | set(gold_by_id)):
        report = evaluate_document(
            pred_by_id.get(doc_id, ()), gold_by_id.get(doc_id, ()), ignore_case
        )
        total = total + report
        rows.append(dict(doc_id=doc_id, **report.to_dict()))
    rows.append(dict(doc_id="TOTAL", **total.to_dict()))

    table = pd.DataFrame(rows).set_index("doc_id")
    logger.info(
        "P=%.3f R=%.3f F1=%.3f edit distance=%.3f over %d document(s)",
        total.precision,
        total.recall,
        total.f1,
        total.mean_edit_distance,
        len(rows) - 1,
    )
    return total, table


def format_table(table):
    columns = [
        "true_positives",
        "predicted_count",
        "gold_count",
        "precision",
        "recall",
        "f1",
        "mean_edit_distance",
    ]
    return table[columns].to_string(float_format=lambda v: "{:.3f}".format(v)) + "\n"
