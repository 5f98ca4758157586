# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import logging
import string
from dataclasses import dataclass

import numpy as np
import pandas as pd

from pseudolay.util.config import get_option
from pseudolay.util.edit_distance import similarity
from pseudolay.util.errors import DimensionError, FormatError

logger = logging.getLogger(__name__)

COLUMN_SUM_TOLERANCE = 1e-3
SCORE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class AlignConfig:
    sim_threshold: float = 0.8
    psi: float = 0.1
    activation_mode: str = "sum"

    def __post_init__(self):
        if not 0 < self.sim_threshold <= 1:
            raise ValueError("sim_threshold must lie in (0, 1]")
        if self.psi < 0:
            raise ValueError("psi must be non-negative")
        if self.activation_mode not in ("sum", "any"):
            raise ValueError("activation_mode must be 'sum' or 'any'")

    @classmethod
    def from_options(cls):
        return cls(
            sim_threshold=get_option("sim_threshold"),
            psi=get_option("psi"),
            activation_mode=get_option("activation_mode"),
        )


class AttentionMatrix:
    """
    Encoder-step x decoder-step attention scores. Rows are document words,
    columns are label tokens. Each column either sums to one (the decoder
    step copied from the document) or is all zero (the step was generated).
    """

    def __init__(self, data):
        data = np.array(data, dtype=np.float32, ndmin=2)
        if data.ndim != 2:
            raise FormatError("attention data must be two-dimensional")

        if data.size and not np.all(np.isfinite(data)):
            raise FormatError("attention scores must be finite")
        negative = np.nonzero((data < 0).any(axis=0))[0]
        if len(negative):
            raise FormatError("negative attention score", column=int(negative[0]))

        sums = data.sum(axis=0, dtype=np.float64)
        bad = np.nonzero((sums != 0) & (np.abs(sums - 1.0) > COLUMN_SUM_TOLERANCE))[0]
        if len(bad):
            raise FormatError(
                "column sums to {:.6g}, expected 1 or 0".format(sums[bad[0]]),
                column=int(bad[0]),
            )

        data.setflags(write=False)
        self.data = data

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, AttentionMatrix)
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self):
        return "AttentionMatrix(rows={}, cols={}, mass={:.4g})".format(
            self.rows, self.cols, float(self.data.sum(dtype=np.float64))
        )

    @staticmethod
    def from_stream(stream, expected_rows):
        from .readers.attention_reader import AttentionReader

        return AttentionReader(stream, expected_rows).read()

    def to_attn(self, filename=None, binary=True):
        from .writers.attention_writer import AttentionWriter

        return AttentionWriter(self, filename, binary).write()


@dataclass(frozen=True)
class LineScore:
    line_id: str
    mass: float
    n_words: int
    normalized: float
    # largest mass the line receives from a single decoder step
    peak: float = 0.0

    @property
    def peak_normalized(self):
        return self.peak / self.n_words


def normalize_token(token):
    """Case-folded token with surrounding punctuation removed."""
    return token.strip(string.punctuation + string.whitespace).casefold()


def load_attention(stream, expected_rows):
    return AttentionMatrix.from_stream(stream, expected_rows)


def align_tokens(document, label_text, sim_threshold=0.8):
    """
    Copy-only token mapping. Every whitespace token of ``label_text`` is a
    decoder step; its column is one-hot at the document word that is
    similar enough (>= sim_threshold) and closest in reading order to the
    previous match, or all zero when no word qualifies.
    """
    if not 0 < sim_threshold <= 1:
        raise ValueError("sim_threshold must lie in (0, 1]")

    tokens = label_text.split()
    data = np.zeros((len(document.words), len(tokens)), dtype=np.float32)

    # candidate lookups are made per distinct normalized word
    positions = {}
    for word in document.words:
        key = normalize_token(word.text)
        if key:
            positions.setdefault(key, []).append(word.index)
    vocabulary = list(positions)

    previous, copied = 0, 0
    for j, token in enumerate(tokens):
        key = normalize_token(token)
        if not key:
            continue

        candidates = []
        for word in vocabulary:
            if similarity(key, word, sim_threshold) + SCORE_TOLERANCE >= sim_threshold:
                candidates.extend(positions[word])
        if not candidates:
            continue

        winner = min(candidates, key=lambda i: (abs(i - previous), i))
        data[winner, j] = 1.0
        previous = winner
        copied += 1

    logger.debug(
        "%s: copied %d of %d label tokens", document.doc_id, copied, len(tokens)
    )
    return AttentionMatrix(data)


def align_document(document, label, cfg):
    """Align all entity texts of an InexactLabel as one decoder sequence."""
    return align_tokens(document, label.text, cfg.sim_threshold)


def line_scores(matrix, document):
    """Aggregate attention to lines: one LineScore per line, in line order."""
    if matrix.rows != len(document.words):
        raise DimensionError(
            "attention matrix has {} rows but {} has {} words".format(
                matrix.rows, document.doc_id, len(document.words)
            )
        )

    lines = document.lines
    if not lines:
        return []

    starts = np.array([line.word_start for line in lines], dtype=np.int64)
    data = matrix.data.astype(np.float64)
    if matrix.cols == 0:
        per_line = np.zeros((len(lines), 0))
    else:
        per_line = np.add.reduceat(data, starts, axis=0)

    scores = []
    for k, line in enumerate(lines):
        mass = float(per_line[k].sum()) if matrix.cols else 0.0
        peak = float(per_line[k].max()) if matrix.cols else 0.0
        scores.append(LineScore(line.id, mass, line.n_words, mass / line.n_words, peak))
    return scores


def active_lines(scores, psi=0.1, mode="sum"):
    """
    Ids of lines whose attention per word exceeds ``psi`` (strictly). In
    ``sum`` mode the mass of all decoder steps counts; in ``any`` mode a
    single decoder step must exceed it.
    """
    if psi < 0:
        raise ValueError("psi must be non-negative")
    if mode == "sum":
        return {s.line_id for s in scores if s.normalized > psi}
    if mode == "any":
        return {s.line_id for s in scores if s.peak_normalized > psi}
    raise ValueError("unknown activation mode {!r}".format(mode))


def scores_frame(scores):
    """LineScores as a DataFrame, one row per line."""
    return pd.DataFrame(
        {
            "line_id": [s.line_id for s in scores],
            "n_words": [s.n_words for s in scores],
            "mass": [s.mass for s in scores],
            "normalized": [s.normalized for s in scores],
            "peak": [s.peak for s in scores],
        }
    )
