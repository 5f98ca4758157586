# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from pseudolay.util.errors import ValidationError

# slack allowed when a box touches the page edge or a line edge
EDGE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class BBox:
    """An axis-aligned box in page fractions (x, w over page width; y, h over
    page height), origin at the top-left corner."""

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise ValidationError(
                "degenerate box {} (width and height must be positive)".format(
                    self.as_tuple()
                )
            )
        if self.x < 0 or self.y < 0:
            raise ValidationError("box {} starts off the page".format(self.as_tuple()))
        if self.x + self.w > 1 + EDGE_TOLERANCE or self.y + self.h > 1 + EDGE_TOLERANCE:
            raise ValidationError("box {} ends off the page".format(self.as_tuple()))

    @classmethod
    def from_edges(cls, x0, y0, x1, y1):
        return cls(float(x0), float(y0), float(x1 - x0), float(y1 - y0))

    @classmethod
    def from_pixels(cls, px, py, pw, ph, page_w, page_h):
        return cls(px / page_w, py / page_h, pw / page_w, ph / page_h)

    @property
    def x1(self):
        return self.x + self.w

    @property
    def y1(self):
        return self.y + self.h

    @property
    def area(self):
        return self.w * self.h

    def as_tuple(self):
        return (self.x, self.y, self.w, self.h)

    def edges(self):
        return (self.x, self.y, self.x1, self.y1)

    def intersection_area(self, other):
        dx = min(self.x1, other.x1) - max(self.x, other.x)
        dy = min(self.y1, other.y1) - max(self.y, other.y)
        if dx <= 0 or dy <= 0:
            return 0.0
        return dx * dy

    def overlaps(self, other):
        """True when the two boxes share a region of positive area."""
        return self.intersection_area(other) > 0

    def contains(self, other, tolerance=EDGE_TOLERANCE):
        return (
            other.x >= self.x - tolerance
            and other.y >= self.y - tolerance
            and other.x1 <= self.x1 + tolerance
            and other.y1 <= self.y1 + tolerance
        )

    def to_pixels(self, page_w, page_h):
        """(x, y, w, h) in pixels, rounded to 1/1000 px."""
        return (
            round(self.x * page_w, 3),
            round(self.y * page_h, 3),
            round(self.w * page_w, 3),
            round(self.h * page_h, 3),
        )

    def to_dict(self):
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}


def tight_bbox(boxes):
    """Smallest box enclosing every box in ``boxes``."""
    edges = np.array([b.edges() for b in boxes], dtype=float)
    return BBox.from_edges(
        edges[:, 0].min(), edges[:, 1].min(), edges[:, 2].max(), edges[:, 3].max()
    )


@dataclass(frozen=True)
class Word:
    text: str
    bbox: BBox
    index: int


@dataclass(frozen=True)
class Line:
    id: str
    bbox: BBox
    word_start: int
    word_end: int
    page: int

    @property
    def n_words(self):
        return self.word_end - self.word_start + 1

    @property
    def word_indices(self):
        return range(self.word_start, self.word_end + 1)


@dataclass(frozen=True)
class Page:
    width_px: int
    height_px: int
    lines: tuple


@dataclass(frozen=True)
class Document:
    """
    An OCR'd document: pages of lines, and the flat word sequence in
    reading order (page order, then line order as given, then word order
    within a line). Lines own contiguous, non-overlapping word ranges.
    """

    doc_id: str
    pages: tuple
    words: tuple

    _lines: tuple = field(init=False, repr=False, compare=False)
    _line_by_id: dict = field(init=False, repr=False, compare=False)
    _starts: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lines = tuple(line for page in self.pages for line in page.lines)
        object.__setattr__(self, "_lines", lines)

        for ordinal, page in enumerate(self.pages):
            if page.width_px < 1 or page.height_px < 1:
                raise ValidationError(
                    "page {} has non-positive pixel dimensions".format(ordinal)
                )

        for position, word in enumerate(self.words):
            if word.index != position:
                raise ValidationError(
                    "word {!r} has index {} at reading position {}".format(
                        word.text, word.index, position
                    )
                )
            if not word.text:
                raise ValidationError("word {} has empty text".format(position))

        # lines must tile the word sequence in order
        expected_start, line_by_id = 0, {}
        for ordinal, page in enumerate(self.pages):
            for line in page.lines:
                if line.id in line_by_id:
                    raise ValidationError("duplicate line id", line_id=line.id)
                line_by_id[line.id] = line
                if line.page != ordinal:
                    raise ValidationError(
                        "declares page {} but sits on page {}".format(line.page, ordinal),
                        line_id=line.id,
                    )
                if line.word_start != expected_start or line.word_end < line.word_start:
                    raise ValidationError(
                        "word range [{}, {}] does not continue the reading order "
                        "at word {}".format(line.word_start, line.word_end, expected_start),
                        line_id=line.id,
                    )
                if line.word_end >= len(self.words):
                    raise ValidationError(
                        "word range ends past the last word", line_id=line.id
                    )
                for i in line.word_indices:
                    if not line.bbox.contains(self.words[i].bbox):
                        raise ValidationError(
                            "word {} ({!r}) lies outside the line box".format(
                                i, self.words[i].text
                            ),
                            line_id=line.id,
                        )
                expected_start = line.word_end + 1

        if expected_start != len(self.words):
            raise ValidationError(
                "{} word(s) belong to no line".format(len(self.words) - expected_start)
            )

        object.__setattr__(self, "_line_by_id", line_by_id)
        object.__setattr__(
            self, "_starts", np.array([line.word_start for line in lines], dtype=np.int64)
        )

    @property
    def lines(self):
        """All lines of the document, in document line order."""
        return self._lines

    def line(self, line_id):
        return self._line_by_id[line_id]

    def line_position(self, line_id):
        """Position of a line in document line order."""
        return int(np.searchsorted(self._starts, self._line_by_id[line_id].word_start))

    def line_of(self, word_index):
        """Return the unique line whose word range holds ``word_index``."""
        if not 0 <= word_index < len(self.words):
            raise IndexError(
                "word index {} out of range for {} words".format(
                    word_index, len(self.words)
                )
            )
        position = int(np.searchsorted(self._starts, word_index, side="right")) - 1
        return self._lines[position]

    def page_lines(self, page):
        return self.pages[page].lines

    def page_size(self, page):
        return self.pages[page].width_px, self.pages[page].height_px

    def words_of(self, line):
        return self.words[line.word_start : line.word_end + 1]

    def text_of(self, line):
        return " ".join(word.text for word in self.words_of(line))

    def words_frame(self):
        """One row per word: index, text, line id, page and its box."""
        line_ids, pages = [], []
        for line in self._lines:
            line_ids.extend([line.id] * line.n_words)
            pages.extend([line.page] * line.n_words)

        return pd.DataFrame(
            {
                "index": [w.index for w in self.words],
                "text": [w.text for w in self.words],
                "line_id": line_ids,
                "page": pages,
                "x": [w.bbox.x for w in self.words],
                "y": [w.bbox.y for w in self.words],
                "w": [w.bbox.w for w in self.words],
                "h": [w.bbox.h for w in self.words],
            }
        )

    @staticmethod
    def from_ocr_json(stream):
        """Parse an OCR JSON byte stream into a new Document."""
        # import this lazily to avoid circular dependencies
        from .readers.ocr_reader import OCRReader

        return OCRReader(stream).read()

    @staticmethod
    def from_file(filename):
        with open(filename, "rb") as f:
            return Document.from_ocr_json(f.read())

    def to_ocr_json(self, filename=None):
        """Serialize to the OCR JSON format; returns the bytes written."""
        from .writers.ocr_writer import OCRWriter

        return OCRWriter(self, filename).write()


@dataclass(frozen=True)
class LabelEntity:
    type: str
    text: str


@dataclass(frozen=True)
class InexactLabel:
    """Image-level entity texts of one document, without locations."""

    doc_id: str
    entities: tuple

    def __post_init__(self):
        for entity in self.entities:
            if not entity.text or not entity.text.strip():
                raise ValidationError(
                    "inexact label of {} has an empty {!r} entity".format(
                        self.doc_id, entity.type
                    )
                )

    @property
    def text(self):
        """All entity texts joined into one decoder sequence."""
        return " ".join(entity.text for entity in self.entities)


@dataclass(frozen=True)
class NamedEntity:
    """A typed, ordered group of word indices. Token order is significant and
    need not follow the reading order."""

    type: str
    tokens: tuple

    def text(self, document):
        return " ".join(document.words[i].text for i in self.tokens)


def check_disjoint(entities):
    """Raise ValidationError unless no word index is shared by two entities."""
    owner = {}
    for position, entity in enumerate(entities):
        for token in entity.tokens:
            if token in owner and owner[token] != position:
                raise ValidationError(
                    "word {} belongs to entities {} and {}".format(
                        token, owner[token], position
                    )
                )
            owner[token] = position


def parse_document(ocr_stream):
    return Document.from_ocr_json(ocr_stream)


def line_of(document, word_index):
    return document.line_of(word_index)


@dataclass(frozen=True)
class EntityRecord:
    """A NamedEntity as exchanged in entity JSON: its type, its text, and
    the word indices it was read from."""

    type: str
    text: str
    token_indices: tuple = ()

    @classmethod
    def from_entity(cls, entity, document):
        return cls(entity.type, entity.text(document), tuple(entity.tokens))

    @property
    def tokens(self):
        return self.text.split()


@dataclass(frozen=True)
class DocumentEntities:
    doc_id: str
    entities: tuple

    @classmethod
    def from_named(cls, document, entities):
        return cls(
            document.doc_id,
            tuple(EntityRecord.from_entity(e, document) for e in entities),
        )
