# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import json

import pseudolay.document
from pseudolay.util.errors import FormatError, ValidationError


def decode_json(stream):
    """
    Decode a UTF-8 JSON byte stream, turning decoder failures into a
    FormatError that names the byte offset of the problem.
    """
    if isinstance(stream, str):
        text = stream
    else:
        try:
            text = bytes(stream).decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError("stream is not valid UTF-8", offset=e.start) from e

    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        # JSONDecodeError.pos counts characters, not bytes
        offset = len(text[: e.pos].encode("utf-8"))
        raise FormatError("malformed JSON: {}".format(e.msg), offset=offset) from e


def require(obj, key, kind, path):
    """Fetch obj[key], checking it is of ``kind``; ``path`` names obj in
    error messages (e.g. ``pages[0].lines[3]``)."""
    if not isinstance(obj, dict):
        raise FormatError("{} must be a JSON object".format(path or "document"))
    if key not in obj:
        raise FormatError("{} is missing the {!r} key".format(path or "document", key))

    value = obj[key]
    where = "{}.{}".format(path, key) if path else key

    if kind is float:
        if type(value) not in (int, float):
            raise FormatError("{} must be a number".format(where))
        return float(value)
    if kind is int:
        if type(value) is not int:
            raise FormatError("{} must be an integer".format(where))
        return value
    if not isinstance(value, kind):
        raise FormatError("{} must be of JSON type {}".format(where, kind.__name__))
    return value


def read_bbox(obj, path):
    box = require(obj, "bbox", dict, path)
    where = path + ".bbox"
    return pseudolay.document.BBox(
        require(box, "x", float, where),
        require(box, "y", float, where),
        require(box, "w", float, where),
        require(box, "h", float, where),
    )


class OCRReader:
    """Reader for the OCR JSON format (pages of lines of words, normalized
    boxes, reading order as declared by the file)."""

    def __init__(self, stream):
        self.stream = stream

    def read_line(self, line_obj, path, ordinal, words):
        """Append the words of one line to ``words`` and return the Line."""
        line_id = require(line_obj, "id", str, path)

        try:
            line_box = read_bbox(line_obj, path)
        except ValidationError as e:
            raise ValidationError(str(e), line_id=line_id) from e

        word_objs = require(line_obj, "words", list, path)
        if not word_objs:
            raise ValidationError("line has no words", line_id=line_id)

        word_start = len(words)
        for k, word_obj in enumerate(word_objs):
            word_path = "{}.words[{}]".format(path, k)
            text = require(word_obj, "text", str, word_path)
            try:
                word_box = read_bbox(word_obj, word_path)
            except ValidationError as e:
                raise ValidationError(
                    "word {} ({!r}): {}".format(len(words), text, e), line_id=line_id
                ) from e
            words.append(pseudolay.document.Word(text, word_box, len(words)))

        return pseudolay.document.Line(
            line_id, line_box, word_start, len(words) - 1, ordinal
        )

    def read(self):
        """
        Returns a Document built from the stream. Syntax problems raise
        FormatError; invariant violations raise ValidationError.
        """
        data = decode_json(self.stream)

        doc_id = require(data, "doc_id", str, "")
        page_objs = require(data, "pages", list, "")

        words, pages = [], []
        for ordinal, page_obj in enumerate(page_objs):
            page_path = "pages[{}]".format(ordinal)
            width = require(page_obj, "width_px", int, page_path)
            height = require(page_obj, "height_px", int, page_path)
            line_objs = require(page_obj, "lines", list, page_path)

            lines = tuple(
                self.read_line(
                    line_obj, "{}.lines[{}]".format(page_path, k), ordinal, words
                )
                for k, line_obj in enumerate(line_objs)
            )
            pages.append(pseudolay.document.Page(width, height, lines))

        return pseudolay.document.Document(doc_id, tuple(pages), tuple(words))
