# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT


class PseudolayError(Exception):
    """Base class for errors raised while reading or checking pipeline data."""


class FormatError(PseudolayError, ValueError):
    """A stream does not follow its documented format.

    ``offset`` is the byte offset of the problem when it is known, and
    ``column`` names the offending decoder step of an attention matrix.
    """

    def __init__(self, message, offset=None, column=None):
        if offset is not None:
            message = "{} (at byte offset {})".format(message, offset)
        if column is not None:
            message = "{} (column {})".format(message, column)
        super().__init__(message)
        self.offset = offset
        self.column = column


class ValidationError(PseudolayError, ValueError):
    """Well-formed data that violates a type invariant."""

    def __init__(self, message, line_id=None):
        if line_id is not None:
            message = "line {!r}: {}".format(line_id, message)
        super().__init__(message)
        self.line_id = line_id


class DimensionError(PseudolayError, ValueError):
    """Two inputs disagree on a dimension (e.g. matrix rows vs. word count)."""
