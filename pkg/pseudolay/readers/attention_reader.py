# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import numpy as np

import pseudolay.aligner
from pseudolay.readers.ocr_reader import decode_json, require
from pseudolay.util.errors import FormatError

MAGIC = b"ATTN1\n"
HEADER_SIZE = len(MAGIC) + 8


class AttentionReader:
    """
    Reader for attention matrices, in the ATTN binary layout (magic,
    little-endian uint32 rows and cols, row-major little-endian float32
    scores) or the equivalent JSON object {"rows", "cols", "data"}.
    """

    def __init__(self, stream, expected_rows=None):
        self.stream = bytes(stream)
        self.expected_rows = expected_rows

    def read_binary(self):
        if len(self.stream) < HEADER_SIZE:
            raise FormatError("truncated ATTN header", offset=len(self.stream))

        rows, cols = np.frombuffer(self.stream, dtype="<u4", count=2, offset=len(MAGIC))
        rows, cols = int(rows), int(cols)

        expected_size = HEADER_SIZE + 4 * rows * cols
        if len(self.stream) != expected_size:
            raise FormatError(
                "ATTN payload holds {} bytes, {}x{} floats need {}".format(
                    len(self.stream) - HEADER_SIZE,
                    rows,
                    cols,
                    expected_size - HEADER_SIZE,
                ),
                offset=min(len(self.stream), expected_size),
            )

        data = np.frombuffer(
            self.stream, dtype="<f4", count=rows * cols, offset=HEADER_SIZE
        )
        return rows, cols, data.reshape(rows, cols)

    def read_json(self):
        obj = decode_json(self.stream)
        rows = require(obj, "rows", int, "")
        cols = require(obj, "cols", int, "")
        values = require(obj, "data", list, "")

        if rows < 0 or cols < 0:
            raise FormatError("negative matrix dimensions")
        if len(values) != rows * cols:
            raise FormatError(
                "data holds {} scores, {}x{} needs {}".format(
                    len(values), rows, cols, rows * cols
                )
            )
        if any(type(v) not in (int, float) for v in values):
            raise FormatError("data must hold only numbers")

        return rows, cols, np.array(values, dtype=np.float32).reshape(rows, cols)

    def read(self):
        if self.stream.startswith(MAGIC):
            rows, cols, data = self.read_binary()
        elif self.stream.lstrip()[:1] == b"{":
            rows, cols, data = self.read_json()
        else:
            raise FormatError("unrecognized attention stream: bad magic", offset=0)

        if self.expected_rows is not None and rows != self.expected_rows:
            raise FormatError(
                "matrix has {} rows, expected {} (one per document word)".format(
                    rows, self.expected_rows
                )
            )

        return pseudolay.aligner.AttentionMatrix(data)
