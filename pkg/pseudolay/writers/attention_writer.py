# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import numpy as np

from pseudolay.readers.attention_reader import MAGIC
from pseudolay.util.files import dump_json, write_output


class AttentionWriter:
    """Exports an AttentionMatrix as ATTN binary (default) or as JSON."""

    def __init__(self, matrix, filename=None, binary=True):
        self.matrix = matrix
        self.filename = filename
        self.binary = binary

    def to_bytes(self):
        data = np.ascontiguousarray(self.matrix.data, dtype="<f4")
        header = np.array([self.matrix.rows, self.matrix.cols], dtype="<u4")
        return MAGIC + header.tobytes() + data.tobytes()

    def to_dict(self):
        # float32 -> float keeps the exact value, so re-reading is lossless
        return {
            "rows": self.matrix.rows,
            "cols": self.matrix.cols,
            "data": [float(v) for v in self.matrix.data.ravel()],
        }

    def write(self):
        data = self.to_bytes() if self.binary else dump_json(self.to_dict())
        return write_output(data, self.filename)
