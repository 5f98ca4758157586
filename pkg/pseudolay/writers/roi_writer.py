# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from pseudolay.util.files import dump_json, write_output


def result_to_dict(page, result):
    return {
        "page": page,
        "halt_reason": result.halt_reason,
        "iterations": result.iterations,
        "history": list(result.history),
        "rois": [
            {"bbox": roi.bbox.to_dict(), "members": sorted(roi.members)}
            for roi in result.rois
        ],
    }


class RoiWriter:
    """Exports segmentation results as RoI JSON: a list, ordered by doc_id,
    of ``{"doc_id", "pages": [...]}`` with one entry per page."""

    def __init__(self, results, filename=None):
        # {doc_id: [SegmentationResult per page]}
        self.results = results
        self.filename = filename

    def to_obj(self):
        return [
            {
                "doc_id": doc_id,
                "pages": [
                    result_to_dict(page, result)
                    for page, result in enumerate(self.results[doc_id])
                ],
            }
            for doc_id in sorted(self.results)
        ]

    def write(self):
        return write_output(dump_json(self.to_obj()), self.filename)
