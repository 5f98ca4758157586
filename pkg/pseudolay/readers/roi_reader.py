# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import pseudolay.segmenter
from pseudolay.readers.ocr_reader import decode_json, read_bbox, require
from pseudolay.util.errors import FormatError


class RoiReader:
    """Reader for RoI JSON as written by RoiWriter. Returns
    {doc_id: [SegmentationResult per page]}."""

    def __init__(self, stream):
        self.stream = stream

    def read_page(self, obj, path):
        page = require(obj, "page", int, path)
        rois = []
        for k, roi_obj in enumerate(require(obj, "rois", list, path)):
            where = "{}.rois[{}]".format(path, k)
            members = require(roi_obj, "members", list, where)
            if any(not isinstance(m, str) for m in members):
                raise FormatError("{}.members must hold line ids".format(where))
            rois.append(
                pseudolay.segmenter.ParagraphRoi(
                    read_bbox(roi_obj, where), frozenset(members), page
                )
            )
        return pseudolay.segmenter.SegmentationResult(
            rois,
            require(obj, "halt_reason", str, path),
            require(obj, "iterations", int, path),
            require(obj, "history", list, path),
        )

    def read(self):
        data = decode_json(self.stream)
        if not isinstance(data, list):
            raise FormatError("RoI JSON must hold a list of documents")

        results = {}
        for k, doc_obj in enumerate(data):
            path = "[{}]".format(k)
            doc_id = require(doc_obj, "doc_id", str, path)
            results[doc_id] = [
                self.read_page(page_obj, "{}.pages[{}]".format(path, n))
                for n, page_obj in enumerate(require(doc_obj, "pages", list, path))
            ]
        return results
