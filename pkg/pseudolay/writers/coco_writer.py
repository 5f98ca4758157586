# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from pseudolay.util.files import dump_json, write_output


class COCOWriter:
    """Exports a CocoDataset as COCO-style object detection JSON, which
    detector training code (e.g. mmdetection, detectron2) can load.

    See https://cocodataset.org/#format-data
    """

    def __init__(self, dataset, filename=None):
        self.dataset = dataset
        self.filename = filename

    def write(self):
        return write_output(dump_json(self.dataset.to_dict()), self.filename)
