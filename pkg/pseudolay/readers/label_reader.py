# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import os

import pseudolay.document
from pseudolay.readers.ocr_reader import decode_json, require
from pseudolay.util.errors import FormatError


def _records(data):
    """A file holds either one document object or a list of them."""
    if isinstance(data, dict):
        return [data]
    if isinstance(data, list):
        return data
    raise FormatError("expected a JSON object or a list of objects")


class LabelReader:
    """
    Reader for inexact (image-level) labels:
    ``{"doc_id": ..., "entities": [{"type": ..., "text": ...}, ...]}``,
    one object or a list of them.
    """

    def __init__(self, stream):
        self.stream = stream

    def read(self):
        labels = []
        for k, obj in enumerate(_records(decode_json(self.stream))):
            path = "[{}]".format(k)
            doc_id = require(obj, "doc_id", str, path)
            entities = []
            for n, entity in enumerate(require(obj, "entities", list, path)):
                where = "{}.entities[{}]".format(path, n)
                entities.append(
                    pseudolay.document.LabelEntity(
                        require(entity, "type", str, where),
                        require(entity, "text", str, where),
                    )
                )
            labels.append(pseudolay.document.InexactLabel(doc_id, tuple(entities)))
        return labels


class EntityReader:
    """
    Reader for entity JSON: like inexact labels, plus the ``token_indices``
    each entity was read from.
    """

    def __init__(self, stream):
        self.stream = stream

    def read(self):
        documents = []
        for k, obj in enumerate(_records(decode_json(self.stream))):
            path = "[{}]".format(k)
            doc_id = require(obj, "doc_id", str, path)
            records = []
            for n, entity in enumerate(require(obj, "entities", list, path)):
                where = "{}.entities[{}]".format(path, n)
                indices = require(entity, "token_indices", list, where)
                if any(type(i) is not int or i < 0 for i in indices):
                    raise FormatError(
                        "{}.token_indices must hold non-negative integers".format(where)
                    )
                records.append(
                    pseudolay.document.EntityRecord(
                        require(entity, "type", str, where),
                        require(entity, "text", str, where),
                        tuple(indices),
                    )
                )
            documents.append(pseudolay.document.DocumentEntities(doc_id, tuple(records)))
        return documents


def json_files(path):
    """``path`` itself, or the *.json files of a directory in name order."""
    if os.path.isdir(path):
        return [
            os.path.join(path, name)
            for name in sorted(os.listdir(path))
            if name.endswith(".json")
        ]
    return [path]


def read_path(path, reader_cls):
    """Read every record of a file or of all JSON files under a directory."""
    items = []
    for filename in json_files(path):
        with open(filename, "rb") as f:
            items.extend(reader_cls(f.read()).read())
    return items
