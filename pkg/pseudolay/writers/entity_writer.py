# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from pseudolay.util.files import dump_json, write_output


def entities_to_dict(document_entities):
    return {
        "doc_id": document_entities.doc_id,
        "entities": [
            {
                "type": record.type,
                "text": record.text,
                "token_indices": list(record.token_indices),
            }
            for record in document_entities.entities
        ],
    }


class EntityWriter:
    """Exports DocumentEntities as entity JSON. A list is written as a JSON
    list ordered by doc_id, a single DocumentEntities as one object."""

    def __init__(self, entities, filename=None):
        self.entities = entities
        self.filename = filename

    def to_obj(self):
        if isinstance(self.entities, (list, tuple)):
            return [
                entities_to_dict(e)
                for e in sorted(self.entities, key=lambda e: e.doc_id)
            ]
        return entities_to_dict(self.entities)

    def write(self):
        return write_output(dump_json(self.to_obj()), self.filename)


class LabelWriter:
    """Exports InexactLabels in the inexact label JSON format."""

    def __init__(self, labels, filename=None):
        self.labels = labels
        self.filename = filename

    def write(self):
        obj = [
            {
                "doc_id": label.doc_id,
                "entities": [{"type": e.type, "text": e.text} for e in label.entities],
            }
            for label in sorted(self.labels, key=lambda label: label.doc_id)
        ]
        return write_output(dump_json(obj), self.filename)
