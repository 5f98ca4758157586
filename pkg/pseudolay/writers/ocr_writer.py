# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from pseudolay.util.files import dump_json, write_output


class OCRWriter:
    """Exports a Document to the OCR JSON format it was read from.

    Lines and words are written in document order, so a written file parses
    back to an identical Document and re-serializes to identical bytes.
    """

    def __init__(self, document, filename=None):
        self.document = document
        self.filename = filename

    def to_dict(self):
        doc = self.document
        pages = []
        for page in doc.pages:
            lines = []
            for line in page.lines:
                lines.append(
                    {
                        "id": line.id,
                        "bbox": line.bbox.to_dict(),
                        "words": [
                            {"text": word.text, "bbox": word.bbox.to_dict()}
                            for word in doc.words_of(line)
                        ],
                    }
                )
            pages.append(
                {"width_px": page.width_px, "height_px": page.height_px, "lines": lines}
            )
        return {"doc_id": doc.doc_id, "pages": pages}

    def write(self):
        return write_output(dump_json(self.to_dict()), self.filename)
