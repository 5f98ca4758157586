# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import re
from dataclasses import dataclass, field

from pseudolay.document import BBox
from pseudolay.readers.ocr_reader import decode_json, require
from pseudolay.util.errors import FormatError

FILE_NAME_PATTERN = re.compile(r"^(?P<doc_id>.+)_p(?P<page>\d+)\.\w+$")


def image_file_name(doc_id, page):
    return "{}_p{}.png".format(doc_id, page)


@dataclass(frozen=True)
class Prediction:
    """One object-level box on a page, pseudo label or detector output."""

    bbox: BBox
    category: str
    score: float = 1.0


@dataclass
class CocoDataset:
    """COCO-style object detection data: images, annotations, categories.

    Images carry ``doc_id`` and ``page`` next to the standard keys so boxes
    can be bound back to OCR documents.
    """

    images: list = field(default_factory=list)
    annotations: list = field(default_factory=list)
    categories: list = field(default_factory=list)

    @classmethod
    def from_label_sets(cls, label_sets, categories=()):
        """Build a dataset from PseudoLabelSets, one image per set."""
        names = sorted(
            set(categories) | {box.category for s in label_sets for box in s.boxes}
        )
        category_ids = {name: k + 1 for k, name in enumerate(names)}

        dataset = cls(
            categories=[
                {"id": category_ids[name], "name": name, "supercategory": "entity"}
                for name in names
            ]
        )
        for label_set in sorted(label_sets, key=lambda s: (s.doc_id, s.page)):
            image_id = len(dataset.images) + 1
            dataset.images.append(
                {
                    "id": image_id,
                    "file_name": image_file_name(label_set.doc_id, label_set.page),
                    "width": label_set.width_px,
                    "height": label_set.height_px,
                    "doc_id": label_set.doc_id,
                    "page": label_set.page,
                }
            )
            for box in label_set.boxes:
                x, y, w, h = box.pixels
                dataset.annotations.append(
                    {
                        "id": len(dataset.annotations) + 1,
                        "image_id": image_id,
                        "category_id": category_ids[box.category],
                        "bbox": [x, y, w, h],
                        "area": round(w * h, 3),
                        "iscrowd": 0,
                    }
                )
        return dataset

    def to_dict(self):
        return {
            "images": self.images,
            "annotations": self.annotations,
            "categories": self.categories,
        }

    def image_key(self, image):
        """(doc_id, page) of a COCO image record."""
        if "doc_id" in image:
            return image["doc_id"], int(image.get("page", 0))
        match = FILE_NAME_PATTERN.match(image.get("file_name", ""))
        if match is None:
            raise FormatError(
                "image {} names no document (needs doc_id or <doc>_p<page> file_name)".format(
                    image.get("id")
                )
            )
        return match.group("doc_id"), int(match.group("page"))

    def predictions(self):
        """
        Returns {(doc_id, page): [Prediction, ...]} with boxes normalized by
        the image size and clamped to the page. Annotations without a
        ``score`` count as certain.
        """
        names = {c["id"]: c["name"] for c in self.categories}
        images = {image["id"]: image for image in self.images}

        by_page = {self.image_key(image): [] for image in self.images}
        for ann in self.annotations:
            image = images.get(ann["image_id"])
            if image is None:
                raise FormatError(
                    "annotation {} refers to unknown image {}".format(
                        ann["id"], ann["image_id"]
                    )
                )
            width, height = image["width"], image["height"]
            x, y, w, h = ann["bbox"]
            x0, y0 = max(0.0, x / width), max(0.0, y / height)
            x1, y1 = min(1.0, (x + w) / width), min(1.0, (y + h) / height)
            if x1 <= x0 or y1 <= y0:
                continue
            by_page[self.image_key(image)].append(
                Prediction(
                    BBox.from_edges(x0, y0, x1, y1),
                    names.get(ann["category_id"], str(ann["category_id"])),
                    float(ann.get("score", 1.0)),
                )
            )
        return by_page


class COCOReader:
    """Reader for COCO-style detection JSON (pseudo labels or predictions)."""

    def __init__(self, stream):
        self.stream = stream

    def read(self):
        data = decode_json(self.stream)
        images = require(data, "images", list, "")
        annotations = require(data, "annotations", list, "")
        categories = require(data, "categories", list, "")

        for k, image in enumerate(images):
            path = "images[{}]".format(k)
            require(image, "id", int, path)
            width = require(image, "width", int, path)
            height = require(image, "height", int, path)
            if width < 1 or height < 1:
                raise FormatError(
                    "{} must have a positive width and height".format(path)
                )
        for k, ann in enumerate(annotations):
            path = "annotations[{}]".format(k)
            require(ann, "id", int, path)
            require(ann, "image_id", int, path)
            require(ann, "category_id", int, path)
            bbox = require(ann, "bbox", list, path)
            if len(bbox) != 4 or any(type(v) not in (int, float) for v in bbox):
                raise FormatError("{}.bbox must hold four numbers".format(path))
        for k, category in enumerate(categories):
            path = "categories[{}]".format(k)
            require(category, "id", int, path)
            require(category, "name", str, path)

        return CocoDataset(images, annotations, categories)
