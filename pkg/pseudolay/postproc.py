# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import logging
import re
from dataclasses import dataclass, replace

from pseudolay.document import NamedEntity, tight_bbox
from pseudolay.graph import component_labels, interval_pairs
from pseudolay.pseudo_labeler import PseudoBox, PseudoLabelSet, suppress_overlaps
from pseudolay.util.config import get_option

logger = logging.getLogger(__name__)

# "for" as a word of its own: "Attorneys for Petitioner", not "California"
DESIGNATION_PATTERN = re.compile(r"(?<![A-Za-z])for(?![A-Za-z])", re.IGNORECASE)
PRO_SE_PATTERN = re.compile(r"(?<![A-Za-z])pro\s+se(?![A-Za-z])", re.IGNORECASE)

# float slack when comparing overlap areas against the attach ratio
AREA_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PostprocConfig:
    confidence_threshold: float = 0.5
    major_line_threshold: int = 5
    attach_min_overlap: float = 0.5
    exclude_pro_se: bool = False
    category: str = "attorney_profile"

    def __post_init__(self):
        if not 0 <= self.confidence_threshold <= 1:
            raise ValueError("confidence_threshold must lie in [0, 1]")
        if type(self.major_line_threshold) is not int or self.major_line_threshold < 0:
            raise ValueError("major_line_threshold must be a non-negative integer")
        if not 0 < self.attach_min_overlap <= 1:
            raise ValueError("attach_min_overlap must lie in (0, 1]")

    @classmethod
    def from_options(cls):
        return cls(
            confidence_threshold=get_option("confidence_threshold"),
            major_line_threshold=get_option("major_line_threshold"),
            attach_min_overlap=get_option("attach_min_overlap"),
            exclude_pro_se=get_option("exclude_pro_se"),
            category=get_option("category"),
        )


@dataclass(frozen=True)
class DetectedObject:
    bbox: object
    category: str
    confidence: float = 1.0
    member_lines: tuple = ()
    is_major: bool = False
    is_designation: bool = False
    column_index: int = 0
    page: int = 0


@dataclass
class EntityGroup:
    objects: list
    closed: bool = False


def attach_lines(doc, box, page=0, min_overlap=0.5):
    """Ids of the lines of ``page`` that ``box`` covers for at least
    ``min_overlap`` of their own area, in document line order."""
    return tuple(
        line.id
        for line in doc.page_lines(page)
        if box.intersection_area(line.bbox) + AREA_TOLERANCE
        >= min_overlap * line.bbox.area
    )


def object_text(obj, doc):
    return " ".join(doc.text_of(doc.line(line_id)) for line_id in obj.member_lines)


def classify(obj, doc, major_line_threshold=5):
    return replace(
        obj,
        is_major=len(obj.member_lines) > major_line_threshold,
        is_designation=DESIGNATION_PATTERN.search(object_text(obj, doc)) is not None,
    )


def x_cut(objects):
    """
    Assign column indices: columns are the connected components of
    overlapping x-extents, numbered left to right by their leftmost edge.
    """
    objects = list(objects)
    if not objects:
        return []

    starts = [obj.bbox.x for obj in objects]
    ends = [obj.bbox.x1 for obj in objects]
    labels = component_labels(len(objects), interval_pairs(starts, ends))

    left = {}
    for label, start in zip(labels, starts):
        left[label] = min(start, left.get(label, start))
    order = sorted(left, key=lambda label: (left[label], label))
    column_of = {label: k for k, label in enumerate(order)}

    return [
        replace(obj, column_index=column_of[label]) for obj, label in zip(objects, labels)
    ]


def column_major_sort(objects):
    return sorted(
        objects, key=lambda obj: (obj.page, obj.column_index, obj.bbox.y, obj.bbox.x)
    )


def _gap(start_a, end_a, start_b, end_b):
    return max(0.0, max(start_a, start_b) - min(end_a, end_b))


def _nearest_major(minor, majors):
    """The major nearest ``minor`` by vertical gap; then horizontal gap,
    then the one above, then scan position."""

    def distance(item):
        position, major = item
        return (
            _gap(minor.bbox.y, minor.bbox.y1, major.bbox.y, major.bbox.y1),
            _gap(minor.bbox.x, minor.bbox.x1, major.bbox.x, major.bbox.x1),
            0 if major.bbox.y <= minor.bbox.y else 1,
            position,
        )

    return min(majors, key=distance)[0] if majors else None


def group(objects):
    """
    Merge minor objects into the nearest major of their column. A major
    that is a designation starts closed; one that absorbs a designation
    minor closes. Minors whose nearest major is closed, or that have none,
    become groups of their own. Objects are scanned in the given
    (column-major) order.
    """
    objects = list(objects)
    members = {}
    closed = {}

    majors_by_column = {}
    for position, obj in enumerate(objects):
        if obj.is_major:
            majors_by_column.setdefault((obj.page, obj.column_index), []).append(
                (position, obj)
            )
            members[position] = [position]
            closed[position] = obj.is_designation

    for position, obj in enumerate(objects):
        if obj.is_major:
            continue
        target = _nearest_major(
            obj, majors_by_column.get((obj.page, obj.column_index), [])
        )
        if target is None or closed[target]:
            members[position] = [position]
            closed[position] = obj.is_designation
            continue
        members[target].append(position)
        if obj.is_designation:
            closed[target] = True

    groups = []
    for head in sorted(members, key=lambda head: min(members[head])):
        positions = sorted(members[head])
        groups.append(EntityGroup([objects[p] for p in positions], closed[head]))
    return groups


def top_to_bottom(doc, line_ids):
    def key(line_id):
        bbox = doc.line(line_id).bbox
        return bbox.y, bbox.x, doc.line_position(line_id)

    return sorted(line_ids, key=key)


def emit_entities(groups, doc, category):
    """
    One entity per group: words of each object's lines, objects in group
    order and lines top to bottom, so a block the OCR read out of order
    still comes out as printed. A word already claimed by an earlier
    group is left out; groups left with no words yield no entity.
    """
    claimed = set()
    entities = []
    for entity_group in groups:
        tokens = []
        for obj in entity_group.objects:
            for line_id in top_to_bottom(doc, obj.member_lines):
                for index in doc.line(line_id).word_indices:
                    if index not in claimed:
                        claimed.add(index)
                        tokens.append(index)
        if tokens:
            entities.append(NamedEntity(category, tuple(tokens)))
        else:
            logger.debug("%s: dropped a group whose words were all claimed", doc.doc_id)
    return entities


def detect_objects(doc, page, boxes, cfg):
    """Bind (bbox, category, confidence) boxes of one page to its lines and
    classify them. Boxes covering no line are dropped."""
    objects = []
    for bbox, category, confidence in boxes:
        lines = attach_lines(doc, bbox, page, cfg.attach_min_overlap)
        if not lines:
            logger.debug("%s p%d: box covers no line, dropped", doc.doc_id, page)
            continue
        obj = DetectedObject(bbox, category, confidence, lines, page=page)
        if cfg.exclude_pro_se and PRO_SE_PATTERN.search(object_text(obj, doc)):
            logger.info("%s p%d: dropped a pro se object", doc.doc_id, page)
            continue
        objects.append(classify(obj, doc, cfg.major_line_threshold))
    return objects


def load_predictions(predictions, doc, cfg):
    """
    Turn detector output for one document ({page: [Prediction, ...]}) into
    classified DetectedObjects: keep the configured category at or above the
    confidence threshold, and keep only the largest of overlapping boxes.
    """
    objects = []
    for page in sorted(predictions):
        kept = [
            p
            for p in predictions[page]
            if p.category == cfg.category and p.score >= cfg.confidence_threshold
        ]
        dropped = len(predictions[page]) - len(kept)
        if dropped:
            logger.debug(
                "%s p%d: %d prediction(s) below threshold or off category",
                doc.doc_id,
                page,
                dropped,
            )
        survivors = suppress_overlaps([(p.bbox, p) for p in kept])
        objects.extend(
            detect_objects(
                doc, page, [(p.bbox, p.category, p.score) for _, p in survivors], cfg
            )
        )
    return objects


def postprocess(doc, objects, cfg):
    """Column detection, column-major ordering, grouping and entity emission
    for all DetectedObjects of one document."""
    ordered = []
    for page in sorted({obj.page for obj in objects}):
        ordered.extend(column_major_sort(x_cut(o for o in objects if o.page == page)))
    groups = group(ordered)
    entities = emit_entities(groups, doc, cfg.category)
    logger.info(
        "%s: %d object(s) -> %d group(s) -> %d entit(ies)",
        doc.doc_id,
        len(objects),
        len(groups),
        len(entities),
    )
    return entities


def gold_boxes(doc, entities, category):
    """
    Object-level boxes of gold entities: per entity and page, the tight box
    of the lines holding its words. One PseudoLabelSet per page.
    """
    by_page = {page: [] for page in range(len(doc.pages))}
    for entity in entities:
        lines = {}
        for index in entity.tokens:
            line = doc.line_of(index)
            lines.setdefault(line.page, {})[line.id] = line.bbox
        for page, boxes in sorted(lines.items()):
            by_page[page].append(tight_bbox(list(boxes.values())))

    label_sets = []
    for page, boxes in by_page.items():
        width, height = doc.page_size(page)
        label_sets.append(
            PseudoLabelSet(
                doc.doc_id,
                page,
                width,
                height,
                tuple(
                    PseudoBox(bbox, bbox.to_pixels(width, height), category, "gold")
                    for bbox in boxes
                ),
            )
        )
    return label_sets
