# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import logging
from dataclasses import dataclass

import numpy as np

from pseudolay.aligner import active_lines, line_scores
from pseudolay.graph import Graph, box_edges, overlapping_pairs
from pseudolay.util.config import get_option

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelectConfig:
    phi: int = 1
    category: str = "attorney_profile"

    def __post_init__(self):
        if type(self.phi) is not int or self.phi < 0:
            raise ValueError("phi must be a non-negative integer")
        if not self.category:
            raise ValueError("category must be a non-empty string")

    @classmethod
    def from_options(cls):
        return cls(phi=get_option("phi"), category=get_option("category"))


@dataclass(frozen=True)
class PseudoBox:
    bbox: object  # normalized BBox
    pixels: tuple  # (x, y, w, h) in page pixels
    category: str
    source: str = "pseudo"


@dataclass(frozen=True)
class PseudoLabelSet:
    doc_id: str
    page: int
    width_px: int
    height_px: int
    boxes: tuple


def select_rois(rois, active, phi=1):
    """Keep the RoIs holding more than ``phi`` active lines."""
    if phi < 0:
        raise ValueError("phi must be non-negative")
    active = set(active)
    return [roi for roi in rois if len(roi.members & active) > phi]


def suppress_overlaps(boxes):
    """
    Among every connected group of overlapping boxes keep only the largest
    (by area; ties go to the earlier box). ``boxes`` is a list of
    (BBox, category); survivors keep their input order.
    """
    if not boxes:
        return []

    graph = Graph(len(boxes))
    graph.add_edges(*overlapping_pairs(box_edges([bbox for bbox, _ in boxes])))

    keep = []
    for group in graph.groups():
        areas = np.array([boxes[i][0].area for i in group])
        # argmax returns the first maximum, i.e. the smallest index
        keep.append(group[int(np.argmax(areas))])

    suppressed = len(boxes) - len(keep)
    if suppressed:
        logger.debug("suppressed %d overlapping box(es)", suppressed)
    return [boxes[i] for i in sorted(keep)]


def emit_pseudo(doc, selected, category, page=0):
    """Pseudo labels of one page: selected RoIs in pixels, overlap-free."""
    width, height = doc.page_size(page)
    boxes = suppress_overlaps(
        [(roi.bbox, category) for roi in selected if roi.page == page]
    )
    return PseudoLabelSet(
        doc.doc_id,
        page,
        width,
        height,
        tuple(
            PseudoBox(bbox, bbox.to_pixels(width, height), cat) for bbox, cat in boxes
        ),
    )


def emit_document(doc, selected, category):
    """One PseudoLabelSet per page, pages without selections included."""
    return [emit_pseudo(doc, selected, category, page) for page in range(len(doc.pages))]


def pseudo_label(doc, matrix, rois, align_cfg, select_cfg):
    """
    Pseudo-label selection for one document: score lines from ``matrix``, keep
    RoIs with enough active lines, and emit per-page label sets.
    """
    active = active_lines(
        line_scores(matrix, doc), align_cfg.psi, align_cfg.activation_mode
    )
    selected = select_rois(rois, active, select_cfg.phi)
    logger.info(
        "%s: %d active line(s), %d of %d RoI(s) selected",
        doc.doc_id,
        len(active),
        len(selected),
        len(rois),
    )
    return emit_document(doc, selected, select_cfg.category)


SPLITS = ("train", "val", "test")


def split_documents(doc_ids, ratios=(0.4, 0.1, 0.5), seed=0):
    """
    Deterministically assign documents to train/val/test in the given
    proportions. The assignment depends only on the sorted ids and seed.
    """
    if len(ratios) != len(SPLITS) or any(r < 0 for r in ratios) or sum(ratios) <= 0:
        raise ValueError("ratios must be three non-negative numbers")

    ordered = sorted(doc_ids)
    order = np.random.default_rng(seed).permutation(len(ordered))
    shuffled = [ordered[i] for i in order]

    total = float(sum(ratios))
    bounds = np.cumsum([r / total for r in ratios]) * len(shuffled)
    bounds = np.rint(bounds).astype(int)

    assignment, start = {}, 0
    for name, end in zip(SPLITS, bounds):
        for doc_id in shuffled[start:end]:
            assignment[doc_id] = name
        start = end
    for doc_id in shuffled[start:]:
        assignment[doc_id] = SPLITS[-1]
    return assignment
