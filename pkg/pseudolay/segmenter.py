# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from pseudolay.document import BBox, tight_bbox
from pseudolay.graph import Graph, box_edges, touching_pairs
from pseudolay.util.config import get_option

logger = logging.getLogger(__name__)

# slack in the touch test so pixel-aligned boxes that meet exactly still merge
TOUCH_TOLERANCE = 1e-9

HALT_PATIENCE = "patience"
HALT_RATIO = "aggregation_ratio"
HALT_MAX_ITERATIONS = "max_iterations"
HALT_EMPTY = "empty"


@dataclass(frozen=True)
class SegConfig:
    """Paragraph segmentation parameters. Kernel sizes are pixels added to
    each side per iteration."""

    kernel_w: int = 2
    kernel_h: int = 2
    patience: int = 3
    min_aggregation_ratio: float = 0.5
    max_iterations: int = 50

    def __post_init__(self):
        for name in ("kernel_w", "kernel_h", "patience", "max_iterations"):
            value = getattr(self, name)
            if type(value) is not int or value < 1:
                raise ValueError("{} must be an integer >= 1, got {!r}".format(name, value))
        if not 0 < self.min_aggregation_ratio <= 1:
            raise ValueError(
                "min_aggregation_ratio must lie in (0, 1], got {!r}".format(
                    self.min_aggregation_ratio
                )
            )

    @classmethod
    def from_options(cls):
        return cls(
            kernel_w=get_option("kernel_w"),
            kernel_h=get_option("kernel_h"),
            patience=get_option("patience"),
            min_aggregation_ratio=get_option("min_aggregation_ratio"),
            max_iterations=get_option("max_iterations"),
        )


@dataclass(frozen=True)
class ParagraphRoi:
    """A candidate paragraph: the tight box of its member lines."""

    bbox: BBox
    members: frozenset
    page: int

    def __post_init__(self):
        if not self.members:
            raise ValueError("a paragraph RoI needs at least one member line")

    def sort_key(self):
        return (self.page, self.bbox.y, self.bbox.x, tuple(sorted(self.members)))


@dataclass
class SegmentationResult:
    rois: list
    halt_reason: str
    iterations: int
    history: list = field(default_factory=list)

    @property
    def aggregation_ratio(self):
        return self.history[-1] / self.history[0] if self.history else 1.0


def dilate(bbox, kernel_w, kernel_h, page_w, page_h):
    """Grow ``bbox`` by kernel_w pixels left and right and kernel_h pixels
    up and down, clamped to the page."""
    dx, dy = kernel_w / page_w, kernel_h / page_h
    return BBox.from_edges(
        max(0.0, bbox.x - dx),
        max(0.0, bbox.y - dy),
        min(1.0, bbox.x1 + dx),
        min(1.0, bbox.y1 + dy),
    )


def _dilated_edges(rois, cfg, page_w, page_h):
    edges = box_edges([roi.bbox for roi in rois])
    dx, dy = cfg.kernel_w / page_w, cfg.kernel_h / page_h
    return np.column_stack(
        [
            np.maximum(0.0, edges[:, 0] - dx),
            np.maximum(0.0, edges[:, 1] - dy),
            np.minimum(1.0, edges[:, 2] + dx),
            np.minimum(1.0, edges[:, 3] + dy),
        ]
    )


def _merge_groups(rois, groups):
    merged = []
    for group in groups:
        members = frozenset().union(*(rois[i].members for i in group))
        # members' line boxes are enclosed by the current contours, so the
        # union of contours is the tight box of all member lines
        bbox = tight_bbox([rois[i].bbox for i in group])
        merged.append(ParagraphRoi(bbox, members, rois[group[0]].page))
    merged.sort(key=ParagraphRoi.sort_key)
    return merged, len(rois) - len(merged)


def merge_step(rois, cfg, page_w, page_h):
    """
    One morphology iteration: dilate every RoI contour, join the RoIs whose
    dilated boxes overlap or touch (transitively), and re-tighten each
    group to its member lines. Returns (rois, number of merges).
    """
    if not rois:
        return [], 0

    graph = Graph(len(rois))
    graph.add_edges(
        *touching_pairs(_dilated_edges(rois, cfg, page_w, page_h), TOUCH_TOLERANCE)
    )
    return _merge_groups(rois, graph.groups())


def _pixel_span(start, end, size):
    first = int(math.floor(start * size + TOUCH_TOLERANCE))
    last = int(math.ceil(end * size - TOUCH_TOLERANCE))
    first = min(max(first, 0), size - 1)
    return first, min(max(last, first + 1), size)


def raster_merge_step(rois, cfg, page_w, page_h):
    """
    Raster counterpart of merge_step: paint the RoIs on a page-sized mask,
    dilate it with a (2*kernel_h+1) x (2*kernel_w+1) block and label
    8-connected components. Agrees with merge_step for boxes on pixel
    boundaries.
    """
    if not rois:
        return [], 0

    mask = np.zeros((page_h, page_w), dtype=bool)
    anchors = []
    for roi in rois:
        c0, c1 = _pixel_span(roi.bbox.x, roi.bbox.x1, page_w)
        r0, r1 = _pixel_span(roi.bbox.y, roi.bbox.y1, page_h)
        mask[r0:r1, c0:c1] = True
        anchors.append((r0, c0))

    footprint = np.ones((2 * cfg.kernel_h + 1, 2 * cfg.kernel_w + 1), dtype=bool)
    dilated = ndimage.binary_dilation(mask, structure=footprint)
    labels, _ = ndimage.label(dilated, structure=np.ones((3, 3), dtype=bool))

    by_label = {}
    for i, (r, c) in enumerate(anchors):
        by_label.setdefault(int(labels[r, c]), []).append(i)
    groups = sorted(by_label.values(), key=lambda group: group[0])
    return _merge_groups(rois, groups)


def initial_rois(lines):
    """B_0: one RoI per line."""
    return sorted(
        (ParagraphRoi(line.bbox, frozenset([line.id]), line.page) for line in lines),
        key=ParagraphRoi.sort_key,
    )


def run_segmentation(lines, cfg, page_w, page_h, merge=merge_step):
    """
    Iterate ``merge`` from one RoI per line until no merge happened in the
    last ``patience`` iterations, the RoI count falls to
    min_aggregation_ratio of the line count or below, or max_iterations is
    reached. The iteration that crosses the ratio is kept.
    """
    lines = list(lines)
    if not lines:
        return SegmentationResult([], HALT_EMPTY, 0, [0])

    pages = {line.page for line in lines}
    if len(pages) > 1:
        raise ValueError("lines span pages {}; segment one page at a time".format(sorted(pages)))

    rois = initial_rois(lines)
    initial = len(rois)
    history, idle, reason = [initial], 0, HALT_MAX_ITERATIONS

    iteration = 0
    for iteration in range(1, cfg.max_iterations + 1):
        rois, merges = merge(rois, cfg, page_w, page_h)
        history.append(len(rois))
        idle = idle + 1 if merges == 0 else 0

        if len(rois) / initial <= cfg.min_aggregation_ratio:
            reason = HALT_RATIO
            break
        if idle >= cfg.patience:
            reason = HALT_PATIENCE
            break

    logger.debug(
        "page %d: %d lines -> %d RoIs after %d iteration(s), halted by %s",
        lines[0].page,
        initial,
        len(rois),
        iteration,
        reason,
    )
    return SegmentationResult(rois, reason, iteration, history)


def segment(lines, cfg, page_w, page_h):
    return run_segmentation(lines, cfg, page_w, page_h).rois


def segment_document(document, cfg):
    """Segment every page of ``document``; one SegmentationResult per page."""
    return [
        run_segmentation(page.lines, cfg, page.width_px, page.height_px)
        for page in document.pages
    ]
