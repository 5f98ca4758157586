# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


class Graph:
    """An undirected graph over ``n`` numbered nodes (boxes, objects, ...)
    whose only job is to report connected components."""

    def __init__(self, n) -> None:
        self.n = n
        self.rows = []
        self.cols = []

    def add_edges(self, rows, cols):
        self.rows.extend(int(r) for r in rows)
        self.cols.extend(int(c) for c in cols)

    def components(self):
        """
        Returns one label per node. Labels are renumbered in order of each
        component's smallest node, so the labeling does not depend on the
        order edges were added in.
        """
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)

        adjacency = coo_matrix(
            (np.ones(len(self.rows), dtype=np.int8), (self.rows, self.cols)),
            shape=(self.n, self.n),
        )
        _, labels = connected_components(adjacency, directed=False)

        canonical, relabeled = {}, np.empty(self.n, dtype=np.int64)
        for node, label in enumerate(labels):
            relabeled[node] = canonical.setdefault(label, len(canonical))
        return relabeled

    def groups(self):
        """Node lists per component, ordered by smallest node."""
        labels = self.components()
        groups = [[] for _ in range(int(labels.max()) + 1 if self.n else 0)]
        for node, label in enumerate(labels):
            groups[label].append(node)
        return groups

    def __str__(self) -> str:
        return "Graph: {} nodes, {} edges".format(self.n, len(self.rows))


def box_edges(boxes):
    """(n, 4) array of x0, y0, x1, y1 for a list of BBox."""
    if not boxes:
        return np.zeros((0, 4))
    return np.array([b.edges() for b in boxes], dtype=float)


def touching_pairs(edges, tolerance=0.0):
    """Index pairs (i < j) of closed boxes that overlap or touch."""
    x0, y0, x1, y1 = (edges[:, k] for k in range(4))
    hit = (
        (x0[:, None] <= x1[None, :] + tolerance)
        & (x0[None, :] <= x1[:, None] + tolerance)
        & (y0[:, None] <= y1[None, :] + tolerance)
        & (y0[None, :] <= y1[:, None] + tolerance)
    )
    return np.nonzero(np.triu(hit, k=1))


def overlapping_pairs(edges):
    """Index pairs (i < j) of boxes whose intersection has positive area."""
    x0, y0, x1, y1 = (edges[:, k] for k in range(4))
    hit = (
        (np.minimum(x1[:, None], x1[None, :]) - np.maximum(x0[:, None], x0[None, :]) > 0)
        & (np.minimum(y1[:, None], y1[None, :]) - np.maximum(y0[:, None], y0[None, :]) > 0)
    )
    return np.nonzero(np.triu(hit, k=1))


def interval_pairs(starts, ends):
    """Index pairs (i < j) of open intervals that overlap."""
    starts, ends = np.asarray(starts, dtype=float), np.asarray(ends, dtype=float)
    hit = (starts[:, None] < ends[None, :]) & (starts[None, :] < ends[:, None])
    return np.nonzero(np.triu(hit, k=1))


def component_labels(n, pairs):
    graph = Graph(n)
    graph.add_edges(*pairs)
    return graph.components()
