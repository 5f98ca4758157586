# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from itertools import combinations

import numpy as np
import pytest

from pseudolay.aligner import AlignConfig, align_document
from pseudolay.document import BBox
from pseudolay.pseudo_labeler import (
    SPLITS,
    SelectConfig,
    emit_pseudo,
    pseudo_label,
    select_rois,
    split_documents,
    suppress_overlaps,
)
from pseudolay.segmenter import ParagraphRoi, SegConfig, segment_document
from pseudolay.synth import SynthConfig, generate


def roi(members, bbox=None):
    return ParagraphRoi(bbox or BBox(0.1, 0.1, 0.2, 0.1), frozenset(members), 0)


def test_select_rois_strict():
    rois = [roi(["a", "b"]), roi(["c", "d"]), roi(["e"])]
    active = {"a", "c", "d", "e"}

    assert select_rois(rois, active, phi=1) == [rois[1]]
    assert select_rois(rois, active, phi=0) == rois
    assert select_rois(rois, active, phi=2) == []
    with pytest.raises(ValueError):
        select_rois(rois, active, phi=-1)


def test_suppress_overlaps():
    a = BBox(0.0, 0.0, 0.2, 0.1)
    b = BBox(0.5, 0.5, 0.1, 0.1)
    assert suppress_overlaps([(a, "x"), (b, "x")]) == [(a, "x"), (b, "x")]

    big = BBox(0.125, 0.125, 0.25, 0.125)
    small = BBox(0.1875, 0.1875, 0.125, 0.125)
    assert suppress_overlaps([(small, "x"), (big, "x")]) == [(big, "x")]

    # ties keep the earlier box
    twin = BBox(0.25, 0.125, 0.25, 0.125)
    assert suppress_overlaps([(big, "x"), (twin, "x")]) == [(big, "x")]

    # touching is not overlapping
    right = BBox(0.375, 0.125, 0.25, 0.125)
    assert len(suppress_overlaps([(big, "x"), (right, "x")])) == 2


def test_suppress_chain():
    # A overlaps B, B overlaps C, A and C are apart; areas 1 < 2 < 3
    a = BBox(0.0, 0.0, 0.1, 0.1)
    b = BBox(0.05, 0.0, 0.1, 0.2)
    c = BBox(0.12, 0.0, 0.1, 0.3)
    assert not a.overlaps(c)

    assert suppress_overlaps([(a, "x"), (b, "x"), (c, "x")]) == [(c, "x")]


def test_suppress_random_invariants():
    rng = np.random.default_rng(3)
    for _ in range(30):
        boxes = []
        for _ in range(int(rng.integers(1, 12))):
            x, y = rng.uniform(0, 0.8, size=2)
            w, h = rng.uniform(0.01, 0.2, size=2)
            boxes.append((BBox(x, y, w, h), "x"))
        kept = suppress_overlaps(boxes)

        assert all(k in boxes for k in kept)
        for (p, _), (q, _) in combinations(kept, 2):
            assert not p.overlaps(q)
        assert suppress_overlaps(kept) == kept


def test_emit_pseudo_pixels():
    doc = generate(SynthConfig(seed=1)).document
    selected = [roi(["x"], BBox(0.1, 0.1, 0.2, 0.1))]

    label_set = emit_pseudo(doc, selected, "attorney_profile")
    assert label_set.width_px == 850 and label_set.height_px == 1100
    assert label_set.boxes[0].pixels == (85.0, 110.0, 170.0, 110.0)
    assert label_set.boxes[0].source == "pseudo"

    assert emit_pseudo(doc, [], "attorney_profile").boxes == ()


def test_selects_profiles_only():
    document, gold, label = generate(SynthConfig(seed=42))
    (result,) = segment_document(document, SegConfig())
    matrix = align_document(document, label, AlignConfig())

    (label_set,) = pseudo_label(
        document, matrix, result.rois, AlignConfig(), SelectConfig()
    )

    # one RoI for the caption, one per profile
    profiles = sorted(
        sorted({document.line_of(t).id for t in entity.tokens}) for entity in gold
    )
    assert len(result.rois) == len(gold) + 1

    contours = {r.bbox: sorted(r.members) for r in result.rois}
    assert len(label_set.boxes) == len(gold)
    assert sorted(contours[box.bbox] for box in label_set.boxes) == profiles


def test_phi_monotone():
    document, _, label = generate(SynthConfig(seed=5, profiles_per_page=4))
    (result,) = segment_document(document, SegConfig())
    matrix = align_document(document, label, AlignConfig())
    sizes = []
    for phi in range(0, 6):
        (label_set,) = pseudo_label(
            document, matrix, result.rois, AlignConfig(), SelectConfig(phi=phi)
        )
        sizes.append(len(label_set.boxes))
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))


def test_split_documents():
    ids = ["doc-{:02d}".format(k) for k in range(20)]
    assignment = split_documents(ids, seed=0)

    counts = {name: sum(1 for v in assignment.values() if v == name) for name in SPLITS}
    assert counts == {"train": 8, "val": 2, "test": 10}

    # depends on the ids, not their order
    assert split_documents(list(reversed(ids)), seed=0) == assignment
    assert split_documents(ids, seed=1) != assignment

    with pytest.raises(ValueError):
        split_documents(ids, ratios=(0.5, 0.5))
