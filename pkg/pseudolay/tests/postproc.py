# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import pytest

from pseudolay.document import BBox, Document, Line, NamedEntity, Page, Word, check_disjoint
from pseudolay.postproc import (
    DetectedObject,
    EntityGroup,
    PostprocConfig,
    attach_lines,
    classify,
    column_major_sort,
    emit_entities,
    gold_boxes,
    group,
    load_predictions,
    postprocess,
    x_cut,
)
from pseudolay.readers.coco_reader import Prediction
from pseudolay.synth import SynthConfig, generate


def stacked_doc(texts, order=None, x=0.1):
    """One line per text, stacked top to bottom; ``order`` lists the visual
    rows in the order the OCR file declares them."""
    order = list(range(len(texts))) if order is None else order
    words, lines = [], []
    for row in order:
        y = 0.02 + 0.03 * row
        start = len(words)
        for k, token in enumerate(texts[row].split()):
            words.append(Word(token, BBox(x + 0.05 * k, y, 0.04, 0.02), len(words)))
        lines.append(
            Line("r{:02d}".format(row), BBox(x, y, 0.05 * (len(words) - start), 0.02), start, len(words) - 1, 0)
        )
    return Document("stacked", (Page(1000, 1000, tuple(lines)),), tuple(words))


def obj(y0, y1, x0=0.1, x1=0.4, major=False, designation=False, column=0, lines=()):
    return DetectedObject(
        BBox.from_edges(x0, y0, x1, y1),
        "attorney_profile",
        1.0,
        tuple(lines),
        is_major=major,
        is_designation=designation,
        column_index=column,
    )


def test_attach_lines():
    doc = stacked_doc(["a b c", "d e f", "g h i"])
    rows = [line.bbox for line in doc.lines]

    box = BBox.from_edges(0.0, rows[0].y, 0.5, rows[1].y1)
    assert attach_lines(doc, box) == ("r00", "r01")

    # covers 40% of the third line's height only
    partial = BBox.from_edges(0.0, rows[2].y, 0.5, rows[2].y + 0.4 * rows[2].h)
    assert attach_lines(doc, partial) == ()

    half = BBox.from_edges(0.0, rows[2].y, 0.5, rows[2].y + 0.5 * rows[2].h)
    assert attach_lines(doc, half) == ("r02",)


def test_attach_lines_document_order():
    doc = stacked_doc(["a", "b", "c"], order=[2, 0, 1])
    box = BBox.from_edges(0.0, 0.0, 0.5, 0.5)
    assert attach_lines(doc, box) == ("r02", "r00", "r01")


def test_classify():
    texts = ["x{}".format(k) for k in range(6)]
    doc = stacked_doc(texts + ["Attorneys for Petitioner", "California"])
    ids = [line.id for line in doc.lines]

    assert classify(obj(0, 0.2, lines=ids[:6]), doc).is_major
    assert not classify(obj(0, 0.2, lines=ids[:5]), doc).is_major

    assert classify(obj(0, 0.3, lines=[ids[6]]), doc).is_designation
    assert not classify(obj(0, 0.3, lines=[ids[7]]), doc).is_designation
    assert classify(obj(0, 0.3, lines=ids[5:7]), doc).is_designation

    assert classify(obj(0, 0.2, lines=ids[:2]), doc, major_line_threshold=1).is_major


def test_x_cut():
    a = obj(0.1, 0.2, 0.1, 0.4)
    b = obj(0.1, 0.2, 0.6, 0.9)
    assert [o.column_index for o in x_cut([b, a])] == [1, 0]

    chain = [obj(0.1, 0.2, 0.1, 0.3), obj(0.3, 0.4, 0.25, 0.5), obj(0.5, 0.6, 0.45, 0.7)]
    assert [o.column_index for o in x_cut(chain)] == [0, 0, 0]

    # touching x-extents are separate columns
    touching = [obj(0.1, 0.2, 0.125, 0.25), obj(0.3, 0.4, 0.25, 0.5)]
    assert [o.column_index for o in x_cut(touching)] == [0, 1]

    assert x_cut([]) == []


def test_column_major_sort():
    right = obj(0.1, 0.2, column=1)
    left = obj(0.9, 0.95, column=0)
    assert column_major_sort([right, left]) == [left, right]

    low = obj(0.5, 0.6)
    high = obj(0.2, 0.3)
    assert column_major_sort([low, high]) == [high, low]


def test_group_nearest_major():
    m1 = obj(0.1, 0.3, major=True)
    m = obj(0.32, 0.34)
    m2 = obj(0.5, 0.7, major=True)

    groups = group([m1, m, m2])
    assert [g.objects for g in groups] == [[m1, m], [m2]]


def test_group_designation_major_is_closed():
    d = obj(0.1, 0.3, major=True, designation=True)
    minor = obj(0.35, 0.4)

    groups = group([d, minor])
    assert [g.objects for g in groups] == [[d], [minor]]
    assert groups[0].closed


def test_group_closes_on_absorbing_designation():
    major = obj(0.1, 0.3, major=True)
    designation = obj(0.32, 0.34, designation=True)
    late = obj(0.36, 0.38)
    far = obj(0.8, 0.95, major=True)

    groups = group([major, designation, late, far])
    assert [g.objects for g in groups] == [[major, designation], [late], [far]]
    assert groups[0].closed and not groups[2].closed


def test_group_stays_in_column():
    left = obj(0.1, 0.3, major=True, column=0)
    minor = obj(0.1, 0.12, x0=0.6, x1=0.9, column=1)

    groups = group([left, minor])
    assert [g.objects for g in groups] == [[left], [minor]]


def test_emit_entities():
    doc = stacked_doc(["a b c d e", "f g h i j"])
    assert emit_entities([], doc, "t") == []

    second = obj(0, 1, lines=["r01"])
    (entity,) = emit_entities([EntityGroup([second])], doc, "t")
    assert entity.tokens == (5, 6, 7, 8, 9)
    assert entity.type == "t"

    # a word already claimed is dropped; an emptied group yields nothing
    both = obj(0, 1, lines=["r00", "r01"])
    entities = emit_entities([EntityGroup([second]), EntityGroup([both]), EntityGroup([second])], doc, "t")
    assert [e.tokens for e in entities] == [(5, 6, 7, 8, 9), (0, 1, 2, 3, 4)]
    check_disjoint(entities)


def test_emit_entities_non_monotonic():
    # the OCR file lists the lower block's line before the upper block's
    doc = stacked_doc(["NAME", "Firm", "Attorneys for Petitioner"], order=[2, 0, 1])
    upper = obj(0.0, 0.07, lines=["r00", "r01"], major=True)
    lower = obj(0.08, 0.1, lines=["r02"])

    groups = group([upper, lower])
    (entity,) = emit_entities(groups, doc, "t")
    assert entity.text(doc) == "NAME Firm Attorneys for Petitioner"
    assert list(entity.tokens) != sorted(entity.tokens)


def test_emit_entities_reads_lines_top_to_bottom():
    # one block whose second row the OCR file lists first
    doc = stacked_doc(["NAME", "Firm", "Tel"], order=[1, 0, 2])
    block = obj(0.0, 0.1, lines=["r01", "r00", "r02"], major=True)

    (entity,) = emit_entities([EntityGroup([block])], doc, "t")
    assert entity.text(doc) == "NAME Firm Tel"
    assert entity.tokens == (1, 0, 2)


def synth_predictions(document, gold, score=1.0):
    (label_set,) = gold_boxes(document, gold, "attorney_profile")
    return {0: [Prediction(box.bbox, box.category, score) for box in label_set.boxes]}


def test_profile_box_attaches_its_lines():
    document, gold, _ = generate(SynthConfig(seed=42))
    (label_set,) = gold_boxes(document, gold, "attorney_profile")

    for entity, box in zip(gold, label_set.boxes):
        expected = {document.line_of(t).id for t in entity.tokens}
        assert set(attach_lines(document, box.bbox)) == expected


def test_synth_columns_and_order():
    cfg = SynthConfig(seed=11, profiles_per_page=4)
    document, gold, _ = generate(cfg)
    objects = load_predictions(synth_predictions(document, gold), document, PostprocConfig())

    columns = x_cut(objects)
    for o in columns:
        assert o.column_index == (0 if o.bbox.x < 0.5 else 1)

    # profiles were laid out round robin: even ones left, odd ones right
    ordered = column_major_sort(columns)
    # member lines come in document order
    firsts = [document.line_of(min(e.tokens)).id for e in gold]
    expected = [firsts[k] for k in (0, 2, 1, 3)]
    assert [o.member_lines[0] for o in ordered] == expected


def test_postprocess_recovers_gold():
    document, gold, _ = generate(SynthConfig(seed=42))
    cfg = PostprocConfig()
    objects = load_predictions(synth_predictions(document, gold), document, cfg)

    assert all(o.is_major and o.is_designation for o in objects)
    entities = postprocess(document, objects, cfg)
    assert sorted(e.text(document) for e in entities) == sorted(
        e.text(document) for e in gold
    )


def test_load_predictions_filters():
    document, gold, _ = generate(SynthConfig(seed=3, profiles_per_page=2))
    (label_set,) = gold_boxes(document, gold, "attorney_profile")
    first, second = (box.bbox for box in label_set.boxes)
    inner = BBox(first.x, first.y, first.w / 2, first.h / 2)

    predictions = {
        0: [
            Prediction(first, "attorney_profile", 0.5),
            Prediction(second, "attorney_profile", 0.49),
            Prediction(inner, "attorney_profile", 0.9),
            Prediction(second, "signature", 0.9),
        ]
    }
    objects = load_predictions(predictions, document, PostprocConfig())
    assert [o.bbox for o in objects] == [first]
    assert objects[0].confidence == 0.5

    objects = load_predictions(
        predictions, document, PostprocConfig(confidence_threshold=0.0)
    )
    assert [o.bbox for o in objects] == [first, second]


def test_pro_se_exclusion():
    doc = stacked_doc(["JANE ROE", "In Pro Se", "Petitioner", "x", "y", "z"])
    box = Prediction(BBox(0.0, 0.0, 0.9, 0.5), "attorney_profile", 1.0)

    assert len(load_predictions({0: [box]}, doc, PostprocConfig())) == 1
    assert load_predictions({0: [box]}, doc, PostprocConfig(exclude_pro_se=True)) == []


def test_gold_boxes(two_column_doc):
    entity = NamedEntity("attorney_profile", (0, 1, 5, 6))
    (label_set,) = gold_boxes(two_column_doc, [entity], "attorney_profile")

    (box,) = label_set.boxes
    assert box.source == "gold"
    assert box.bbox.as_tuple() == pytest.approx((0.05, 0.1, 0.3, 0.34 - 0.1))


def test_config_validation():
    with pytest.raises(ValueError):
        PostprocConfig(confidence_threshold=1.5)
    with pytest.raises(ValueError):
        PostprocConfig(attach_min_overlap=0.0)
