# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import json
import os
import time

import pandas as pd
import pytest

from pseudolay.cli import parse_box_set, run


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def read_json(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def corpus_paths(corpus):
    return (
        os.path.join(corpus, "ocr"),
        os.path.join(corpus, "labels.json"),
        os.path.join(corpus, "gold.json"),
    )


def pipeline(corpus, out, *flags):
    ocr, labels, _ = corpus_paths(corpus)
    return run(list(flags) + ["pipeline", "--in", ocr, "--labels", labels, "--out", out])


def score(corpus, pseudo, tmpdir):
    """Group the boxes of a COCO file into entities and score them against
    the corpus gold."""
    ocr, _, gold = corpus_paths(corpus)
    entities = str(tmpdir.join("entities.json"))
    report = str(tmpdir.join("report.json"))
    assert run(["postprocess", "--in", ocr, "--pred", pseudo, "--out", entities]) == 0
    assert run(["eval", "--pred", entities, "--gold", gold, "--out", report]) == 0
    return read_json(report)


def test_pipeline(synth_corpus, tmpdir):
    out = str(tmpdir.join("pseudo.json"))
    assert pipeline(synth_corpus, out) == 0

    coco = read_json(out)
    assert [c["name"] for c in coco["categories"]] == ["attorney_profile"]
    assert len(coco["images"]) == 3
    # one box per profile, none for the caption
    assert len(coco["annotations"]) == 6


def test_pipeline_is_composition(synth_corpus, tmpdir):
    ocr, labels, _ = corpus_paths(synth_corpus)
    rois = str(tmpdir.join("rois.json"))
    attn = str(tmpdir.join("attn"))
    staged = str(tmpdir.join("staged.json"))
    combined = str(tmpdir.join("combined.json"))

    assert run(["segment", "--in", ocr, "--out", rois]) == 0
    assert run(["align", "--in", ocr, "--labels", labels, "--out", attn]) == 0
    assert sorted(os.listdir(attn)) == [
        "synth-00000.attn",
        "synth-00001.attn",
        "synth-00002.attn",
    ]
    assert (
        run(["pseudo", "--in", ocr, "--rois", rois, "--attn", attn, "--out", staged]) == 0
    )
    assert pipeline(synth_corpus, combined) == 0

    assert read_bytes(staged) == read_bytes(combined)


def test_pipeline_is_idempotent(synth_corpus, tmpdir):
    first = str(tmpdir.join("first.json"))
    second = str(tmpdir.join("second.json"))
    parallel = str(tmpdir.join("parallel.json"))

    assert pipeline(synth_corpus, first) == 0
    assert pipeline(synth_corpus, second) == 0
    assert pipeline(synth_corpus, parallel, "--jobs", "2") == 0

    assert read_bytes(first) == read_bytes(second) == read_bytes(parallel)


def test_pipeline_split(tmpdir):
    corpus = str(tmpdir.join("corpus"))
    assert run(["synth", "--out", corpus, "--count", "10"]) == 0

    out = str(tmpdir.join("pseudo.json"))
    ocr, labels, _ = corpus_paths(corpus)
    assert (
        run(["pipeline", "--in", ocr, "--labels", labels, "--out", out, "--split"]) == 0
    )

    sizes = {
        name: len(read_json(str(tmpdir.join("pseudo_{}.json".format(name))))["images"])
        for name in ("train", "val", "test")
    }
    assert sizes == {"train": 4, "val": 1, "test": 5}
    assert len(read_json(out)["images"]) == 10


def test_gold_boxes_recover_gold(synth_corpus, tmpdir):
    report = score(synth_corpus, os.path.join(synth_corpus, "gold_coco.json"), tmpdir)
    assert report["f1"] == 1.0
    assert report["mean_edit_distance"] == 0.0


def test_pseudo_labels_recover_gold(tmpdir):
    started = time.perf_counter()
    corpus = str(tmpdir.join("corpus"))
    assert run(["synth", "--out", corpus, "--count", "100", "--seed", "0"]) == 0

    out = str(tmpdir.join("pseudo.json"))
    assert pipeline(corpus, out) == 0
    report = score(corpus, out, tmpdir)
    assert time.perf_counter() - started < 30

    assert report["gold_count"] == 200
    assert report["f1"] == 1.0
    assert report["mean_edit_distance"] == 0.0


def test_noisy_pseudo_labels(tmpdir):
    corpus = str(tmpdir.join("corpus"))
    assert run(
        ["synth", "--out", corpus, "--count", "100", "--seed", "0", "--noise-rate", "0.05"]
    ) == 0

    out = str(tmpdir.join("pseudo.json"))
    assert pipeline(corpus, out) == 0
    report = score(corpus, out, tmpdir)
    assert set(report) >= {"precision", "recall", "f1", "mean_edit_distance"}
    assert report["gold_count"] == 200
    assert report["recall"] >= 0.8


def test_zero_sized_image(synth_corpus, tmpdir):
    ocr = os.path.join(synth_corpus, "ocr")
    pred = tmpdir.join("pred.json")
    pred.write(
        json.dumps(
            {
                "images": [
                    {"id": 1, "file_name": "synth-00000_p0.png", "width": 0, "height": 1100}
                ],
                "annotations": [
                    {"id": 1, "image_id": 1, "category_id": 1, "bbox": [60, 140, 300, 100]}
                ],
                "categories": [{"id": 1, "name": "attorney_profile"}],
            }
        )
    )
    out = str(tmpdir.join("entities.json"))
    assert run(["postprocess", "--in", ocr, "--pred", str(pred), "--out", out]) == 1
    assert not os.path.exists(out)


def test_eval_self(synth_corpus, capsys):
    _, _, gold = corpus_paths(synth_corpus)
    assert run(["eval", "--pred", gold, "--gold", gold]) == 0

    out = capsys.readouterr().out
    assert "TOTAL" in out
    assert "synth-00002" in out


def test_align_scores(synth_corpus, tmpdir):
    ocr, labels, _ = corpus_paths(synth_corpus)
    scores = str(tmpdir.join("scores.csv"))
    attn = str(tmpdir.join("attn"))
    assert (
        run(["align", "--in", ocr, "--labels", labels, "--out", attn, "--json", "--scores", scores])
        == 0
    )

    assert all(name.endswith(".json") for name in os.listdir(attn))
    table = pd.read_csv(scores)
    assert list(table.columns) == ["doc_id", "line_id", "n_words", "mass", "normalized", "peak"]
    assert set(table["doc_id"]) == {"synth-00000", "synth-00001", "synth-00002"}


def test_render(synth_corpus, tmpdir):
    ocr = os.path.join(synth_corpus, "ocr")
    gold = os.path.join(synth_corpus, "gold_coco.json")
    out = str(tmpdir.join("svg"))
    assert run(["render", "--in", ocr, "--boxes", "gold=" + gold + ":green", "--out", out]) == 0

    names = sorted(os.listdir(out))
    assert names == ["synth-00000_p0.svg", "synth-00001_p0.svg", "synth-00002_p0.svg"]
    svg = read_bytes(os.path.join(out, names[0])).decode("utf-8")
    assert "set-gold" in svg and "<rect" in svg


def test_parse_box_set():
    assert parse_box_set("gold=a.json:red", 0) == ("gold", "a.json", "red")
    assert parse_box_set("pred=b.json", 1) == ("pred", "b.json", "orange")
    with pytest.raises(ValueError):
        parse_box_set("b.json", 0)


def test_config_file(synth_corpus, tmpdir):
    config = tmpdir.join("config.json")
    config.write(json.dumps({"phi": 1000}))
    out = str(tmpdir.join("pseudo.json"))
    assert pipeline(synth_corpus, out, "--config", str(config)) == 0
    assert read_json(out)["annotations"] == []

    # flags win over the file
    ocr, labels, _ = corpus_paths(synth_corpus)
    assert (
        run(
            ["--config", str(config), "pipeline", "--in", ocr, "--labels", labels]
            + ["--out", out, "--phi", "1"]
        )
        == 0
    )
    assert len(read_json(out)["annotations"]) == 6

    config.write(json.dumps({"no_such_option": 1}))
    assert pipeline(synth_corpus, out, "--config", str(config)) == 1


def test_errors(synth_corpus, tmpdir, capsys):
    missing = str(tmpdir.join("missing"))
    out = str(tmpdir.join("out.json"))
    assert run(["segment", "--in", missing, "--out", out]) == 1
    assert not os.path.exists(out)

    assert run(["segment", "--bogus"]) == 2
    assert run([]) == 2
    assert run(["synth", "--out", str(tmpdir), "--count", "-1"]) == 1
    assert run(["synth", "--out", str(tmpdir), "--columns", "3"]) == 1

    _, _, gold = corpus_paths(synth_corpus)
    assert run(["--log-level", "loud", "eval", "--pred", gold, "--gold", gold]) == 2
    assert run(["--log-level", "debug", "eval", "--pred", gold, "--gold", gold]) == 0

    bad = tmpdir.join("bad.json")
    bad.write("{not json")
    assert run(["segment", "--in", str(bad), "--out", out]) == 1


def test_version(capsys):
    assert run(["--version"]) == 0
    assert "pseudolay" in capsys.readouterr().out


def test_help_lists_log_levels(capsys):
    # the user guide embeds this text
    assert run(["--help"]) == 0
    out = capsys.readouterr().out
    assert "--log-level" in out
    assert "DEBUG" in out and "pipeline" in out
