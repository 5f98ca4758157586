# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import argparse
import logging
import multiprocessing as mp
import os
import sys

import pandas as pd

import pseudolay
from pseudolay.aligner import (
    AlignConfig,
    AttentionMatrix,
    align_document,
    line_scores,
    scores_frame,
)
from pseudolay.document import Document, DocumentEntities, InexactLabel
from pseudolay.evaluate import evaluate_corpus, format_table
from pseudolay.postproc import PostprocConfig, load_predictions, postprocess
from pseudolay.pseudo_labeler import SPLITS, SelectConfig, pseudo_label, split_documents
from pseudolay.readers.coco_reader import COCOReader, CocoDataset
from pseudolay.readers.label_reader import EntityReader, LabelReader, json_files, read_path
from pseudolay.readers.roi_reader import RoiReader
from pseudolay.segmenter import SegConfig, segment_document
from pseudolay.synth import SynthConfig, write_corpus
from pseudolay.util.config import (
    LOG_LEVELS,
    get_option,
    load_config,
    reset_option,
    set_option,
)
from pseudolay.util.errors import PseudolayError, ValidationError
from pseudolay.util.files import atomic_write, dump_json
from pseudolay.writers.coco_writer import COCOWriter
from pseudolay.writers.entity_writer import EntityWriter
from pseudolay.writers.roi_writer import RoiWriter
from pseudolay.writers.svg_writer import render_overlay

logger = logging.getLogger(__name__)

OVERLAY_COLORS = ["green", "orange", "blue", "red", "purple"]

# (flag, option, type); type None marks a switch setting the option to True
SEG_FLAGS = [
    ("--kernel-w", "kernel_w", int),
    ("--kernel-h", "kernel_h", int),
    ("--patience", "patience", int),
    ("--min-aggregation-ratio", "min_aggregation_ratio", float),
    ("--max-iterations", "max_iterations", int),
]
ALIGN_FLAGS = [
    ("--sim-threshold", "sim_threshold", float),
    ("--psi", "psi", float),
    ("--activation-mode", "activation_mode", str),
]
SELECT_FLAGS = [
    ("--phi", "phi", int),
    ("--category", "category", str),
    ("--split", "split", None),
]
POSTPROC_FLAGS = [
    ("--confidence-threshold", "confidence_threshold", float),
    ("--major-line-threshold", "major_line_threshold", int),
    ("--attach-min-overlap", "attach_min_overlap", float),
    ("--exclude-pro-se", "exclude_pro_se", None),
    ("--category", "category", str),
]
SYNTH_FLAGS = [
    ("--seed", "seed", int),
    ("--columns", "columns", int),
    ("--profiles-per-page", "profiles_per_page", int),
    ("--noise-rate", "noise_rate", float),
    ("--sim-threshold", "sim_threshold", float),
]


def configure_logging(level):
    """Send pseudolay log records to stderr at ``level``."""
    package_logger = logging.getLogger("pseudolay")
    for handler in list(package_logger.handlers):
        if getattr(handler, "_pseudolay_cli", False):
            package_logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._pseudolay_cli = True
    package_logger.addHandler(handler)
    package_logger.setLevel(level)


def parallel_map(func, items, jobs):
    """map over documents, fanned out over ``jobs`` processes when > 1."""
    items = list(items)
    if jobs > 1 and len(items) > 1:
        with mp.Pool(min(jobs, len(items))) as pool:
            return pool.map(func, items)
    return [func(item) for item in items]


def load_documents(path):
    """Documents of one OCR JSON file or of every JSON file in a directory,
    ordered by doc_id."""
    documents = [Document.from_file(filename) for filename in json_files(path)]
    if not documents:
        raise ValidationError("no OCR JSON documents under {}".format(path))

    seen = set()
    for document in documents:
        if document.doc_id in seen:
            raise ValidationError("duplicate doc_id {!r} in {}".format(document.doc_id, path))
        seen.add(document.doc_id)
    return sorted(documents, key=lambda d: d.doc_id)


def load_labels(path, documents):
    labels = {label.doc_id: label for label in read_path(path, LabelReader)}
    missing = [d.doc_id for d in documents if d.doc_id not in labels]
    if missing:
        logger.warning("%d document(s) have no inexact label", len(missing))
    return {d.doc_id: labels.get(d.doc_id, InexactLabel(d.doc_id, ())) for d in documents}


def load_coco(path):
    with open(path, "rb") as f:
        return COCOReader(f.read()).read()


def _segment_one(args):
    document, cfg = args
    return document.doc_id, segment_document(document, cfg)


def _align_one(args):
    document, label, cfg = args
    return document.doc_id, align_document(document, label, cfg)


def _pseudo_one(args):
    document, matrix, results, align_cfg, select_cfg = args
    rois = [roi for result in results for roi in result.rois]
    return pseudo_label(document, matrix, rois, align_cfg, select_cfg)


def segment_corpus(documents, seg_cfg, jobs=1):
    return dict(parallel_map(_segment_one, [(d, seg_cfg) for d in documents], jobs))


def align_corpus(documents, labels, align_cfg, jobs=1):
    return dict(
        parallel_map(
            _align_one, [(d, labels[d.doc_id], align_cfg) for d in documents], jobs
        )
    )


def pseudo_corpus(documents, matrices, results, align_cfg, select_cfg, jobs=1):
    for document in documents:
        if document.doc_id not in results:
            raise ValidationError("no RoIs for document {!r}".format(document.doc_id))
    label_sets = parallel_map(
        _pseudo_one,
        [
            (d, matrices[d.doc_id], results[d.doc_id], align_cfg, select_cfg)
            for d in documents
        ],
        jobs,
    )
    return [label_set for sets in label_sets for label_set in sets]


def split_path(path, name):
    root, ext = os.path.splitext(path)
    return "{}_{}{}".format(root, name, ext or ".json")


def write_pseudo(label_sets, out, category):
    """Write the COCO file and, with the split option, train/val/test files."""
    COCOWriter(CocoDataset.from_label_sets(label_sets, [category]), out).write()

    if get_option("split"):
        assignment = split_documents(
            sorted({s.doc_id for s in label_sets}), seed=get_option("seed")
        )
        for name in SPLITS:
            subset = [s for s in label_sets if assignment[s.doc_id] == name]
            COCOWriter(
                CocoDataset.from_label_sets(subset, [category]), split_path(out, name)
            ).write()
    logger.info(
        "wrote %d pseudo box(es) on %d page(s) to %s",
        sum(len(s.boxes) for s in label_sets),
        len(label_sets),
        out,
    )


def read_attention(attn_dir, document):
    for ext in (".attn", ".json"):
        filename = os.path.join(attn_dir, document.doc_id + ext)
        if os.path.exists(filename):
            with open(filename, "rb") as f:
                return AttentionMatrix.from_stream(f.read(), len(document.words))
    raise FileNotFoundError(
        "no attention matrix for {!r} in {}".format(document.doc_id, attn_dir)
    )


def cmd_segment(args):
    documents = load_documents(args.input)
    results = segment_corpus(documents, SegConfig.from_options(), get_option("jobs"))
    RoiWriter(results, args.out).write()
    return 0


def cmd_align(args):
    documents = load_documents(args.input)
    labels = load_labels(args.labels, documents)
    matrices = align_corpus(documents, labels, AlignConfig.from_options(), get_option("jobs"))

    ext = ".json" if args.json else ".attn"
    frames = []
    for document in documents:
        matrix = matrices[document.doc_id]
        matrix.to_attn(os.path.join(args.out, document.doc_id + ext), binary=not args.json)
        if args.scores:
            frame = scores_frame(line_scores(matrix, document))
            frame.insert(0, "doc_id", document.doc_id)
            frames.append(frame)

    if args.scores:
        table = pd.concat(frames, ignore_index=True)
        atomic_write(
            args.scores, table.to_csv(index=False, lineterminator="\n").encode("utf-8")
        )
    return 0


def cmd_pseudo(args):
    documents = load_documents(args.input)
    with open(args.rois, "rb") as f:
        results = RoiReader(f.read()).read()
    matrices = {d.doc_id: read_attention(args.attn, d) for d in documents}

    select_cfg = SelectConfig.from_options()
    label_sets = pseudo_corpus(
        documents,
        matrices,
        results,
        AlignConfig.from_options(),
        select_cfg,
        get_option("jobs"),
    )
    write_pseudo(label_sets, args.out, select_cfg.category)
    return 0


def cmd_pipeline(args):
    documents = load_documents(args.input)
    labels = load_labels(args.labels, documents)
    jobs = get_option("jobs")
    align_cfg, select_cfg = AlignConfig.from_options(), SelectConfig.from_options()

    results = segment_corpus(documents, SegConfig.from_options(), jobs)
    matrices = align_corpus(documents, labels, align_cfg, jobs)
    label_sets = pseudo_corpus(documents, matrices, results, align_cfg, select_cfg, jobs)
    write_pseudo(label_sets, args.out, select_cfg.category)
    return 0


def cmd_postprocess(args):
    documents = load_documents(args.input)
    predictions = load_coco(args.pred).predictions()
    cfg = PostprocConfig.from_options()

    by_doc = {}
    for (doc_id, page), preds in predictions.items():
        by_doc.setdefault(doc_id, {})[page] = preds
    unknown = sorted(set(by_doc) - {d.doc_id for d in documents})
    if unknown:
        logger.warning("predictions for %d unknown document(s) ignored", len(unknown))

    output = []
    for document in documents:
        objects = load_predictions(by_doc.get(document.doc_id, {}), document, cfg)
        entities = postprocess(document, objects, cfg)
        output.append(DocumentEntities.from_named(document, entities))

    EntityWriter(output, args.out).write()
    return 0


def cmd_eval(args):
    pred = read_path(args.pred, EntityReader)
    gold = read_path(args.gold, EntityReader)
    report, table = evaluate_corpus(pred, gold, get_option("ignore_case"))

    if args.out:
        atomic_write(args.out, dump_json(report.to_dict()))
    text = format_table(table)
    if args.table:
        atomic_write(args.table, text.encode("utf-8"))
    sys.stdout.write(text)
    return 0


def cmd_synth(args):
    cfg = SynthConfig.from_options()
    write_corpus(args.out, args.count, cfg, AlignConfig.from_options())
    return 0


def parse_box_set(text, position):
    """NAME=PATH[:COLOR] -> (name, path, color)."""
    if "=" not in text:
        raise ValueError("box set {!r} must look like NAME=PATH[:COLOR]".format(text))
    name, rest = text.split("=", 1)
    path, _, color = rest.partition(":")
    return name, path, color or OVERLAY_COLORS[position % len(OVERLAY_COLORS)]


def cmd_render(args):
    documents = load_documents(args.input)
    box_sets = []
    for position, text in enumerate(args.boxes or []):
        name, path, color = parse_box_set(text, position)
        box_sets.append((name, load_coco(path).predictions(), color))

    for document in documents:
        overlay = {
            name: [
                (pred.bbox, color, page)
                for (doc_id, page), preds in sorted(predictions.items())
                if doc_id == document.doc_id
                for pred in preds
            ]
            for name, predictions, color in box_sets
        }
        for page, svg in enumerate(render_overlay(document, overlay)):
            atomic_write(
                os.path.join(args.out, "{}_p{}.svg".format(document.doc_id, page)), svg
            )
    return 0


def add_flags(parser, flags):
    for flag, option, kind in flags:
        if kind is None:
            parser.add_argument(flag, dest=option, action="store_const", const=True)
        else:
            parser.add_argument(flag, dest=option, type=kind)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pseudolay",
        description="Pseudo labels for document layout analysis from inexact entity labels.",
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + pseudolay.__version__
    )
    parser.add_argument("--config", help="JSON file of option values")
    parser.add_argument(
        "--log-level", dest="log_level", type=str.upper, choices=LOG_LEVELS
    )
    parser.add_argument("--jobs", dest="jobs", type=int, help="worker processes")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("segment", help="paragraph RoIs per page")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    add_flags(p, SEG_FLAGS)
    p.set_defaults(func=cmd_segment)

    p = subparsers.add_parser("align", help="attention matrices from inexact labels")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--json", action="store_true", help="write JSON instead of ATTN")
    p.add_argument("--scores", help="CSV file of line scores")
    add_flags(p, ALIGN_FLAGS)
    p.set_defaults(func=cmd_align)

    p = subparsers.add_parser("pseudo", help="select RoIs and write pseudo labels")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--rois", required=True)
    p.add_argument("--attn", required=True, help="directory of attention matrices")
    p.add_argument("--out", required=True)
    add_flags(p, ALIGN_FLAGS + SELECT_FLAGS)
    p.set_defaults(func=cmd_pseudo)

    p = subparsers.add_parser("pipeline", help="segment, align and pseudo in one go")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    add_flags(p, SEG_FLAGS + ALIGN_FLAGS + SELECT_FLAGS)
    p.set_defaults(func=cmd_pipeline)

    p = subparsers.add_parser("postprocess", help="group detected objects into entities")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--pred", required=True, help="COCO-style detections")
    p.add_argument("--out", required=True)
    add_flags(p, POSTPROC_FLAGS)
    p.set_defaults(func=cmd_postprocess)

    p = subparsers.add_parser("eval", help="score predicted entities against gold")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--out", help="JSON report")
    p.add_argument("--table", help="text table")
    p.add_argument("--ignore-case", dest="ignore_case", action="store_const", const=True)
    p.set_defaults(func=cmd_eval)

    p = subparsers.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--count", type=int, default=1)
    add_flags(p, SYNTH_FLAGS)
    p.add_argument("--scramble", dest="scramble", action="store_const", const=True)
    p.add_argument("--no-scramble", dest="scramble", action="store_const", const=False)
    p.set_defaults(func=cmd_synth)

    p = subparsers.add_parser("render", help="SVG overlays of box sets")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--boxes", action="append", help="NAME=COCO_FILE[:COLOR]")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_render)

    return parser


def apply_overrides(args):
    """Flags given on the command line win over the config file."""
    for key, value in sorted(vars(args).items()):
        if value is None or key in ("func", "command", "config", "input", "out"):
            continue
        try:
            get_option(key)
        except ValueError:
            continue
        set_option(key, value)


def run(argv=None):
    """Run one subcommand; returns 0 on success, 1 on bad input, 2 on usage
    errors."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    reset_option("all")
    configure_logging(args.log_level or get_option("log_level"))
    try:
        if getattr(args, "count", 0) < 0:
            raise ValueError("--count must be non-negative")
        if args.config:
            load_config(args.config)
        apply_overrides(args)
        configure_logging(get_option("log_level"))
        return args.func(args)
    except (PseudolayError, OSError, ValueError, TypeError) as e:
        logger.error("%s", e)
        return 1


def main():
    sys.exit(run())
