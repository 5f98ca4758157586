#!/usr/bin/env python

import pseudolay as pl
from pseudolay.aligner import AlignConfig, align_document
from pseudolay.pseudo_labeler import SelectConfig, pseudo_label
from pseudolay.segmenter import SegConfig, segment_document
from pseudolay.synth import SynthConfig, generate


if __name__ == "__main__":
    # Generate one two-column page with two attorney profiles, together
    # with its gold entities and its inexact (image-level) label.
    document, gold, label = generate(SynthConfig(seed=42))
    print(document.words_frame().head())

    # Grow paragraph RoIs from the OCR lines.
    (result,) = segment_document(document, SegConfig.from_options())
    print(result.halt_reason, result.history)

    # Align the label text with the words and keep the RoIs it mentions.
    with pl.option_context(phi=1):
        matrix = align_document(document, label, AlignConfig.from_options())
        (label_set,) = pseudo_label(
            document,
            matrix,
            result.rois,
            AlignConfig.from_options(),
            SelectConfig.from_options(),
        )

    for box in label_set.boxes:
        print(box.category, box.pixels)
