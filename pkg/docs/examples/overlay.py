#!/usr/bin/env python

from pseudolay.postproc import gold_boxes
from pseudolay.synth import SynthConfig, generate
from pseudolay.writers.svg_writer import render_overlay


if __name__ == "__main__":
    # Draw the gold profile boxes of a noisy synthetic page over its words.
    document, gold, _ = generate(SynthConfig(seed=3, noise_rate=0.05))
    (label_set,) = gold_boxes(document, gold, "attorney_profile")

    (svg,) = render_overlay(
        document, {"gold": [(box.bbox, "green") for box in label_set.boxes]}
    )
    with open("overlay.svg", "wb") as f:
        f.write(svg)
