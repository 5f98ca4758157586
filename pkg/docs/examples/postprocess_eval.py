#!/usr/bin/env python

from pseudolay.document import DocumentEntities
from pseudolay.evaluate import evaluate_corpus, format_table
from pseudolay.postproc import PostprocConfig, gold_boxes, load_predictions, postprocess
from pseudolay.readers.coco_reader import Prediction
from pseudolay.synth import SynthConfig, generate


if __name__ == "__main__":
    pred_docs, gold_docs = [], []
    for seed in range(5):
        document, gold, _ = generate(SynthConfig(seed=seed, profiles_per_page=4))

        # Stand in for a detector: one prediction per gold profile box.
        (label_set,) = gold_boxes(document, gold, "attorney_profile")
        predictions = {
            0: [Prediction(box.bbox, box.category, 0.9) for box in label_set.boxes]
        }

        # Group the detected objects into entities.
        cfg = PostprocConfig()
        objects = load_predictions(predictions, document, cfg)
        entities = postprocess(document, objects, cfg)

        pred_docs.append(DocumentEntities.from_named(document, entities))
        gold_docs.append(DocumentEntities.from_named(document, gold))

    report, table = evaluate_corpus(pred_docs, gold_docs)
    print(format_table(table))
    print(report.to_dict())
