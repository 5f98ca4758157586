# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

"""
Synthetic caption pages: attorney profiles laid out in one or two columns
under a court caption, with gold entities and the reformatted inexact label
a court record would carry for them.
"""

import logging
import os
import string
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import pandas as pd

from pseudolay.aligner import AlignConfig, align_document
from pseudolay.document import (
    BBox,
    Document,
    DocumentEntities,
    InexactLabel,
    LabelEntity,
    Line,
    NamedEntity,
    Page,
    Word,
    tight_bbox,
)
from pseudolay.readers.coco_reader import CocoDataset
from pseudolay.util.config import get_option
from pseudolay.util.files import atomic_write
from pseudolay.writers.coco_writer import COCOWriter
from pseudolay.writers.entity_writer import EntityWriter, LabelWriter

logger = logging.getLogger(__name__)

PAGE_W, PAGE_H = 850, 1100
LINE_H, LINE_PITCH = 12, 14
CHAR_W = 6
CAPTION_Y, PROFILE_Y, PROFILE_GAP = 40, 140, 20
# scrambled OCR reads the page in strips this tall
ROW_BAND = 2 * LINE_PITCH
COLUMN_X = {1: (60,), 2: (60, 460)}
COLUMN_CHARS = {1: 120, 2: 56}

# caption vocabulary shares no word with profile vocabulary, even fuzzily
CAPTION_LINES = [
    "IN THE SUPREME COURT",
    "SECOND DISTRICT DIVISION THREE",
    "OPENING BRIEF ON THE MERITS",
    "AFTER DECISION BY THE LOWER COURT",
    "CIVIL CASE NUMBER PENDING",
    "HONORABLE JUDGE PRESIDING",
]

FIRST_NAMES = [
    "James", "Mary", "Robert", "Patricia", "Michael", "Jennifer", "William",
    "Linda", "David", "Elizabeth", "Richard", "Barbara", "Joseph", "Susan",
    "Thomas", "Jessica", "Charles", "Sarah", "Daniel", "Karen", "Matthew",
    "Nancy", "Anthony", "Claire", "Andrew", "Emily", "Joshua", "Rachel",
]  # fmt: skip
LAST_NAMES = [
    "Smith", "Johnson", "Williams", "Brown", "Jones", "Garcia", "Miller",
    "Davis", "Rodriguez", "Martinez", "Hernandez", "Wilson", "Anderson",
    "Taylor", "Jackson", "Thompson", "White", "Harris", "Clark", "Lewis",
    "Robinson", "Walker", "Young", "Allen", "Wright", "Nguyen", "Patel",
]  # fmt: skip
TITLES = [
    "Partner",
    "Senior Counsel",
    "Associate",
    "Deputy Attorney General",
    "Solicitor General",
    "Supervising Attorney",
]
FIRMS = [
    "Whitfield & Morgan LLP",
    "Baker Stone LLP",
    "Harlan Pierce LLP",
    "Keller Brandt PC",
    "Ashford Lane LLP",
    "Sterling Quinn LLP",
    "Calder Ross PC",
    "Norwood Hale LLP",
]
STREETS = ["Market", "Mission", "Broadway", "Spring", "Grand", "Flower", "Olive", "Harbor"]
STREET_SUFFIXES = ["Street", "Avenue", "Boulevard"]
# city, state, area code, zip prefix
CITIES = [
    ("San Francisco", "CA", 415, 941),
    ("Los Angeles", "CA", 213, 900),
    ("Oakland", "CA", 510, 946),
    ("Sacramento", "CA", 916, 958),
    ("Seattle", "WA", 206, 981),
    ("Portland", "OR", 503, 972),
]
DESIGNATIONS = [
    "Attorneys for Petitioner",
    "Attorneys for Respondent",
    "Counsel for Appellant",
    "Attorneys for Defendant",
    "Counsel for Amicus Curiae",
]


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    columns: int = 2
    profiles_per_page: int = 2
    noise_rate: float = 0.0
    scramble: bool = True
    category: str = field(default="attorney_profile")

    def __post_init__(self):
        if type(self.seed) is not int or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.columns not in (1, 2):
            raise ValueError("columns must be 1 or 2")
        if self.profiles_per_page not in range(1, 7):
            raise ValueError("profiles_per_page must lie in 1..6")
        if not 0 <= self.noise_rate <= 1:
            raise ValueError("noise_rate must lie in [0, 1]")

    @classmethod
    def from_options(cls, **overrides):
        values = dict(
            seed=get_option("seed"),
            columns=get_option("columns"),
            profiles_per_page=get_option("profiles_per_page"),
            noise_rate=get_option("noise_rate"),
            scramble=get_option("scramble"),
            category=get_option("category"),
        )
        values.update(overrides)
        return cls(**values)


class SynthDocument(NamedTuple):
    document: Document
    gold: list
    label: InexactLabel


@dataclass
class Profile:
    """One attorney: the lines as printed, and the sub-elements in the
    order court records list them."""

    lines: list
    elements: list


def doc_id_for(seed):
    return "synth-{:05d}".format(seed)


def make_profile(rng, first, last):
    city, state, area, zip_prefix = CITIES[rng.integers(len(CITIES))]
    firm = FIRMS[rng.integers(len(FIRMS))]
    zip_code = "{}{:02d}".format(zip_prefix, int(rng.integers(100)))
    phone = "({}) 555-{:04d}".format(area, int(rng.integers(10000)))
    fax = "({}) 555-{:04d}".format(area, int(rng.integers(10000)))
    street = "{} {} {}".format(
        int(rng.integers(100, 9999)),
        STREETS[rng.integers(len(STREETS))],
        STREET_SUFFIXES[rng.integers(len(STREET_SUFFIXES))],
    )
    if rng.random() < 0.5:
        street += ", Suite {}".format(int(rng.integers(100, 3000)))

    middle = " {}.".format(string.ascii_uppercase[rng.integers(26)]) if rng.random() < 0.3 else ""
    name = "{}{} {}".format(first, middle, last)
    title = TITLES[rng.integers(len(TITLES))] if rng.random() < 0.7 else None
    bar = str(int(rng.integers(100000, 999999))) if rng.random() < 0.6 else None
    has_fax = rng.random() < 0.5
    email = (
        "{}{}@{}.com".format(first[0], last, firm.split()[0]).lower()
        if rng.random() < 0.7
        else None
    )
    designation = DESIGNATIONS[rng.integers(len(DESIGNATIONS))]

    lines = [name.upper()]
    if bar:
        lines.append("Bar No. {}".format(bar))
    if title:
        lines.append(title)
    lines += [firm, street, "{}, {} {}".format(city, state, zip_code), "Tel: " + phone]
    if has_fax:
        lines.append("Fax: " + fax)
    if email:
        lines.append(email)
    lines.append(designation)

    elements = [
        name,
        title,
        bar,
        firm,
        street,
        city,
        "{} {}".format(state, zip_code),
        phone,
        fax if has_fax else None,
        email,
        designation,
    ]
    return Profile(lines, [e for e in elements if e])


def _layout_line(text, x, y):
    """Words of ``text`` in pixel boxes starting at (x, y)."""
    boxes, cursor = [], x
    for token in text.split():
        boxes.append((token, (cursor, y, CHAR_W * len(token), LINE_H)))
        cursor += CHAR_W * (len(token) + 1)
    return boxes


def generate(cfg):
    """
    One synthetic page. Returns the Document, its gold entities (each
    profile's words in visual order) and the inexact label (sub-elements
    reordered, title-cased, comma-separated).
    """
    rng = np.random.default_rng(cfg.seed)
    n = cfg.profiles_per_page

    firsts = rng.choice(len(FIRST_NAMES), size=n, replace=False)
    lasts = rng.choice(len(LAST_NAMES), size=n, replace=False)
    profiles = [
        make_profile(rng, FIRST_NAMES[f], LAST_NAMES[l]) for f, l in zip(firsts, lasts)
    ]
    captions = sorted(rng.choice(len(CAPTION_LINES), size=4, replace=False))

    # placed lines: (y, column, x, text, profile or None)
    placed = [
        (CAPTION_Y + k * LINE_PITCH, -1, COLUMN_X[1][0], CAPTION_LINES[c], None)
        for k, c in enumerate(captions)
    ]
    tops = [PROFILE_Y] * cfg.columns
    for p, profile in enumerate(profiles):
        column = p % cfg.columns
        for k, text in enumerate(profile.lines):
            if len(text) > COLUMN_CHARS[cfg.columns]:
                raise ValueError("line {!r} does not fit a column".format(text))
            placed.append(
                (tops[column] + k * LINE_PITCH, column, COLUMN_X[cfg.columns][column], text, p)
            )
        tops[column] += len(profile.lines) * LINE_PITCH + PROFILE_GAP

    if max(tops) > PAGE_H:
        raise ValueError("profiles overflow the page")

    if cfg.scramble:
        # strip by strip across the gutter, the lower line of a strip first,
        # the way OCR reads a skewed two-column scan
        placed.sort(key=lambda item: (item[0] // ROW_BAND, item[2], -item[0]))
    else:
        placed.sort(key=lambda item: (item[1], item[0]))

    words, lines, profile_lines = [], [], [[] for _ in profiles]
    for k, (y, _, x, text, p) in enumerate(placed):
        start = len(words)
        for token, (wx, wy, ww, wh) in _layout_line(text, x, y):
            words.append(Word(token, BBox.from_pixels(wx, wy, ww, wh, PAGE_W, PAGE_H), len(words)))
        line_box = tight_bbox([w.bbox for w in words[start:]])
        line = Line("p0-l{:03d}".format(k), line_box, start, len(words) - 1, 0)
        lines.append(line)
        if p is not None:
            profile_lines[p].append((y, line))

    doc_id = doc_id_for(cfg.seed)
    document = Document(doc_id, (Page(PAGE_W, PAGE_H, tuple(lines)),), tuple(words))
    document = corrupt(document, cfg.noise_rate, cfg.seed)

    gold = []
    for members in profile_lines:
        tokens = []
        for _, line in sorted(members, key=lambda item: item[0]):
            tokens.extend(line.word_indices)
        gold.append(NamedEntity(cfg.category, tuple(tokens)))

    label = InexactLabel(
        doc_id,
        tuple(
            LabelEntity(cfg.category, ", ".join(e.title() for e in profile.elements))
            for profile in profiles
        ),
    )
    return SynthDocument(document, gold, label)


def _substitute(ch, rng):
    letters = string.ascii_uppercase if ch.isupper() else string.ascii_lowercase
    others = [c for c in letters if c != ch]
    return others[rng.integers(len(others))]


def corrupt(doc, noise_rate, seed):
    """
    Swap each alphabetic character for a different letter of the same case
    with probability ``noise_rate``. Geometry and word count are unchanged.
    """
    if not 0 <= noise_rate <= 1:
        raise ValueError("noise_rate must lie in [0, 1]")
    if noise_rate == 0:
        return doc

    rng = np.random.default_rng(seed)
    words = []
    for word in doc.words:
        draws = rng.random(len(word.text))
        text = "".join(
            _substitute(ch, rng) if ch.isalpha() and draw < noise_rate else ch
            for ch, draw in zip(word.text, draws)
        )
        words.append(Word(text, word.bbox, word.index))
    return Document(doc.doc_id, doc.pages, tuple(words))


def write_corpus(out_dir, count, cfg, align_cfg=None):
    """
    Generate ``count`` documents with seeds cfg.seed .. cfg.seed+count-1 and
    write them under ``out_dir``: ocr/<doc>.json, attn/<doc>.attn,
    labels.json, gold.json, gold_coco.json and manifest.csv.
    """
    # import this lazily to avoid circular dependencies
    from pseudolay.postproc import gold_boxes

    align_cfg = align_cfg or AlignConfig()
    os.makedirs(os.path.join(out_dir, "ocr"), exist_ok=True)
    os.makedirs(os.path.join(out_dir, "attn"), exist_ok=True)

    labels, golds, label_sets, rows = [], [], [], []
    for seed in range(cfg.seed, cfg.seed + count):
        doc_cfg = SynthConfig(
            seed, cfg.columns, cfg.profiles_per_page, cfg.noise_rate, cfg.scramble, cfg.category
        )
        document, gold, label = generate(doc_cfg)

        ocr_path = os.path.join("ocr", document.doc_id + ".json")
        attn_path = os.path.join("attn", document.doc_id + ".attn")
        document.to_ocr_json(os.path.join(out_dir, ocr_path))
        align_document(document, label, align_cfg).to_attn(os.path.join(out_dir, attn_path))

        labels.append(label)
        golds.append(DocumentEntities.from_named(document, gold))
        label_sets.extend(gold_boxes(document, gold, cfg.category))
        rows.append(
            {
                "doc_id": document.doc_id,
                "seed": seed,
                "n_words": len(document.words),
                "n_lines": len(document.lines),
                "n_entities": len(gold),
                "ocr_path": ocr_path,
                "attn_path": attn_path,
            }
        )

    LabelWriter(labels, os.path.join(out_dir, "labels.json")).write()
    EntityWriter(golds, os.path.join(out_dir, "gold.json")).write()
    COCOWriter(
        CocoDataset.from_label_sets(label_sets, [cfg.category]),
        os.path.join(out_dir, "gold_coco.json"),
    ).write()

    manifest = pd.DataFrame(rows)
    atomic_write(
        os.path.join(out_dir, "manifest.csv"),
        manifest.to_csv(index=False, lineterminator="\n").encode("utf-8"),
    )
    logger.info("wrote %d synthetic document(s) to %s", count, out_dir)
    return manifest
