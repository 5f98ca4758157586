# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import xml.etree.ElementTree as ET

SVG_NS = "http://www.w3.org/2000/svg"
WORD_FILL = "#e6e6e6"
WORD_STROKE = "#bdbdbd"
STROKE_WIDTH = 2
LEGEND_ROW = 16


def _fmt(value):
    return "{:.3f}".format(value).rstrip("0").rstrip(".")


def _rect(parent, bbox, width_px, height_px, **attrs):
    x, y, w, h = bbox.to_pixels(width_px, height_px)
    return ET.SubElement(
        parent,
        "rect",
        x=_fmt(x),
        y=_fmt(y),
        width=_fmt(w),
        height=_fmt(h),
        **attrs,
    )


class SVGWriter:
    """
    Renders a Document's pages as SVG overlays: word boxes in light gray,
    then every named box set stroked in its color, and a legend naming the
    sets. ``box_sets`` maps a name to a list of (BBox, color) or
    (BBox, color, page) entries; entries without a page go on page 0.
    """

    def __init__(self, document, box_sets=None):
        self.document = document
        self.box_sets = box_sets or {}

    def render_page(self, page):
        doc = self.document
        width, height = doc.page_size(page)

        svg = ET.Element(
            "svg",
            xmlns=SVG_NS,
            width=str(width),
            height=str(height),
            viewBox="0 0 {} {}".format(width, height),
        )
        ET.SubElement(svg, "rect", x="0", y="0", width=str(width), height=str(height), fill="white")

        words = ET.SubElement(svg, "g", id="words")
        for line in doc.page_lines(page):
            for word in doc.words_of(line):
                _rect(
                    words,
                    word.bbox,
                    width,
                    height,
                    fill=WORD_FILL,
                    stroke=WORD_STROKE,
                )

        legend = ET.SubElement(svg, "g", id="legend")
        for k, name in enumerate(sorted(self.box_sets)):
            entries = self.box_sets[name]
            group = ET.SubElement(svg, "g", id="set-{}".format(name))
            color = entries[0][1] if entries else "black"
            for entry in entries:
                entry_page = entry[2] if len(entry) > 2 else 0
                if entry_page != page:
                    continue
                _rect(
                    group,
                    entry[0],
                    width,
                    height,
                    fill="none",
                    stroke=entry[1],
                    **{"stroke-width": str(STROKE_WIDTH)}
                )

            y = LEGEND_ROW * (k + 1)
            ET.SubElement(
                legend,
                "rect",
                x="8",
                y=str(y - 10),
                width="12",
                height="12",
                fill=color,
            )
            label = ET.SubElement(
                legend, "text", x="26", y=str(y), fill=color, **{"font-size": "12"}
            )
            label.text = name

        return ET.tostring(svg, encoding="utf-8", xml_declaration=True) + b"\n"

    def write(self):
        """One SVG byte string per page."""
        return [self.render_page(page) for page in range(len(self.document.pages))]


def render_overlay(doc, box_sets):
    return SVGWriter(doc, box_sets).write()
