# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import json
import os
import tempfile


def dump_json(obj):
    """Stable JSON bytes: sorted keys, two-space indent, trailing newline."""
    return (json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def atomic_write(filename, data):
    """Write bytes to ``filename`` through a temporary sibling and a rename,
    so readers never observe a half-written file."""
    directory = os.path.dirname(os.path.abspath(filename))
    os.makedirs(directory, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(
        prefix="." + os.path.basename(filename) + ".", dir=directory
    )
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp_name, filename)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise


def write_output(data, filename):
    """Write ``data`` when a filename is given, and return it either way."""
    if filename is not None:
        atomic_write(filename, data)
    return data
