# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

import os

import pytest

import pseudolay as pl
from pseudolay.synth import SynthConfig, write_corpus


@pytest.fixture
def data_dir():
    """Return path to the top-level data directory for tests."""
    parent = os.path.dirname(__file__)
    return os.path.join(parent, "data")


@pytest.fixture(autouse=True)
def default_options():
    """Every test starts and ends with the default configuration."""
    pl.reset_option("all")
    yield
    pl.reset_option("all")


@pytest.fixture
def two_column_doc(data_dir):
    return pl.Document.from_file(os.path.join(data_dir, "two-column", "doc.json"))


@pytest.fixture
def synth_corpus(tmpdir):
    """A three-document synthetic corpus, two columns, scrambled, noiseless."""
    out = str(tmpdir.join("corpus"))
    write_corpus(out, 3, SynthConfig(seed=0))
    return out
