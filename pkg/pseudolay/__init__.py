# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from .document import Document, InexactLabel, NamedEntity  # noqa: F401
from .util.config import (  # noqa: F401
    get_option,
    load_config,
    option_context,
    reset_option,
    set_option,
)

__version__ = "0.1.0"
