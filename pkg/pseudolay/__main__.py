# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from pseudolay.cli import main

main()
