# Copyright 2024 Pseudolay Developers. See the top-level LICENSE file for
# details.
#
# SPDX-License-Identifier: MIT

from functools import lru_cache


def levenshtein(seq1, seq2, max_dist=-1):
    """Minimum number of insertions, deletions and substitutions turning
    ``seq1`` into ``seq2``. Works on strings (characters) and on sequences
    of tokens alike.

    With ``max_dist >= 0`` the computation stops as soon as the distance is
    known to exceed it and returns -1.
    """
    if seq1 == seq2:
        return 0

    len1, len2 = len(seq1), len(seq2)
    if max_dist >= 0 and abs(len1 - len2) > max_dist:
        return -1
    if len1 == 0:
        return len2
    if len2 == 0:
        return len1

    if len1 < len2:
        seq1, seq2, len1, len2 = seq2, seq1, len2, len1

    previous = list(range(len2 + 1))
    for r in range(1, len1 + 1):
        current = [r] + [0] * len2
        item = seq1[r - 1]
        for c in range(1, len2 + 1):
            current[c] = min(
                previous[c] + 1,
                current[c - 1] + 1,
                previous[c - 1] + (item != seq2[c - 1]),
            )
        if max_dist >= 0 and min(current) > max_dist:
            return -1
        previous = current

    distance = previous[len2]
    if max_dist >= 0 and distance > max_dist:
        return -1
    return distance


@lru_cache(maxsize=65536)
def similarity(a, b, threshold=0.0):
    """1 - levenshtein(a, b) / max(len(a), len(b)), or 0.0 when the score is
    known to fall below ``threshold``."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0

    # the largest distance that can still reach the threshold
    budget = int((1.0 - threshold) * longest + 1e-9)
    distance = levenshtein(a, b, max_dist=budget)
    if distance < 0:
        return 0.0
    return 1.0 - distance / longest
