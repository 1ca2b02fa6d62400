"""Independent brute-force baselines used as ground truth in tests and benchmarks.

Nothing here shares code with the tree index, so agreement between the two
is meaningful evidence of correctness.
"""

from __future__ import annotations

import bisect

from .errors import CapacityError, IntervalError, ValidationError

DEFAULT_MATRIX_BUDGET = 256 * 1024 * 1024


def naive_sorted_intersect(a, b):
    """Intersect two ascending duplicate-free lists by scanning the smaller
    with binary search into the larger."""
    for name, seq in (("first", a), ("second", b)):
        if any(seq[t] >= seq[t + 1] for t in range(len(seq) - 1)):
            raise ValidationError("%s input is not strictly ascending" % name)
    if len(a) > len(b):
        a, b = b, a
    out = []
    for x in a:
        k = bisect.bisect_left(b, x)
        if k < len(b) and b[k] == x:
            out.append(x)
    return out


def naive_hash_intersect(col, i, j):
    """Intersect sets i and j of a SetCollection by probing the larger set's
    hash table with every element of the smaller."""
    a = col.sets[i] if len(col.sets[i]) <= len(col.sets[j]) else col.sets[j]
    other = col.member_table(j if a is col.sets[i] else i)
    return sorted(x for x in a if x in other)


class PrecomputedMatrix:
    """All pairwise intersection sizes (optionally contents) of a collection."""

    def __init__(self, sizes, contents=None):
        self.sizes = sizes
        self.contents = contents

    def size(self, i, j):
        return self.sizes[i][j]

    def intersection(self, i, j):
        if self.contents is None:
            raise ValueError("matrix was built without materialized contents")
        return self.contents[i][j]


def precompute_matrix(col, include_contents=False, memory_budget=DEFAULT_MATRIX_BUDGET):
    """The quadratic-space baseline: every pairwise intersection, precomputed."""
    m = col.m
    need = m * m * 8
    if include_contents:
        need += sum(len(s) for s in col.sets) * m * 8
    if need > memory_budget:
        raise CapacityError(
            "pairwise matrix needs about %d bytes, budget is %d" % (need, memory_budget)
        )
    sizes = [[0] * m for _ in range(m)]
    contents = [[None] * m for _ in range(m)] if include_contents else None
    for i in range(m):
        for j in range(i, m):
            inter = naive_hash_intersect(col, i, j)
            sizes[i][j] = sizes[j][i] = len(inter)
            if contents is not None:
                contents[i][j] = contents[j][i] = inter
    return PrecomputedMatrix(sizes, contents)


def naive_common_colors(array, i1, i2):
    """Distinct colors occurring in both 1-indexed inclusive intervals, by scan."""
    n = len(array)
    for (lo, hi) in (i1, i2):
        if not (1 <= lo <= hi <= n):
            raise IntervalError("interval [%d,%d] out of bounds [1,%d]" % (lo, hi, n))
    first = set(array[i1[0] - 1 : i1[1]])
    second = set(array[i2[0] - 1 : i2[1]])
    return sorted(first & second)
