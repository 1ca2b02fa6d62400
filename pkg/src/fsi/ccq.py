"""Common-colors queries over an array via dyadic canonical sets.

The array is conceptually padded to the next power of two. Level l splits it
into 2^l aligned ranges; each canonical node owns the set of distinct colors
in its range (pad positions contribute nothing). Any interval is tiled by at
most 2*log2(N) canonical ranges, so a two-interval query reduces to pairwise
set intersections between the two covers, answered by an embedded FsiIndex.
"""

from __future__ import annotations

from .errors import IntervalError, OverlapError, ValidationError
from .fsi_index import BuildConfig, build
from .set_store import SetCollection


def _node_id(level, k):
    return (1 << level) - 1 + k


class CcqIndex:
    """Canonical color sets of one array plus an intersection index over them."""

    def __init__(self, array, cfg=None):
        if not array:
            raise ValidationError("color array must be nonempty")
        if any(not isinstance(c, int) or c < 1 for c in array):
            raise ValidationError("colors must be integers >= 1")
        self.array = list(array)
        self.n = len(array)
        self.color_bound = max(array)
        self.levels = 0
        while (1 << self.levels) < self.n:
            self.levels += 1
        self.padded = 1 << self.levels
        sets = self._canonical_sets()
        self.canonical_sets = sets
        self.fsi = build(SetCollection(sets), cfg or BuildConfig())
        self._seen = [0] * (self.color_bound + 1)
        self._epoch = 0

    def _canonical_sets(self):
        # bottom-up union; ids are heap order: node (l, k) at (1<<l) - 1 + k
        per_level = [None] * (self.levels + 1)
        bottom = []
        for k in range(self.padded):
            bottom.append({self.array[k]} if k < self.n else set())
        per_level[self.levels] = bottom
        for level in range(self.levels - 1, -1, -1):
            below = per_level[level + 1]
            per_level[level] = [below[2 * k] | below[2 * k + 1]
                                for k in range(1 << level)]
        sets = []
        for level_sets in per_level:
            sets.extend(sorted(s) for s in level_sets)
        return sets

    def node_range(self, level, k):
        """1-indexed inclusive positions covered by canonical node (level, k),
        before clipping to the real array length."""
        width = self.padded >> level
        return (k * width + 1, (k + 1) * width)

    def decompose(self, interval):
        """Minimal canonical cover of a 1-indexed inclusive interval.

        Returns (level, k) pairs whose ranges are disjoint and tile the
        interval exactly; never more than 2*ceil(log2 N) of them.
        """
        l, r = interval
        if not (1 <= l <= r <= self.n):
            raise IntervalError("interval [%d,%d] out of bounds [1,%d]" % (l, r, self.n))
        out = []

        def rec(level, k, lo, hi):
            if l <= lo and hi <= r:
                out.append((level, k))
                return
            mid = (lo + hi) // 2
            if l <= mid:
                rec(level + 1, 2 * k, lo, mid)
            if r > mid:
                rec(level + 1, 2 * k + 1, mid + 1, hi)

        rec(0, 0, 1, self.padded)
        return out

    def common_colors(self, i1, i2):
        """Ascending distinct colors occurring in both disjoint intervals."""
        for iv in (i1, i2):
            l, r = iv
            if not (1 <= l <= r <= self.n):
                raise IntervalError(
                    "interval [%d,%d] out of bounds [1,%d]" % (l, r, self.n)
                )
        if max(i1[0], i2[0]) <= min(i1[1], i2[1]):
            raise OverlapError(
                "intervals [%d,%d] and [%d,%d] overlap" % (*i1, *i2)
            )
        cover1 = [_node_id(*nk) for nk in self.decompose(i1)]
        cover2 = [_node_id(*nk) for nk in self.decompose(i2)]
        self._epoch += 1
        epoch = self._epoch
        seen = self._seen
        out = []
        intersect = self.fsi.intersect
        for a in cover1:
            for b in cover2:
                colors, _ = intersect(a, b)
                for c in colors:
                    if seen[c] != epoch:
                        seen[c] = epoch
                        out.append(c)
        out.sort()
        return out


def build_ccq(array, cfg=None):
    """Preprocess a color array for common-colors queries."""
    return CcqIndex(array, cfg=cfg)


def load_color_array(source):
    """Parse the color array file format: one base-10 color per line."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    colors = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        tok = line.strip()
        if not tok.isdigit():
            raise ValidationError("line %d: bad color %r" % (lineno, line))
        colors.append(int(tok))
    return colors
