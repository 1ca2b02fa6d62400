"""Two-pattern document listing and paired-substring indexing.

Documents are concatenated with a sentinel byte (0) after each one, a suffix
array is built over the concatenation, and each non-sentinel suffix rank is
colored by its owning document. A pattern maps to a rank interval via binary
search; a two-pattern query becomes a common-colors query on the two
intervals (or a scan of the inner interval when one contains the other).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ccq import CcqIndex
from .errors import InternalConsistencyError, ValidationError

SENTINEL = 0


def build_suffix_array(data):
    """Suffix array of a bytes object by prefix doubling (O(n log^2 n))."""
    n = len(data)
    if n == 0:
        return np.empty(0, dtype=np.int64)
    rank = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r_o = rank[order]
        s_o = second[order]
        changed = np.r_[False, (r_o[1:] != r_o[:-1]) | (s_o[1:] != s_o[:-1])]
        new = np.cumsum(changed)
        if new[-1] == n - 1 or k >= n:
            return order
        rank = np.empty(n, dtype=np.int64)
        rank[order] = new
        k *= 2


@dataclass(frozen=True)
class SaInterval:
    """1-indexed inclusive rank interval; empty when hi < lo."""

    lo: int
    hi: int

    @property
    def empty(self):
        return self.hi < self.lo

    @property
    def width(self):
        return 0 if self.empty else self.hi - self.lo + 1

    def contains(self, other):
        return not other.empty and self.lo <= other.lo and other.hi <= self.hi

    def disjoint(self, other):
        return self.empty or other.empty or self.hi < other.lo or other.hi < self.lo


def _as_bytes(text, what="text"):
    if isinstance(text, str):
        data = text.encode("utf-8")
    else:
        data = bytes(text)
    if SENTINEL in data:
        raise ValidationError("%s contains the sentinel byte 0" % what)
    return data


def _suffix_bounds(text, sa, pattern):
    """Half-open [lo, hi) rank range of suffixes having `pattern` as prefix."""
    plen = len(pattern)
    lo, hi = 0, len(sa)
    while lo < hi:
        mid = (lo + hi) // 2
        pos = sa[mid]
        if text[pos : pos + plen] < pattern:
            lo = mid + 1
        else:
            hi = mid
    first = lo
    hi = len(sa)
    while lo < hi:
        mid = (lo + hi) // 2
        pos = sa[mid]
        if text[pos : pos + plen] <= pattern:
            lo = mid + 1
        else:
            hi = mid
    return first, lo


class DocIndex:
    """Generalized suffix array over a corpus plus a common-colors index."""

    def __init__(self, corpus):
        docs = list(corpus)
        if not docs or all(len(t) == 0 for _, t in docs):
            raise ValidationError("corpus must contain at least one nonempty document")
        self.doc_ids = [doc_id for doc_id, _ in docs]
        texts = [_as_bytes(t, "document %r" % (doc_id,)) for doc_id, t in docs]
        self.text = b"".join(t + bytes([SENTINEL]) for t in texts)
        offsets = np.cumsum([0] + [len(t) + 1 for t in texts])
        full_sa = build_suffix_array(self.text)
        text_arr = np.frombuffer(self.text, dtype=np.uint8)
        keep = text_arr[full_sa] != SENTINEL
        self.sa = full_sa[keep]
        # color = 1-based corpus position of the owning document
        self.colors = (np.searchsorted(offsets, self.sa, side="right")).astype(np.int64)
        self.ccq = CcqIndex(self.colors.tolist())

    def pattern_interval(self, pattern):
        """Maximal suffix-rank interval whose suffixes start with the pattern."""
        if not pattern:
            raise ValidationError("pattern must be nonempty")
        p = _as_bytes(pattern, "pattern")
        lo, hi = _suffix_bounds(self.text, self.sa, p)
        return SaInterval(lo + 1, hi)

    def list_docs_one(self, pattern):
        """Ids of documents containing the pattern, ascending."""
        iv = self.pattern_interval(pattern)
        return self._distinct_ids(iv)

    def list_docs_two(self, p, q):
        """Ids of documents containing both patterns, ascending."""
        i1 = self.pattern_interval(p)
        i2 = self.pattern_interval(q)
        if i1.empty or i2.empty:
            return []
        if i1.contains(i2):
            return self._distinct_ids(i2)
        if i2.contains(i1):
            return self._distinct_ids(i1)
        if not i1.disjoint(i2):
            raise InternalConsistencyError(
                "pattern intervals overlap partially: %r %r" % (i1, i2)
            )
        colors = self.ccq.common_colors((i1.lo, i1.hi), (i2.lo, i2.hi))
        return sorted(self.doc_ids[c - 1] for c in colors)

    def _distinct_ids(self, iv):
        if iv.empty:
            return []
        distinct = set(self.colors[iv.lo - 1 : iv.hi].tolist())
        return sorted(self.doc_ids[c - 1] for c in distinct)


class PairIndex:
    """Substring search over a database of string pairs.

    One combined colors array holds the suffix ranks of all first components
    (colored by pair id) followed by those of all second components, with one
    CcqIndex over the whole thing; the two query intervals land in different
    regions and are therefore always disjoint.
    """

    def __init__(self, pairs):
        pairs = list(pairs)
        if not pairs:
            raise ValidationError("pair database must be nonempty")
        firsts = [_as_bytes(a, "pair %d first component" % i) for i, (a, _) in enumerate(pairs)]
        seconds = [_as_bytes(b, "pair %d second component" % i) for i, (_, b) in enumerate(pairs)]
        region1 = b"".join(t + bytes([SENTINEL]) for t in firsts)
        region2 = b"".join(t + bytes([SENTINEL]) for t in seconds)
        self.text = region1 + region2
        self.boundary = len(region1)
        offsets1 = np.cumsum([0] + [len(t) + 1 for t in firsts])
        offsets2 = np.cumsum([0] + [len(t) + 1 for t in seconds])
        full_sa = build_suffix_array(self.text)
        text_arr = np.frombuffer(self.text, dtype=np.uint8)
        keep = text_arr[full_sa] != SENTINEL
        sa = full_sa[keep]
        in_first = sa < self.boundary
        self.sa1 = sa[in_first]
        self.sa2 = sa[~in_first]
        colors1 = np.searchsorted(offsets1, self.sa1, side="right")
        colors2 = np.searchsorted(offsets2, self.sa2 - self.boundary, side="right")
        self.colors = np.concatenate([colors1, colors2]).astype(np.int64)
        self.ccq = CcqIndex(self.colors.tolist())

    def pair_query(self, sigma1, sigma2):
        """1-based ids of pairs whose first component contains sigma1 and whose
        second contains sigma2, ascending."""
        if not sigma1 or not sigma2:
            raise ValidationError("query strings must be nonempty")
        p1 = _as_bytes(sigma1, "first query string")
        p2 = _as_bytes(sigma2, "second query string")
        lo1, hi1 = _suffix_bounds(self.text, self.sa1, p1)
        lo2, hi2 = _suffix_bounds(self.text, self.sa2, p2)
        if lo1 == hi1 or lo2 == hi2:
            return []
        off = len(self.sa1)
        return self.ccq.common_colors((lo1 + 1, hi1), (off + lo2 + 1, off + hi2))


def build_doc_index(corpus):
    """Preprocess a corpus of (doc_id, text) pairs for pattern queries."""
    return DocIndex(corpus)


def build_pair_index(pairs):
    """Preprocess a database of (first, second) string pairs."""
    return PairIndex(pairs)
