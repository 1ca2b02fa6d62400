"""The pairwise intersection index.

An unbalanced binary tree is built over the collection. Each node handles a
group of subsets of the original sets and costs the sum of their sizes. Sets
whose subset at a node exceeds the square root of the node cost are "large"
there: they are covered by a per-node bit matrix recording which large pairs
intersect, and only they are propagated to the children. The element universe
of the propagated group is split greedily (ascending element order) so each
child costs at most half the parent; the element that would overflow the left
half is remarked on the node and checked directly at query time.

Queries walk the tree: whenever the smaller of the two node subsets is not
large there (a stopper node), its elements are scanned against the other
original set's hash table and descent stops; when both are large, the bit
matrix either prunes the branch or the walk continues below after testing
the remarked element.

Two subset representations are supported. Explicit mode stores each node's
subsets as element arrays. Compact mode assigns every element one global
rank such that every node's universe is a contiguous rank range; each set
keeps a single rank-sorted array and a node subset is a slice located by two
binary searches, keeping total positional storage linear in the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, ValidationError

EXPLICIT = "explicit"
COMPACT = "compact"

_ELEM_DTYPE = np.int64


@dataclass(frozen=True)
class BuildConfig:
    """Construction knobs: leaf size cutoff and subset representation."""

    leaf_threshold: int = 4
    subset_mode: str = EXPLICIT

    def __post_init__(self):
        if self.leaf_threshold < 1:
            raise ValidationError("leaf_threshold must be >= 1")
        if self.subset_mode not in (EXPLICIT, COMPACT):
            raise ValidationError("subset_mode must be 'explicit' or 'compact'")


class WorkCounters:
    """Per-query instrumentation; machine-independent stand-in for wall time."""

    __slots__ = ("hash_probes", "matrix_lookups", "nodes_visited", "stopper_elements_scanned")

    def __init__(self):
        self.hash_probes = 0
        self.matrix_lookups = 0
        self.nodes_visited = 0
        self.stopper_elements_scanned = 0

    def as_dict(self):
        return {name: getattr(self, name) for name in self.__slots__}

    def __repr__(self):
        inner = ", ".join("%s=%d" % kv for kv in self.as_dict().items())
        return "WorkCounters(%s)" % inner


class FsiNode:
    """One tree node: its cost, large-set registry, bit matrix, remarked
    element, children, and subset data for its representation mode."""

    __slots__ = (
        "cost",
        "large_ids",
        "large_pos",
        "matrix",
        "remarked",
        "left",
        "right",
        "subsets",
        "rank_lo",
        "rank_hi",
    )

    def __init__(self, cost):
        self.cost = cost
        self.large_ids = []
        self.large_pos = {}
        self.matrix = None
        self.remarked = None
        self.left = None
        self.right = None
        self.subsets = None
        self.rank_lo = 0
        self.rank_hi = 0

    @property
    def is_leaf(self):
        return self.left is None and self.right is None


def _greedy_cut(cum_costs, budget):
    """Index of the first element whose inclusion would push the cumulative
    cost over the budget; len(cum_costs) when everything fits."""
    return int(np.searchsorted(cum_costs, budget, side="right"))


def split_node(group, budget):
    """Greedy element split of a propagated group.

    `group` is a list of (set_id, ascending duplicate-free subset). Elements
    of the union are scanned in ascending order; each costs its multiplicity
    across the group. Returns (E1, e, E2): the elements kept left, the
    overflow element (None if everything fits), and the remaining elements.
    """
    if not group:
        raise ValidationError("split_node requires a nonempty group")
    arrays = [np.asarray(sub, dtype=_ELEM_DTYPE) for _, sub in group]
    conc = np.concatenate(arrays) if arrays else np.empty(0, _ELEM_DTYPE)
    vals, counts = np.unique(conc, return_counts=True)
    cut = _greedy_cut(np.cumsum(counts), budget)
    if cut == len(vals):
        return list(vals.tolist()), None, []
    return list(vals[:cut].tolist()), int(vals[cut]), list(vals[cut + 1 :].tolist())


class FsiIndex:
    """Query interface over a built tree; immutable, safe for concurrent reads."""

    def __init__(self, collection, config):
        self.collection = collection
        self.config = config
        self.root = None
        self.set_ranks = None  # compact mode: per set, ascending rank array
        self.set_elems = None  # compact mode: per set, elements aligned with set_ranks
        self._root_sizes = None  # lazily built exact-size matrix for root large pairs

    # -------------------------------------------------------------- queries

    def intersect(self, i, j):
        """Exact intersection of sets i and j, ascending, plus work counters."""
        col = self.collection
        col.member_table(i), col.member_table(j)  # validates ids
        counters = WorkCounters()
        out = []
        mem = (col._member[i], col._member[j])
        ids = (i, j)
        stack = [self.root]
        compact = self.config.subset_mode == COMPACT
        if compact:
            ranks = (self.set_ranks[i], self.set_ranks[j])
            elems = (self.set_elems[i], self.set_elems[j])
        while stack:
            node = stack.pop()
            counters.nodes_visited += 1
            if compact:
                lo, hi = node.rank_lo, node.rank_hi
                cuts = [
                    (int(np.searchsorted(r, lo)), int(np.searchsorted(r, hi)))
                    for r in ranks
                ]
                sizes = [b - a for a, b in cuts]
            else:
                subs = [node.subsets.get(i), node.subsets.get(j)]
                sizes = [0 if s is None else len(s) for s in subs]
            small = 0 if sizes[0] <= sizes[1] else 1
            if sizes[small] == 0:
                continue  # zero-work stopper
            if node.is_leaf or ids[small] not in node.large_pos:
                other = mem[1 - small]
                if compact:
                    a, b = cuts[small]
                    scan = elems[small][a:b]
                else:
                    scan = subs[small]
                counters.stopper_elements_scanned += len(scan)
                counters.hash_probes += len(scan)
                for x in scan:
                    if x in other:
                        out.append(int(x))
                continue
            a = node.large_pos[ids[small]]
            b = node.large_pos[ids[1 - small]]
            counters.matrix_lookups += 1
            if not (node.matrix[a] >> b) & 1:
                continue
            if node.remarked is not None:
                e = node.remarked
                counters.hash_probes += 1
                if e in mem[0]:
                    counters.hash_probes += 1
                    if e in mem[1]:
                        out.append(e)
            if node.right is not None:
                stack.append(node.right)
            if node.left is not None:
                stack.append(node.left)
        out.sort()
        return out, counters

    def intersection_empty(self, i, j):
        """True iff sets i and j are disjoint, answered from root data only."""
        hit = self._root_probe(i, j)
        if hit is not None:
            return not hit
        a, b = self.root.large_pos[i], self.root.large_pos[j]
        return not (self.root.matrix[a] >> b) & 1

    def intersection_size(self, i, j):
        """|set i ∩ set j|, answered from root data plus a root size matrix."""
        col = self.collection
        small, large = (i, j) if len(col.sets[i]) <= len(col.sets[j]) else (j, i)
        if self.root.matrix is None or small not in self.root.large_pos:
            col.member_table(i), col.member_table(j)
            other = col._member[large]
            return sum(1 for x in col.sets[small] if x in other)
        if self._root_sizes is None:
            self._root_sizes = self._build_root_sizes()
        a, b = self.root.large_pos[i], self.root.large_pos[j]
        return int(self._root_sizes[a, b])

    def _root_probe(self, i, j):
        """Root-level scan path shared by the empty query; returns True/False
        when a scan decided the answer, None when the root matrix applies."""
        col = self.collection
        col.member_table(i), col.member_table(j)
        small, large = (i, j) if len(col.sets[i]) <= len(col.sets[j]) else (j, i)
        if self.root.matrix is None or small not in self.root.large_pos:
            other = col._member[large]
            return any(x in other for x in col.sets[small])
        return None

    def _build_root_sizes(self):
        k = len(self.root.large_ids)
        sizes = np.zeros((k, k), dtype=np.int64)
        arrays = [
            np.asarray(self.collection.sets[sid], dtype=_ELEM_DTYPE)
            for sid in self.root.large_ids
        ]
        for a in range(k):
            sizes[a, a] = len(arrays[a])
        sv, so, starts, counts = _sorted_groups(arrays)
        for mi in np.flatnonzero(counts > 1):
            seg = so[starts[mi] : starts[mi] + counts[mi]]
            for a in seg:
                for b in seg:
                    if a != b:
                        sizes[a, b] += 1
        return sizes

    # ------------------------------------------------------------ structure

    def subset_of(self, node, set_id):
        """The node-local subset of one set, as a numpy array (may be empty).

        Only meaningful for sets handled at the node; used by queries via the
        traversal discipline and by the validation walk.
        """
        if self.config.subset_mode == COMPACT:
            r = self.set_ranks[set_id]
            a = int(np.searchsorted(r, node.rank_lo))
            b = int(np.searchsorted(r, node.rank_hi))
            return self.set_elems[set_id][a:b]
        sub = node.subsets.get(set_id)
        return np.empty(0, _ELEM_DTYPE) if sub is None else sub

    def walk(self):
        """Yield (node, handled_set_ids, depth) over the whole tree, preorder."""
        stack = [(self.root, list(range(self.collection.m)), 0)]
        while stack:
            node, handled, depth = stack.pop()
            yield node, handled, depth
            for child in (node.right, node.left):
                if child is not None:
                    stack.append((child, node.large_ids, depth + 1))

    def stats(self):
        """Space accounting: matrix bits, per-depth bits, node count, depth."""
        matrix_bits = 0
        per_depth = {}
        nodes = 0
        depth = 0
        for node, _, d in self.walk():
            nodes += 1
            depth = max(depth, d + 1)
            k = len(node.large_ids)
            bits = k * k if node.matrix is not None else 0
            matrix_bits += bits
            per_depth[d] = per_depth.get(d, 0) + bits
        rank_entries = (
            sum(len(r) for r in self.set_ranks) if self.set_ranks is not None else None
        )
        return {
            "matrix_bits": matrix_bits,
            "matrix_bits_per_depth": per_depth,
            "nodes": nodes,
            "depth": depth,
            "rank_entries": rank_entries,
        }

    def validate(self, matrix_check_limit=None):
        """Invariant walk; raises InternalConsistencyError on any violation.

        matrix_check_limit skips the per-node brute-force matrix check at
        nodes with more large sets than the limit (for big instances).
        """
        n_total = self.collection.total_size
        if self.root.cost != n_total:
            raise InternalConsistencyError("root cost != N")
        leaf = self.config.leaf_threshold
        if n_total > leaf:
            max_depth = math.ceil(math.log2(n_total / leaf)) + 1
        else:
            max_depth = 1
        for node, handled, depth in self.walk():
            subs = {sid: self.subset_of(node, sid) for sid in handled}
            n = sum(len(s) for s in subs.values())
            if n != node.cost:
                raise InternalConsistencyError("node cost mismatch: %d != %d" % (n, node.cost))
            large = sorted(sid for sid, s in subs.items() if len(s) * len(s) > n)
            if not node.is_leaf and large != sorted(node.large_ids):
                raise InternalConsistencyError("large-set registry mismatch")
            k = len(node.large_ids)
            if k * k > n:
                raise InternalConsistencyError("more than sqrt(n) large sets")
            for child in (node.left, node.right):
                if child is not None and 2 * child.cost > n + 1:
                    raise InternalConsistencyError("child cost above ceil(n/2)")
            if node.is_leaf:
                if node.remarked is not None:
                    raise InternalConsistencyError("leaf carries a remarked element")
                if node.matrix is not None:
                    # root-only structure: the matrix must still be sound
                    self._check_matrix(node, subs, matrix_check_limit)
                if depth + 1 > max_depth:
                    raise InternalConsistencyError("tree deeper than bound")
                continue
            if node.matrix is None:
                raise InternalConsistencyError("internal node without matrix")
            self._check_matrix(node, subs, matrix_check_limit)
            e = node.remarked
            for sid in node.large_ids:
                here = len(subs[sid])
                below = sum(
                    len(self.subset_of(child, sid))
                    for child in (node.left, node.right)
                    if child is not None
                )
                if e is not None and self.collection.membership(sid, e):
                    below += 1
                if below != here:
                    raise InternalConsistencyError(
                        "partition incomplete for set %d at a node" % sid
                    )

    def _check_matrix(self, node, subs, limit):
        k = len(node.large_ids)
        for a in range(k):
            for b in range(k):
                if ((node.matrix[a] >> b) & 1) != ((node.matrix[b] >> a) & 1):
                    raise InternalConsistencyError("matrix not symmetric")
            if not (node.matrix[a] >> a) & 1:
                raise InternalConsistencyError("matrix diagonal not set")
        if limit is not None and k > limit:
            return
        elem_sets = [set(subs[sid].tolist()) for sid in node.large_ids]
        for a in range(k):
            for b in range(a, k):
                truth = bool(elem_sets[a] & elem_sets[b])
                stored = bool((node.matrix[a] >> b) & 1)
                if truth != stored:
                    raise InternalConsistencyError(
                        "matrix bit (%d,%d) disagrees with subsets" % (a, b)
                    )


def _sorted_groups(arrays):
    """Concatenate subset arrays, sort by element, and return the sorted
    values, their local owner ids, group start offsets, and group sizes."""
    conc = np.concatenate(arrays)
    owners = np.repeat(
        np.arange(len(arrays), dtype=np.int64),
        np.fromiter((len(a) for a in arrays), dtype=np.int64, count=len(arrays)),
    )
    order = np.argsort(conc, kind="stable")
    sv = conc[order]
    so = owners[order]
    if len(sv):
        starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
    else:
        starts = np.empty(0, dtype=np.int64)
    counts = np.diff(np.append(starts, len(sv)))
    return sv, so, starts, counts


class _Builder:
    def __init__(self, col, cfg, root_only):
        self.col = col
        self.cfg = cfg
        self.root_only = root_only
        self.compact = cfg.subset_mode == COMPACT
        self.rank_of = {} if self.compact else None
        self.next_rank = 0

    def build(self):
        idx = FsiIndex(self.col, self.cfg)
        arrays = [np.asarray(s, dtype=_ELEM_DTYPE) for s in self.col.sets]
        ids = list(range(self.col.m))
        idx.root = self._node(ids, arrays, at_root=True)
        if self.compact:
            self._finish_ranks(idx)
        return idx

    def _node(self, ids, arrays, at_root=False):
        n = int(sum(len(a) for a in arrays))
        node = FsiNode(n)
        rank_start = self.next_rank
        large_local = [t for t in range(len(arrays)) if len(arrays[t]) ** 2 > n]
        if n <= self.cfg.leaf_threshold or not large_local:
            self._leaf(node, ids, arrays, rank_start)
            return node
        node.large_ids = [ids[t] for t in large_local]
        node.large_pos = {sid: a for a, sid in enumerate(node.large_ids)}
        garrs = [arrays[t] for t in large_local]
        sv, so, starts, counts = _sorted_groups(garrs)
        vals = sv[starts]
        node.matrix = self._bit_matrix(len(garrs), so, starts, counts)
        if self.root_only and at_root:
            # The standalone empty/size structure keeps only the root;
            # store subsets so the root still answers scans.
            self._leaf_payload(node, ids, arrays, rank_start)
            return node
        p = int(sum(len(a) for a in garrs))
        budget = n / 2
        if p <= budget:
            left_ids, left_arrs = node.large_ids, garrs
            right_arrs = None
        else:
            cut = _greedy_cut(np.cumsum(counts), budget)
            e = int(vals[cut])
            node.remarked = e
            left_arrs = [a[: np.searchsorted(a, e)] for a in garrs]
            right_arrs = [a[np.searchsorted(a, e, side="right") :] for a in garrs]
            left_ids = node.large_ids
        keep = [(sid, a) for sid, a in zip(left_ids, left_arrs) if len(a)]
        if keep:
            node.left = self._node([sid for sid, _ in keep], [a for _, a in keep])
        if self.compact:
            if node.remarked is not None:
                self.rank_of[node.remarked] = self.next_rank
                self.next_rank += 1
            universe = np.unique(np.concatenate(arrays))
            for x in np.setdiff1d(universe, vals, assume_unique=True).tolist():
                self.rank_of[x] = self.next_rank
                self.next_rank += 1
        if right_arrs is not None:
            keep = [(sid, a) for sid, a in zip(node.large_ids, right_arrs) if len(a)]
            if keep:
                node.right = self._node([sid for sid, _ in keep], [a for _, a in keep])
        if not self.compact:
            node.subsets = {sid: a for sid, a in zip(ids, arrays) if len(a)}
        node.rank_lo, node.rank_hi = rank_start, self.next_rank
        return node

    def _leaf(self, node, ids, arrays, rank_start):
        self._leaf_payload(node, ids, arrays, rank_start)

    def _leaf_payload(self, node, ids, arrays, rank_start):
        if self.compact:
            if arrays:
                conc = np.concatenate(arrays)
                for x in np.unique(conc).tolist():
                    self.rank_of[x] = self.next_rank
                    self.next_rank += 1
        else:
            node.subsets = {sid: a for sid, a in zip(ids, arrays) if len(a)}
        node.rank_lo, node.rank_hi = rank_start, self.next_rank

    def _bit_matrix(self, k, so, starts, counts):
        rows = [1 << t for t in range(k)]
        for mi in np.flatnonzero(counts > 1):
            seg = so[starts[mi] : starts[mi] + counts[mi]].tolist()
            mask = 0
            for t in seg:
                mask |= 1 << t
            for t in seg:
                rows[t] |= mask
        return rows

    def _finish_ranks(self, idx):
        idx.set_ranks = []
        idx.set_elems = []
        rank_of = self.rank_of
        for s in self.col.sets:
            rk = np.fromiter((rank_of[x] for x in s), dtype=np.int64, count=len(s))
            order = np.argsort(rk)
            idx.set_ranks.append(rk[order])
            idx.set_elems.append(np.asarray(s, dtype=_ELEM_DTYPE)[order])


def build(col, cfg=None, root_only=False):
    """Construct an FsiIndex over a SetCollection.

    root_only builds just the root node with its matrix: enough for the
    empty/size queries, skipping the tree below.
    """
    return _Builder(col, cfg or BuildConfig(), root_only).build()
