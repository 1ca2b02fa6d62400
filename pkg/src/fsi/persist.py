"""Versioned binary container for a built index.

Layout (all integers little-endian):

    magic   4 bytes  "FSI1"
    u8      format version (1)
    u8      subset mode (0 explicit, 1 compact)
    u8      flags (bit 0: root-only structure)
    u32     leaf_threshold
    u64     m
    per set:
        u64 len, then len x u64 elements, ascending
        (compact only) len x u64 element ranks, aligned with the elements
    node records in preorder, each:
        u8  flags (bit0 has_left, bit1 has_right, bit2 has_remark,
                   bit3 has_matrix, bit4 has_subsets)
        u64 cost
        u64 remarked element        (only when bit2)
        u32 k; k x u64 large set ids
        k rows of ceil(k/8) bytes   (only when bit3; row bit b = pair (row,b))
        u64 rank_lo, u64 rank_hi    (compact only)
        u32 subset count, then per subset u64 set_id, u64 len, len x u64
                                    (only when bit4, explicit only)

Serialization is deterministic, so save -> load -> save is byte-identical.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import ParseError
from .fsi_index import COMPACT, EXPLICIT, BuildConfig, FsiIndex, FsiNode, _ELEM_DTYPE
from .set_store import SetCollection

MAGIC = b"FSI1"
VERSION = 1


def _u64s(values):
    return np.asarray(values, dtype="<u8").tobytes()


def save_index(idx, fp):
    """Write an FsiIndex (and its collection) to a binary file object."""
    compact = idx.config.subset_mode == COMPACT
    root_only = idx.root.is_leaf and idx.root.matrix is not None
    fp.write(MAGIC)
    fp.write(struct.pack("<BBBIQ", VERSION, 1 if compact else 0,
                         1 if root_only else 0, idx.config.leaf_threshold,
                         idx.collection.m))
    for sid, s in enumerate(idx.collection.sets):
        fp.write(struct.pack("<Q", len(s)))
        fp.write(_u64s(s))
        if compact:
            elems = idx.set_elems[sid]
            ranks = idx.set_ranks[sid]
            by_value = np.argsort(elems, kind="stable")
            fp.write(ranks[by_value].astype("<u8").tobytes())
    _write_node(fp, idx.root, compact)


def _write_node(fp, node, compact):
    flags = 0
    if node.left is not None:
        flags |= 1
    if node.right is not None:
        flags |= 2
    if node.remarked is not None:
        flags |= 4
    if node.matrix is not None:
        flags |= 8
    if not compact and node.subsets is not None:
        flags |= 16
    fp.write(struct.pack("<BQ", flags, node.cost))
    if node.remarked is not None:
        fp.write(struct.pack("<Q", node.remarked))
    k = len(node.large_ids)
    fp.write(struct.pack("<I", k))
    fp.write(_u64s(node.large_ids))
    if node.matrix is not None:
        width = (k + 7) // 8
        for row in node.matrix:
            fp.write(row.to_bytes(width, "little"))
    if compact:
        fp.write(struct.pack("<QQ", node.rank_lo, node.rank_hi))
    elif node.subsets is not None:
        items = sorted(node.subsets.items())
        fp.write(struct.pack("<I", len(items)))
        for sid, sub in items:
            fp.write(struct.pack("<QQ", sid, len(sub)))
            fp.write(_u64s(sub))
    if node.left is not None:
        _write_node(fp, node.left, compact)
    if node.right is not None:
        _write_node(fp, node.right, compact)


class _Reader:
    def __init__(self, fp):
        self.buf = fp.read()
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.buf):
            raise ParseError("truncated index file")
        chunk = self.buf[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def u64_array(self, count):
        return np.frombuffer(self.take(count * 8), dtype="<u8").astype(np.int64)


def load_index(fp):
    """Read an index written by save_index; rebuilds the hash tables."""
    r = _Reader(fp)
    if r.take(4) != MAGIC:
        raise ParseError("not an FSI1 index file")
    version, mode_code, root_only, leaf_threshold, m = r.unpack("<BBBIQ")
    if version != VERSION:
        raise ParseError("unsupported index version %d" % version)
    compact = mode_code == 1
    sets = []
    rank_by_value = []
    for _ in range(m):
        (length,) = r.unpack("<Q")
        sets.append(r.u64_array(length).tolist())
        if compact:
            rank_by_value.append(r.u64_array(length))
    col = SetCollection(sets)
    cfg = BuildConfig(leaf_threshold=leaf_threshold,
                      subset_mode=COMPACT if compact else EXPLICIT)
    idx = FsiIndex(col, cfg)
    idx.root = _read_node(r, compact)
    if compact:
        idx.set_ranks = []
        idx.set_elems = []
        for sid, s in enumerate(sets):
            rk = rank_by_value[sid]
            order = np.argsort(rk)
            idx.set_ranks.append(rk[order])
            idx.set_elems.append(np.asarray(s, dtype=_ELEM_DTYPE)[order])
    return idx


def _read_node(r, compact):
    flags, cost = r.unpack("<BQ")
    node = FsiNode(int(cost))
    if flags & 4:
        (node.remarked,) = r.unpack("<Q")
        node.remarked = int(node.remarked)
    (k,) = r.unpack("<I")
    node.large_ids = [int(x) for x in r.u64_array(k)]
    node.large_pos = {sid: a for a, sid in enumerate(node.large_ids)}
    if flags & 8:
        width = (k + 7) // 8
        node.matrix = [int.from_bytes(r.take(width), "little") for _ in range(k)]
    if compact:
        lo, hi = r.unpack("<QQ")
        node.rank_lo, node.rank_hi = int(lo), int(hi)
    else:
        node.subsets = {}
        if flags & 16:
            (count,) = r.unpack("<I")
            for _ in range(count):
                sid, length = r.unpack("<QQ")
                node.subsets[int(sid)] = r.u64_array(length)
    if flags & 1:
        node.left = _read_node(r, compact)
    if flags & 2:
        node.right = _read_node(r, compact)
    return node
