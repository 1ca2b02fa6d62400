"""Pairwise set intersection index and its interval/document applications."""

from .ccq import CcqIndex, build_ccq
from .doc_index import (
    DocIndex,
    PairIndex,
    SaInterval,
    build_doc_index,
    build_pair_index,
    build_suffix_array,
)
from .fsi_index import BuildConfig, FsiIndex, WorkCounters, build, split_node
from .gen import GenSpec, generate
from .persist import load_index, save_index
from .set_store import SetCollection, load_sets

__all__ = [
    "BuildConfig",
    "CcqIndex",
    "DocIndex",
    "FsiIndex",
    "GenSpec",
    "PairIndex",
    "SaInterval",
    "SetCollection",
    "WorkCounters",
    "build",
    "build_ccq",
    "build_doc_index",
    "build_pair_index",
    "build_suffix_array",
    "generate",
    "load_index",
    "load_sets",
    "save_index",
    "split_node",
]
