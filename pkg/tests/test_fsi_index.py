import io
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from fsi import oracles
from fsi.errors import ValidationError
from fsi.fsi_index import COMPACT, EXPLICIT, BuildConfig, build, split_node
from fsi.persist import load_index, save_index
from fsi.set_store import SetCollection

MODES = [EXPLICIT, COMPACT]

EXAMPLE = [[1, 2, 3, 4], [3, 4, 5], [6]]


def _example_index(mode):
    return build(SetCollection(EXAMPLE), BuildConfig(leaf_threshold=1, subset_mode=mode))


# ---------------------------------------------------------------- split_node

def test_split_overflow():
    assert split_node([(0, [1, 2, 3, 4]), (1, [3, 4, 5])], 4) == ([1, 2, 3], 4, [5])


def test_split_under_budget():
    assert split_node([(0, [9])], 5) == ([9], None, [])


def test_split_immediate_overflow():
    assert split_node([(0, [1]), (1, [1]), (2, [1])], 1) == ([], 1, [])


@given(
    st.lists(st.lists(st.integers(0, 50), unique=True, min_size=1, max_size=15),
             min_size=1, max_size=6)
)
def test_split_cost_guarantees(subsets):
    group = list(enumerate(subsets))
    total = sum(len(s) for s in subsets)
    budget = total / 2
    e1, e, e2 = split_node(group, budget)
    universe = sorted({x for s in subsets for x in s})
    recombined = sorted(e1 + ([e] if e is not None else []) + e2)
    assert recombined == universe
    mult = {x: sum(x in s for s in subsets) for x in universe}
    assert sum(mult[x] for x in e1) <= budget
    assert sum(mult[x] for x in e2) <= budget
    if e is None:
        assert e2 == []


# -------------------------------------------------------------------- build

@pytest.mark.parametrize("mode", MODES)
def test_build_example_structure(mode):
    idx = _example_index(mode)
    root = idx.root
    assert root.cost == 8
    assert root.large_ids == [0, 1]
    assert (root.matrix[0] >> 1) & 1 == 1
    assert root.remarked == 4
    assert root.left.cost == 4
    assert root.right.cost == 1
    assert sorted(idx.subset_of(root.left, 0).tolist()) == [1, 2, 3]
    assert sorted(idx.subset_of(root.left, 1).tolist()) == [3]
    assert sorted(idx.subset_of(root.right, 0).tolist()) == []
    assert sorted(idx.subset_of(root.right, 1).tolist()) == [5]
    idx.validate()


@pytest.mark.parametrize("mode", MODES)
def test_build_empty_collection(mode):
    idx = build(SetCollection([]), BuildConfig(subset_mode=mode))
    assert idx.root.cost == 0
    assert idx.root.is_leaf


@pytest.mark.parametrize("mode", MODES)
def test_build_single_tiny_set(mode):
    idx = build(SetCollection([[7]]), BuildConfig(leaf_threshold=1, subset_mode=mode))
    assert idx.root.is_leaf
    assert idx.root.matrix is None
    assert idx.intersect(0, 0)[0] == [7]


def test_build_config_validation():
    with pytest.raises(ValidationError):
        BuildConfig(leaf_threshold=0)
    with pytest.raises(ValidationError):
        BuildConfig(subset_mode="sparse")


# ------------------------------------------------------------------ queries

@pytest.mark.parametrize("mode", MODES)
def test_intersect_examples(mode):
    idx = _example_index(mode)
    assert idx.intersect(0, 1)[0] == [3, 4]
    assert idx.intersect(0, 2)[0] == []
    for i in range(3):
        assert idx.intersect(i, i)[0] == EXAMPLE[i]
    with pytest.raises(IndexError):
        idx.intersect(0, 3)


@pytest.mark.parametrize("mode", MODES)
def test_empty_and_size_examples(mode):
    idx = _example_index(mode)
    assert idx.intersection_empty(0, 2) is True
    assert idx.intersection_empty(0, 1) is False
    assert idx.intersection_size(0, 1) == 2
    assert idx.intersection_size(0, 2) == 0
    for i in range(3):
        assert idx.intersection_empty(i, i) is (len(EXAMPLE[i]) == 0)
        assert idx.intersection_size(i, i) == len(EXAMPLE[i])
    with pytest.raises(IndexError):
        idx.intersection_empty(5, 0)


def test_empty_set_short_circuits():
    idx = build(SetCollection([[], [1, 2]]), BuildConfig())
    assert idx.intersect(0, 1)[0] == []
    assert idx.intersection_empty(0, 0) is True
    assert idx.intersection_size(0, 1) == 0


def test_counters_populated():
    idx = _example_index(EXPLICIT)
    _, counters = idx.intersect(0, 1)
    assert counters.nodes_visited >= 1
    assert counters.matrix_lookups >= 1
    assert counters.hash_probes >= 1
    assert min(counters.as_dict().values()) >= 0


def test_root_only_build():
    col = SetCollection(EXAMPLE)
    idx = build(col, BuildConfig(leaf_threshold=1), root_only=True)
    assert idx.root.is_leaf and idx.root.matrix is not None
    assert idx.intersection_empty(0, 1) is False
    assert idx.intersection_empty(0, 2) is True
    assert idx.intersection_size(0, 1) == 2
    idx.validate()


# --------------------------------------------------- randomized equivalence

collections = st.lists(
    st.lists(st.integers(0, 80), unique=True, max_size=25),
    min_size=1,
    max_size=8,
)


@settings(max_examples=60, deadline=None)
@given(collections, st.sampled_from(MODES), st.sampled_from([1, 2, 4, 8]))
def test_matches_oracle_and_validates(raw, mode, leaf):
    col = SetCollection(raw)
    idx = build(col, BuildConfig(leaf_threshold=leaf, subset_mode=mode))
    idx.validate()
    for i, j in itertools.product(range(col.m), repeat=2):
        want = oracles.naive_hash_intersect(col, i, j)
        assert idx.intersect(i, j)[0] == want
        assert idx.intersect(j, i)[0] == want
        assert idx.intersection_empty(i, j) == (not want)
        assert idx.intersection_size(i, j) == len(want)


@settings(max_examples=30, deadline=None)
@given(collections)
def test_modes_agree(raw):
    col = SetCollection(raw)
    explicit = build(col, BuildConfig(subset_mode=EXPLICIT))
    compact = build(col, BuildConfig(subset_mode=COMPACT))
    for i, j in itertools.product(range(col.m), repeat=2):
        assert explicit.intersect(i, j)[0] == compact.intersect(i, j)[0]


@settings(max_examples=30, deadline=None)
@given(collections, st.sampled_from(MODES))
def test_space_accounting(raw, mode):
    col = SetCollection(raw)
    idx = build(col, BuildConfig(subset_mode=mode))
    stats = idx.stats()
    n = col.total_size
    for bits in stats["matrix_bits_per_depth"].values():
        assert bits <= max(n, 1)
    assert stats["matrix_bits"] <= max(n, 1) * stats["depth"]
    if mode == COMPACT:
        assert stats["rank_entries"] <= n


# -------------------------------------------------------------- persistence

@pytest.mark.parametrize("mode", MODES)
def test_persistence_roundtrip(mode):
    rng = random.Random(9)
    raw = [sorted(rng.sample(range(300), rng.randint(0, 40))) for _ in range(12)]
    col = SetCollection(raw)
    idx = build(col, BuildConfig(leaf_threshold=2, subset_mode=mode))
    buf = io.BytesIO()
    save_index(idx, buf)
    loaded = load_index(io.BytesIO(buf.getvalue()))
    buf2 = io.BytesIO()
    save_index(loaded, buf2)
    assert buf.getvalue() == buf2.getvalue()
    loaded.validate()
    for i, j in itertools.product(range(col.m), repeat=2):
        assert loaded.intersect(i, j)[0] == idx.intersect(i, j)[0]
        assert loaded.intersection_size(i, j) == idx.intersection_size(i, j)


def test_persistence_rejects_garbage():
    from fsi.errors import ParseError

    with pytest.raises(ParseError):
        load_index(io.BytesIO(b"NOPE" + b"\x00" * 40))
