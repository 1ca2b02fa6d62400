import random

import pytest

from fsi.doc_index import (
    DocIndex,
    PairIndex,
    build_doc_index,
    build_pair_index,
    build_suffix_array,
)
from fsi.errors import ValidationError

CORPUS = [(1, "abab"), (2, "abc"), (3, "bc")]


@pytest.fixture(scope="module")
def idx():
    return build_doc_index(CORPUS)


def test_suffix_array_matches_naive_sort():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randint(1, 60)
        s = bytes(rng.randint(1, 4) for _ in range(n))
        assert build_suffix_array(s).tolist() == sorted(range(n), key=lambda i: s[i:])


def test_build_colors_example(idx):
    assert len(idx.colors) == 9
    iv = idx.pattern_interval("ab")
    assert iv.width == 3
    assert idx.colors[iv.lo - 1 : iv.hi].tolist() == [1, 1, 2]


def test_single_document():
    one = build_doc_index([(1, "a")])
    assert one.sa.tolist() == [0]
    assert one.colors.tolist() == [1]
    assert one.list_docs_one("a") == [1]


def test_identical_documents_share_intervals():
    twin = build_doc_index([(1, "xyx"), (2, "xyx")])
    for p in ("x", "y", "xy", "yx", "xyx"):
        assert twin.list_docs_one(p) == [1, 2]


def test_sa_is_sorted_permutation(idx):
    suffixes = [idx.text[p:] for p in idx.sa.tolist()]
    assert suffixes == sorted(suffixes)
    starts = {p for p in range(len(idx.text)) if idx.text[p] != 0}
    assert set(idx.sa.tolist()) == starts


def test_pattern_interval_soundness(idx):
    for p in ("a", "ab", "b", "bc", "c", "abab"):
        iv = idx.pattern_interval(p)
        pat = p.encode()
        for r in range(iv.lo, iv.hi + 1):
            pos = idx.sa[r - 1]
            assert idx.text[pos : pos + len(pat)] == pat
        if iv.lo >= 2:
            pos = idx.sa[iv.lo - 2]
            assert idx.text[pos : pos + len(pat)] != pat
        if iv.hi < len(idx.sa):
            pos = idx.sa[iv.hi]
            assert idx.text[pos : pos + len(pat)] != pat


def test_pattern_interval_edges(idx):
    assert idx.pattern_interval("zz").empty
    assert idx.pattern_interval("abab").width == 1
    with pytest.raises(ValidationError):
        idx.pattern_interval("")


def test_list_docs_examples(idx):
    assert idx.list_docs_two("ab", "bc") == [2]
    assert idx.list_docs_two("ab", "ab") == [1, 2]
    assert idx.list_docs_two("abab", "xyz") == []
    assert idx.list_docs_one("b") == [1, 2, 3]
    assert idx.list_docs_one("abc") == [2]
    assert idx.list_docs_one("q") == []
    with pytest.raises(ValidationError):
        idx.list_docs_two("", "a")


def test_sentinel_rejected():
    with pytest.raises(ValidationError):
        build_doc_index([(1, b"a\x00b")])
    with pytest.raises(ValidationError):
        build_doc_index([])


def test_doc_ids_are_preserved():
    named = build_doc_index([(10, "ab"), (42, "b")])
    assert named.list_docs_one("b") == [10, 42]
    assert named.list_docs_two("a", "b") == [10]


def test_random_corpora_match_brute_force():
    rng = random.Random(7)
    for _ in range(8):
        docs = [
            (i + 1, "".join(rng.choice("abc") for _ in range(rng.randint(1, 25))))
            for i in range(rng.randint(1, 10))
        ]
        di = build_doc_index(docs)
        pats = [
            "".join(rng.choice("abc") for _ in range(rng.randint(1, 4)))
            for _ in range(12)
        ]
        for p in pats:
            assert di.list_docs_one(p) == sorted(i for i, t in docs if p in t)
            for q in pats:
                want = sorted(i for i, t in docs if p in t and q in t)
                assert di.list_docs_two(p, q) == want


def test_pair_examples():
    pi = build_pair_index([("ab", "xy"), ("ba", "yx")])
    assert pi.pair_query("a", "x") == [1, 2]
    assert pi.pair_query("ab", "yx") == []
    assert pi.pair_query("q", "x") == []
    with pytest.raises(ValidationError):
        pi.pair_query("", "x")
    with pytest.raises(ValidationError):
        build_pair_index([])


def test_random_pairs_match_brute_force():
    rng = random.Random(11)
    for _ in range(8):
        pairs = [
            (
                "".join(rng.choice("ab") for _ in range(rng.randint(1, 12))),
                "".join(rng.choice("xy") for _ in range(rng.randint(1, 12))),
            )
            for _ in range(rng.randint(1, 8))
        ]
        pi = build_pair_index(pairs)
        for _ in range(25):
            s1 = "".join(rng.choice("ab") for _ in range(rng.randint(1, 3)))
            s2 = "".join(rng.choice("xy") for _ in range(rng.randint(1, 3)))
            want = sorted(i + 1 for i, (a, b) in enumerate(pairs) if s1 in a and s2 in b)
            assert pi.pair_query(s1, s2) == want
