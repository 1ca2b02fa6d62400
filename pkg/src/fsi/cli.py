"""Command-line front end.

Subcommands: build, query, empty, size, ccq, docindex, gen, bench.
Exit codes: 0 success, 1 bad input or missing file, 2 usage error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import pickle
import sys
from pathlib import Path

from . import bench as bench_mod
from .ccq import CcqIndex, load_color_array
from .doc_index import DocIndex, PairIndex
from .errors import InternalConsistencyError
from .fsi_index import BuildConfig, build
from .gen import GenSpec, generate
from .persist import load_index, save_index
from .set_store import load_sets


def _build_config(args):
    return BuildConfig(
        leaf_threshold=getattr(args, "leaf_threshold", 4),
        subset_mode=getattr(args, "mode", "explicit"),
    )


def _load_or_build(args):
    if getattr(args, "index", None):
        with open(args.index, "rb") as fp:
            return load_index(fp)
    with open(args.sets, "r", encoding="utf-8") as fp:
        col = load_sets(fp, dedupe=getattr(args, "dedupe", False))
    return build(col, _build_config(args))


def _parse_interval(text):
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def cmd_build(args):
    idx = _load_or_build(args)
    with open(args.out, "wb") as fp:
        save_index(idx, fp)
    return 0


def cmd_query(args):
    idx = _load_or_build(args)
    result, counters = idx.intersect(args.i, args.j)
    for x in result:
        print(x)
    if args.counters:
        print(repr(counters), file=sys.stderr)
    return 0


def cmd_empty(args):
    idx = _load_or_build(args)
    print("empty" if idx.intersection_empty(args.i, args.j) else "nonempty")
    return 0


def cmd_size(args):
    idx = _load_or_build(args)
    print(idx.intersection_size(args.i, args.j))
    return 0


def cmd_ccq(args):
    with open(args.array, "r", encoding="utf-8") as fp:
        colors = load_color_array(fp)
    idx = CcqIndex(colors)
    for c in idx.common_colors(_parse_interval(args.i1), _parse_interval(args.i2)):
        print(c)
    return 0


def load_corpus(path):
    """Directory of .txt files (ids = 1-based sorted-filename index) or a
    JSON-lines file with integer `id` and string `text` fields."""
    p = Path(path)
    if p.is_dir():
        files = sorted(f for f in p.iterdir() if f.suffix == ".txt")
        return [(i + 1, f.read_text(encoding="utf-8")) for i, f in enumerate(files)]
    docs = []
    with open(p, "r", encoding="utf-8") as fp:
        for line in fp:
            if line.strip():
                rec = json.loads(line)
                docs.append((int(rec["id"]), rec["text"]))
    return docs


def cmd_docindex(args):
    if args.action == "build":
        idx = DocIndex(load_corpus(args.corpus))
        with open(args.out, "wb") as fp:
            pickle.dump(idx, fp)
        return 0
    with open(args.index, "rb") as fp:
        idx = pickle.load(fp)
    if args.q is not None:
        docs = idx.list_docs_two(args.p, args.q)
    else:
        docs = idx.list_docs_one(args.p)
    for d in docs:
        print(d)
    return 0


def _parse_size_dist(text):
    kind, *rest = text.split(":")
    if kind == "uniform":
        return ("uniform", int(rest[0]), int(rest[1]))
    if kind == "zipf":
        return ("zipf", float(rest[0]), int(rest[1]))
    raise argparse.ArgumentTypeError("size dist must be uniform:lo:hi or zipf:s:max")


def cmd_gen(args):
    spec = GenSpec(m=args.m, size_dist=args.size_dist, universe=args.universe,
                   target_overlap=args.overlap, seed=args.seed)
    sets = generate(spec)
    text = "".join(" ".join(str(x) for x in s) + "\n" for s in sets)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args):
    grid = [int(x) for x in args.grid.split(",")]
    rows = bench_mod.run_bench(grid, pairs_per_instance=args.pairs, seed=args.seed,
                               mode=args.mode, deterministic=args.deterministic)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fp:
            bench_mod.write_csv(rows, fp)
    else:
        bench_mod.write_csv(rows, sys.stdout)
    exponent, extra = bench_mod.fit_exponent(rows)
    if exponent is None:
        print("scaling fit skipped: %s" % extra, file=sys.stderr)
    else:
        print("fitted exponent b=%.4f (work ~ %.3g * (N*(output+1))^b)"
              % (exponent, extra), file=sys.stderr)
    return 0


def _add_common_index_flags(p, need_input=True):
    if need_input:
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--sets", help="sets file to build from")
        group.add_argument("--index", help="persisted FSI1 index file")
    p.add_argument("--mode", choices=["explicit", "compact"], default="explicit")
    p.add_argument("--leaf-threshold", dest="leaf_threshold", type=int, default=4)
    p.add_argument("--dedupe", action="store_true",
                   help="sanitize duplicate elements within a set instead of erroring")


def make_parser():
    parser = argparse.ArgumentParser(prog="fsi", description=__doc__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="build an index and persist it")
    _add_common_index_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_build)

    for name, fn, helptext in [
        ("query", cmd_query, "intersection of two sets, one element per line"),
        ("empty", cmd_empty, "is the intersection empty (root-only structure)"),
        ("size", cmd_size, "intersection size (root-only structure)"),
    ]:
        p = sub.add_parser(name, help=helptext)
        _add_common_index_flags(p)
        p.add_argument("-i", type=int, required=True)
        p.add_argument("-j", type=int, required=True)
        if name == "query":
            p.add_argument("--counters", action="store_true",
                           help="print work counters to stderr")
        p.set_defaults(fn=fn)

    p = sub.add_parser("ccq", help="common colors of two disjoint intervals")
    p.add_argument("--array", required=True, help="one color per line")
    p.add_argument("--i1", required=True, metavar="L:R")
    p.add_argument("--i2", required=True, metavar="L:R")
    p.set_defaults(fn=cmd_ccq)

    p = sub.add_parser("docindex", help="document listing for one or two patterns")
    dsub = p.add_subparsers(dest="action", required=True)
    pb = dsub.add_parser("build")
    pb.add_argument("--corpus", required=True)
    pb.add_argument("--out", required=True)
    pq = dsub.add_parser("query")
    pq.add_argument("--index", required=True)
    pq.add_argument("-p", required=True)
    pq.add_argument("-q", default=None)
    p.set_defaults(fn=cmd_docindex)
    pb.set_defaults(fn=cmd_docindex, action="build")
    pq.set_defaults(fn=cmd_docindex, action="query")

    p = sub.add_parser("gen", help="write a reproducible synthetic sets file")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size-dist", dest="size_dist", type=_parse_size_dist,
                   default=("uniform", 8, 64))
    p.add_argument("--universe", type=int, default=1 << 20)
    p.add_argument("--overlap", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("bench", help="counter sweep over a grid, CSV out")
    p.add_argument("--grid", required=True, help="comma-separated N values")
    p.add_argument("--pairs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["explicit", "compact"], default="compact")
    p.add_argument("--deterministic", action="store_true",
                   help="zero wall_nanos so the CSV is byte-reproducible")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_bench)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InternalConsistencyError as exc:
        print("internal error: %s" % exc, file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print("missing file: %s" % exc, file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
