"""Benchmark harness: sweep synthetic instances, record per-query work
counters alongside the baselines, and fit the scaling exponent of stopper
scan work against N*(output+1)."""

from __future__ import annotations

import csv
import random
import time

import numpy as np

from . import oracles
from .fsi_index import BuildConfig, build
from .gen import GenSpec, generate
from .set_store import SetCollection

BENCH_COLUMNS = [
    "N",
    "m",
    "i",
    "j",
    "output",
    "hash_probes",
    "matrix_lookups",
    "nodes_visited",
    "stopper_elements_scanned",
    "wall_nanos",
    "mode",
]


def default_spec(n_target, seed):
    """An instance whose sets are large at the root, so the tree is exercised:
    roughly sqrt(N)/2 sets of mean size 2*sqrt(N), with a shared pool driving
    a spread of intersection sizes."""
    root_n = max(4, int(n_target**0.5))
    m = max(4, root_n // 2)
    mean = max(4, (2 * n_target) // (2 * m))
    lo, hi = max(1, mean // 2), mean + mean // 2
    return GenSpec(
        m=m,
        size_dist=("uniform", lo, hi),
        universe=max(n_target, 16),
        target_overlap=0.3,
        seed=seed,
    )


def _timed(fn, deterministic):
    start = 0 if deterministic else time.perf_counter_ns()
    result = fn()
    nanos = 0 if deterministic else time.perf_counter_ns() - start
    return result, nanos


def run_bench(grid, pairs_per_instance=100, seed=0, mode="compact",
              deterministic=False, with_baselines=True, spec_factory=default_spec):
    """Run the sweep and return BenchRow dicts (column order of BENCH_COLUMNS)."""
    rows = []
    for n_target in grid:
        spec = spec_factory(n_target, seed)
        col = SetCollection(generate(spec))
        idx = build(col, BuildConfig(subset_mode=mode))
        rng = random.Random((seed << 20) ^ n_target)
        n_actual = col.total_size
        for _ in range(pairs_per_instance):
            i = rng.randrange(col.m)
            j = rng.randrange(col.m)
            while j == i and col.m > 1:
                j = rng.randrange(col.m)
            (result, counters), nanos = _timed(lambda: idx.intersect(i, j), deterministic)
            base = {"N": n_actual, "m": col.m, "i": i, "j": j, "output": len(result)}
            rows.append({
                **base,
                **counters.as_dict(),
                "wall_nanos": nanos,
                "mode": "fsi",
            })
            if not with_baselines:
                continue
            small = min(len(col.sets[i]), len(col.sets[j]))
            hashed, nanos = _timed(lambda: oracles.naive_hash_intersect(col, i, j),
                                   deterministic)
            rows.append({
                **base, "hash_probes": small, "matrix_lookups": 0,
                "nodes_visited": 0, "stopper_elements_scanned": 0,
                "wall_nanos": nanos, "mode": "naive_hash",
            })
            srted, nanos = _timed(
                lambda: oracles.naive_sorted_intersect(col.sets[i], col.sets[j]),
                deterministic)
            rows.append({
                **base, "hash_probes": 0, "matrix_lookups": 0,
                "nodes_visited": 0, "stopper_elements_scanned": 0,
                "wall_nanos": nanos, "mode": "naive_sorted",
            })
            if hashed != result or srted != result:
                raise AssertionError("baseline disagrees with index on (%d,%d)" % (i, j))
    return rows


def fit_exponent(rows):
    """Least-squares slope of log(stopper work) vs log(N*(output+1)) over fsi
    rows with nonzero work. Returns (exponent, prefactor) or (None, reason)."""
    fsi_rows = [row for row in rows if row["mode"] == "fsi"]
    if fsi_rows and all(row["output"] == 0 for row in fsi_rows):
        return None, "all sampled intersections are empty; nothing to fit"
    xs, ys = [], []
    for row in fsi_rows:
        work = row["stopper_elements_scanned"]
        if work < 1:
            continue
        xs.append(np.log(row["N"] * (row["output"] + 1)))
        ys.append(np.log(work))
    if len(xs) < 2 or len(set(xs)) < 2:
        return None, "not enough nonzero-work samples to fit"
    slope, intercept = np.polyfit(np.asarray(xs), np.asarray(ys), 1)
    return float(slope), float(np.exp(intercept))


def write_csv(rows, fp):
    writer = csv.DictWriter(fp, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
