"""Reproducible synthetic set collections for tests and benchmarks.

All randomness flows from a single seed through Python's Mersenne Twister
(random.Random), so a GenSpec yields byte-identical instances on any
platform. Pairwise overlap is steered by drawing a configurable fraction of
each set's elements from a small shared pool instead of the whole universe.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ValidationError


@dataclass(frozen=True)
class GenSpec:
    """Recipe for one synthetic collection.

    size_dist is ("uniform", lo, hi) or ("zipf", s, max): zipf gives set i
    the size max(1, floor(max / (i+1)**s)).
    """

    m: int
    size_dist: tuple = ("uniform", 8, 64)
    universe: int = 1 << 20
    target_overlap: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValidationError("m must be >= 0")
        if self.universe < 1:
            raise ValidationError("universe must be >= 1")
        if not 0.0 <= self.target_overlap <= 1.0:
            raise ValidationError("target_overlap must be in [0,1]")
        kind = self.size_dist[0]
        if kind == "uniform":
            _, lo, hi = self.size_dist
            if not 1 <= lo <= hi:
                raise ValidationError("uniform sizes need 1 <= lo <= hi")
        elif kind == "zipf":
            _, s, mx = self.size_dist
            if s < 0 or mx < 1:
                raise ValidationError("zipf needs s >= 0 and max >= 1")
        else:
            raise ValidationError("unknown size distribution %r" % kind)


def _sizes(spec, rng):
    kind = spec.size_dist[0]
    if kind == "uniform":
        _, lo, hi = spec.size_dist
        return [rng.randint(lo, hi) for _ in range(spec.m)]
    _, s, mx = spec.size_dist
    return [max(1, int(mx / (i + 1) ** s)) for i in range(spec.m)]


def generate(spec):
    """Materialize a GenSpec into a list of ascending element lists."""
    rng = random.Random(spec.seed)
    sizes = [min(sz, spec.universe) for sz in _sizes(spec, rng)]
    mean = max(1, sum(sizes) // max(1, len(sizes)))
    pool_size = min(spec.universe, max(4, mean))
    pool = rng.sample(range(spec.universe), pool_size) if spec.target_overlap > 0 else []
    sets = []
    for sz in sizes:
        if spec.target_overlap >= 1.0:
            sz = min(sz, pool_size)  # only the pool is reachable
        chosen = set()
        while len(chosen) < sz:
            if pool and rng.random() < spec.target_overlap:
                chosen.add(rng.choice(pool))
            else:
                chosen.add(rng.randrange(spec.universe))
        sets.append(sorted(chosen))
    return sets
