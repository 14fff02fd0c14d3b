"""Deterministic grid + random tuple generation shared by the axiom checks
and the contraction estimators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InputError
from .spaces import Space

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SamplerConfig:
    """Sampling domain for counterexample search.

    Every coordinate ranges over ``lo, lo + step, ..., hi``; the grid part
    enumerates all tuples over those points (or a seeded subsample of at
    most ``max_grid_tuples`` when the full product is larger), then
    ``random_count`` tuples with coordinates drawn uniformly from
    ``[lo, hi)`` follow. ``probes`` are extra tuples always evaluated first.
    """

    seed: int = 0
    lo: float = -10.0
    hi: float = 10.0
    step: float = 1.0
    random_count: int = 10_000
    slack: float = 1e-9
    max_counterexamples: int = 10
    max_grid_tuples: int = 500_000
    probes: tuple = ()

    def __post_init__(self):
        if self.random_count < 0:
            raise InputError("random_count must be >= 0")
        if not self.step > 0:
            raise InputError("grid step must be > 0")
        if self.slack < 0:
            raise InputError("slack must be >= 0")
        if self.max_counterexamples < 1:
            raise InputError("max_counterexamples must be >= 1")
        if self.hi < self.lo:
            raise InputError(f"empty range [{self.lo}, {self.hi}]")


def rng_for(cfg: SamplerConfig, *stream: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed & _SEED_MASK, *stream])


@dataclass
class TupleStream:
    """Tuples of one arity, in a fixed order: probes, grid, random."""

    space: Space
    arity: int
    cfg: SamplerConfig
    probes: tuple = ()

    def __post_init__(self):
        self.grid = self.space.grid(self.cfg.lo, self.cfg.hi, self.cfg.step)
        self.grid_total = len(self.grid) ** self.arity
        self.grid_exhaustive = self.grid_total <= self.cfg.max_grid_tuples
        self.pinned = [tuple(self.space.point(v) for v in t)
                       for t in (*self.probes, *self.cfg.probes) if len(t) == self.arity]

    def __iter__(self) -> Iterator[tuple[tuple, bool]]:
        for t in self.pinned:
            yield t, True
        seen = set(self.pinned)
        if self.grid_exhaustive:
            for t in itertools.product(self.grid, repeat=self.arity):
                if t not in seen:
                    yield t, False
        else:
            rng = rng_for(self.cfg, self.arity, 1)
            idx = rng.integers(0, len(self.grid), size=(self.cfg.max_grid_tuples, self.arity))
            for row in idx:
                t = tuple(self.grid[int(i)] for i in row)
                if t not in seen:
                    yield t, False
        n = self.cfg.random_count
        if n:
            rng = rng_for(self.cfg, self.arity, 0)
            pts = self.space.random_points(rng, n * self.arity, self.cfg.lo, self.cfg.hi)
            for k in range(n):
                t = tuple(pts[k * self.arity:(k + 1) * self.arity])
                if t not in seen:
                    yield t, False

