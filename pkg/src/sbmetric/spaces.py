"""Carrier spaces and point handling.

Points on a real space are tuples of floats of fixed length, so a value
like ``4`` on the real line is stored as ``(4.0,)``. Points of a finite
space are its labels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Union

import numpy as np

from .errors import InputError

Point = Union[tuple, Hashable]


@dataclass(frozen=True)
class RealSpace:
    dim: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise InputError(f"dimension must be >= 1, got {self.dim}")

    def point(self, value: Any) -> tuple:
        if isinstance(value, (int, float, np.integer, np.floating)) and not isinstance(value, bool):
            coords = (float(value),)
        else:
            try:
                coords = tuple(float(v) for v in value)
            except TypeError:
                raise InputError(f"cannot interpret {value!r} as a point") from None
        if len(coords) != self.dim:
            raise InputError(f"expected a point of dimension {self.dim}, got {len(coords)}")
        if not all(math.isfinite(c) for c in coords):
            raise InputError(f"point has non-finite coordinates: {coords}")
        return coords

    def grid(self, lo: float, hi: float, step: float) -> list[tuple]:
        axis = grid_axis(lo, hi, step)
        return [tuple(p) for p in itertools.product(axis, repeat=self.dim)]

    def random_points(self, rng: np.random.Generator, count: int, lo: float, hi: float) -> list[tuple]:
        values = rng.uniform(lo, hi, size=(count, self.dim))
        return [tuple(float(v) for v in row) for row in values]

    def format_point(self, p: tuple) -> str:
        coords = ",".join(fmt_number(c) for c in p)
        return coords if self.dim == 1 else f"[{coords}]"


@dataclass(frozen=True)
class FiniteSpace:
    labels: tuple

    def __post_init__(self):
        if not self.labels:
            raise InputError("a finite space needs at least one element")
        if len(set(self.labels)) != len(self.labels):
            raise InputError("finite space labels must be distinct")

    def point(self, value: Any) -> Hashable:
        if value not in self.labels:
            raise InputError(f"{value!r} is not an element of the finite space")
        return value

    def grid(self, lo: float, hi: float, step: float) -> list:
        return list(self.labels)

    def random_points(self, rng: np.random.Generator, count: int, lo: float, hi: float) -> list:
        idx = rng.integers(0, len(self.labels), size=count)
        return [self.labels[int(i)] for i in idx]

    def format_point(self, p) -> str:
        return str(p)


Space = Union[RealSpace, FiniteSpace]


def grid_axis(lo: float, hi: float, step: float) -> list[float]:
    """Points lo, lo+step, ... up to hi inclusive (hi is kept when it lands on the lattice)."""
    if step <= 0:
        raise InputError(f"grid step must be positive, got {step}")
    if hi < lo:
        raise InputError(f"empty grid range [{lo}, {hi}]")
    n = int(math.floor((hi - lo) / step + 1e-9))
    # index-based to keep lattice points exact for integer steps
    return [float(lo + k * step) for k in range(n + 1)]


def fmt_number(v: float) -> str:
    """Shortest round-trip text for a float, without a trailing ``.0``."""
    text = repr(float(v))
    return text[:-2] if text.endswith(".0") else text


def normalize_points(space: Space, values: Iterable[Any]) -> list:
    return [space.point(v) for v in values]
