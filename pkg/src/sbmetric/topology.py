"""Balls, point/set distances and diameters over finite point sets.

Infima and suprema are taken over explicit finite sets, so they are exact
minima and maxima. Orientation follows S(x, x, y) throughout; nothing is
symmetrized.
"""

from __future__ import annotations

from typing import Iterable

from .errors import InputError
from .metrics import SbMetricSpec


def _points(metric: SbMetricSpec, A: Iterable, what: str = "set") -> list:
    pts = [metric.space.point(v) for v in A]
    if not pts:
        raise InputError(f"{what} must be nonempty")
    return pts


def _radius(r: float) -> float:
    if not r > 0:
        raise InputError(f"radius must be > 0, got {r}")
    return r


def in_open_ball(metric: SbMetricSpec, center, r: float, y, tol: float = 0.0) -> bool:
    """True iff S(y, y, center) < r + tol."""
    r = _radius(r)
    c, y = metric.space.point(center), metric.space.point(y)
    return metric.distance(y, y, c) < r + tol


def in_closed_ball(metric: SbMetricSpec, center, r: float, y, tol: float = 0.0) -> bool:
    r = _radius(r)
    c, y = metric.space.point(center), metric.space.point(y)
    return metric.distance(y, y, c) <= r + tol


def point_set_distance(metric: SbMetricSpec, x, A: Iterable) -> float:
    x = metric.space.point(x)
    s = metric.distance
    return min(s(x, x, y) for y in _points(metric, A))


def set_set_distance(metric: SbMetricSpec, A: Iterable, B: Iterable) -> float:
    s = metric.distance
    A, B = _points(metric, A, "A"), _points(metric, B, "B")
    return min(s(x, x, y) for x in A for y in B)


def diameter(metric: SbMetricSpec, A: Iterable) -> float:
    s = metric.distance
    A = _points(metric, A)
    # ordered pairs: S(x,x,y) and S(y,y,x) differ for non-symmetric metrics
    return max(s(x, x, y) for x in A for y in A)


def is_bounded(metric: SbMetricSpec, A: Iterable, r: float) -> bool:
    return diameter(metric, A) < _radius(r)
