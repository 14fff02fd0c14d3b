"""Ternary S_b-metrics, binary b-metrics, the built-in catalog and the
constructors that turn one kind into the other."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import InputError, PreconditionError, UnknownNameError
from .spaces import RealSpace, Space

TernaryFn = Callable[[object, object, object], float]
BinaryFn = Callable[[object, object], float]


@dataclass(frozen=True)
class SbMetricSpec:
    """A ternary distance together with its claimed coefficient ``b``.

    ``distance`` is called with already-normalized points; calling the object
    itself normalizes and validates the arguments first. ``probes`` are
    tuples that every sampler run evaluates in addition to its grid and
    random draws, so catalog entries can carry their known witnesses.
    """

    name: str
    distance: TernaryFn = field(repr=False)
    b: float = 1.0
    symmetric: bool = True
    space: Space = RealSpace(1)
    description: str = ""
    probes: tuple = ()

    def __post_init__(self):
        if not self.b >= 1:
            raise InputError(f"coefficient b must be >= 1, got {self.b}")

    def __call__(self, x, y, z) -> float:
        return evaluate(self, x, y, z)

    def with_b(self, b: float) -> "SbMetricSpec":
        return SbMetricSpec(self.name, self.distance, b, self.symmetric, self.space,
                            self.description, self.probes)


@dataclass(frozen=True)
class BMetricSpec:
    name: str
    distance: BinaryFn = field(repr=False)
    b: float = 1.0
    space: Space = RealSpace(1)
    description: str = ""
    probes: tuple = ()

    def __post_init__(self):
        if not self.b >= 1:
            raise InputError(f"coefficient b must be >= 1, got {self.b}")

    def __call__(self, x, y) -> float:
        return self.distance(self.space.point(x), self.space.point(y))


def evaluate(metric: SbMetricSpec, x, y, z) -> float:
    sp = metric.space
    return metric.distance(sp.point(x), sp.point(y), sp.point(z))


# ---------------------------------------------------------------------------
# binary metrics


def abs_metric() -> BMetricSpec:
    return BMetricSpec("abs", lambda x, y: abs(x[0] - y[0]), 1.0,
                       description="|x - y| on the real line")


def squared_metric() -> BMetricSpec:
    # (u + v)^2 <= 2(u^2 + v^2)
    return BMetricSpec("sq", lambda x, y: (x[0] - y[0]) ** 2, 2.0,
                       description="|x - y|^2 on the real line (b-metric, b = 2)")


def l1_metric(n: int = 1) -> BMetricSpec:
    def d(x, y):
        return sum(abs(xi - yi) for xi, yi in zip(x, y))

    return BMetricSpec(f"l1:{n}" if n != 1 else "l1", d, 1.0, RealSpace(n),
                       description=f"sum |x_i - y_i| on R^{n}")


# ---------------------------------------------------------------------------
# ternary catalog


def ex2_1() -> SbMetricSpec:
    def s(x, y, z):
        x, y, z = x[0], y[0], z[0]
        return (abs(x - y) + abs(y - z) + abs(x - z)) ** 2 / 16.0

    return SbMetricSpec(
        "ex2_1", s, 4.0, True,
        description="(|x-y| + |y-z| + |x-z|)^2 / 16 on R; S_b with b = 4, not an S-metric",
        probes=(((4.0,), (6.0,), (8.0,), (5.0,)),),
    )


def ex2_2(p: float = 2.0, d: BMetricSpec | None = None) -> SbMetricSpec:
    """``[d(x,y) + d(y,z) + d(x,z)]^p`` for an ordinary metric ``d``.

    The coefficient attached is ``3**(p-1)``: the perimeter is at most
    ``2(d(x,a) + d(y,a) + d(z,a))`` and the power mean inequality bounds
    the p-th power of that sum by ``3**(p-1)`` times the sum of p-th powers.
    """
    p = float(p)
    if not p > 1:
        raise InputError(f"exponent p must be > 1, got {p}")
    d = d or abs_metric()
    if d.b != 1:
        raise PreconditionError("ex2_2 needs an ordinary metric (b = 1)")
    dist = d.distance

    def s(x, y, z):
        return (dist(x, y) + dist(y, z) + dist(x, z)) ** p

    name = "ex2_2" if p == 2 and d.name == "abs" else f"ex2_2:{_num(p)}"
    return SbMetricSpec(name, s, 3.0 ** (p - 1), True, d.space,
                        description=f"[d(x,y) + d(y,z) + d(x,z)]^p with p = {_num(p)}, d = {d.name}")


def ex2_3() -> SbMetricSpec:
    def s(x, y, z):
        if x == y == z:
            return 0.0
        if x == y == (0.0,) and z == (1.0,):
            return 2.0
        if x == y == (1.0,) and z == (0.0,):
            return 4.0
        return 1.0

    return SbMetricSpec(
        "ex2_3", s, 2.0, False,
        description="four-case metric on R: S(0,0,1)=2, S(1,1,0)=4, 0 on the diagonal, else 1",
        probes=(((0.0,), (1.0,)),),
    )


def ex2_5() -> SbMetricSpec:
    def s(x, y, z):
        x, y, z = x[0], y[0], z[0]
        return abs(x - z) + abs(x + z - 2 * y)

    return SbMetricSpec("ex2_5", s, 1.0, True,
                        description="|x-z| + |x+z-2y| on R (an S-metric)")


def ex2_6(b: float = 1.0) -> SbMetricSpec:
    b = float(b)

    def s(x, y, z):
        x, y, z = x[0], y[0], z[0]
        return b * (abs(x - z) + abs(x + z - 2 * y))

    name = "ex2_6" if b == 1 else f"ex2_6:{_num(b)}"
    return SbMetricSpec(name, s, b, True,
                        description=f"b(|x-z| + |x+z-2y|) on R with b = {_num(b)}")


def s1(n: int = 1) -> SbMetricSpec:
    n = int(n)

    def s(x, y, z):
        return sum(abs(xi - zi) for xi, zi in zip(x, z)) + sum(abs(yi - zi) for yi, zi in zip(y, z))

    return SbMetricSpec("s1" if n == 1 else f"s1:{n}", s, 1.0, True, RealSpace(n),
                        description=f"sum |x_i - z_i| + sum |y_i - z_i| on R^{n}")


_TERNARY = {
    "ex2_1": (ex2_1, None),
    "ex2_2": (ex2_2, "p"),
    "ex2_3": (ex2_3, None),
    "ex2_5": (ex2_5, None),
    "ex2_6": (ex2_6, "b"),
    "s1": (s1, "n"),
}

_BINARY = {
    "abs": (abs_metric, None),
    "sq": (squared_metric, None),
    "l1": (l1_metric, "n"),
}


def builtin(name: str, **params) -> SbMetricSpec:
    try:
        factory, _ = _TERNARY[name]
    except KeyError:
        raise UnknownNameError(f"unknown metric {name!r}; known: {', '.join(_TERNARY)}") from None
    return factory(**params)


def builtin_bmetric(name: str, **params) -> BMetricSpec:
    try:
        factory, _ = _BINARY[name]
    except KeyError:
        raise UnknownNameError(f"unknown b-metric {name!r}; known: {', '.join(_BINARY)}") from None
    return factory(**params)


def catalog() -> list:
    """Default instances of every registered metric, ternary first."""
    return [f() for f, _ in _TERNARY.values()] + [f() for f, _ in _BINARY.values()]


# ---------------------------------------------------------------------------
# induced metrics


def induce_s_from_metric(d: BMetricSpec) -> SbMetricSpec:
    if d.b != 1:
        raise PreconditionError(f"{d.name} has b = {d.b}; an ordinary metric (b = 1) is required")
    dist = d.distance
    return SbMetricSpec(f"s-from:{d.name}", lambda x, y, z: dist(x, z) + dist(y, z), 1.0, True,
                        d.space, description=f"d(x,z) + d(y,z) for d = {d.name}")


def induce_sb_from_b(d: BMetricSpec) -> SbMetricSpec:
    dist = d.distance
    return SbMetricSpec(f"sb-from:{d.name}", lambda x, y, z: dist(x, z) + dist(y, z), d.b, True,
                        d.space, description=f"d(x,z) + d(y,z) for the b-metric {d.name}")


def induce_b_from_sb(s: SbMetricSpec, require_symmetric: bool = True) -> BMetricSpec:
    if require_symmetric and not s.symmetric:
        raise PreconditionError(f"{s.name} is not symmetric")
    dist = s.distance
    return BMetricSpec(f"b-from:{s.name}", lambda x, y: dist(x, x, y), 1.5 * s.b, s.space,
                       description=f"S(x,x,y) for S = {s.name}")


def resolve(name: str):
    """Look up a metric by its command-line name.

    Accepted forms: a catalog name with an optional parameter
    (``ex2_2:3``, ``s1:4``, ``l1:2``), or one of the induced forms
    ``s-from:<binary>``, ``sb-from:<binary>``, ``b-from:<ternary>``.
    Returns an ``SbMetricSpec`` or a ``BMetricSpec``.
    """
    for prefix, build, inner in (
        ("s-from:", induce_s_from_metric, _resolve_binary),
        ("sb-from:", induce_sb_from_b, _resolve_binary),
        ("b-from:", induce_b_from_sb, _resolve_ternary),
    ):
        if name.startswith(prefix):
            return build(inner(name[len(prefix):]))
    base = name.split(":", 1)[0]
    if base in _TERNARY:
        return _resolve_ternary(name)
    if base in _BINARY:
        return _resolve_binary(name)
    raise UnknownNameError(f"unknown metric {name!r}")


def _resolve_ternary(name: str) -> SbMetricSpec:
    return _resolve(name, _TERNARY, builtin)


def _resolve_binary(name: str) -> BMetricSpec:
    return _resolve(name, _BINARY, builtin_bmetric)


def _resolve(name, table, build):
    base, _, arg = name.partition(":")
    if base not in table:
        raise UnknownNameError(f"unknown metric {name!r}")
    param = table[base][1]
    if not arg:
        return build(base)
    if param is None:
        raise InputError(f"metric {base!r} takes no parameter")
    try:
        value = int(arg) if param == "n" else float(Fraction(arg))
    except ValueError:
        raise InputError(f"bad parameter {arg!r} for metric {base!r}") from None
    return build(base, **{param: value})


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))
