"""Picard iteration with contraction certificates.

Two families of certificate are supported: the Banach condition
``S(Tx,Tx,Ty) <= h S(x,x,y)`` and the generalized condition that adds
``alpha2`` times the largest of the four orbit distances
``S(Tx,Tx,x), S(Tx,Tx,y), S(Ty,Ty,y), S(Ty,Ty,x)``. Each has a symmetric
variant with a weaker threshold. Threshold checks use exact rational
arithmetic on the binary values of the inputs.

A valid certificate gives a per-step decay rate ``r`` (``h`` itself, or
``(alpha1 + b alpha2) / (1 - 2 b^2 alpha2)`` in the generalized case) and
the a priori tail bound ``2 b r^n / (1 - b^2 r) S(x0, x0, x1)`` on
``S(xn, xn, xm)`` for every ``m > n``. For symmetric metrics the factor
``b^2`` in the denominator drops to ``b``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import CertificateError, DegenerateError, InputError, PreconditionError, UnknownNameError
from .metrics import SbMetricSpec
from .sampling import SamplerConfig, TupleStream
from .spaces import fmt_number

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-10
DEFAULT_MAX_ITERS = 10_000


class CertKind(enum.Enum):
    BANACH = "BANACH"
    BANACH_SYMMETRIC = "BANACH_SYMMETRIC"
    GENERALIZED = "GENERALIZED"
    GENERALIZED_SYMMETRIC = "GENERALIZED_SYMMETRIC"
    NONE = "NONE"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            key = value.strip().upper().replace("-", "_")
            key = {"BANACH_SYM": "BANACH_SYMMETRIC", "GENERALIZED_SYM": "GENERALIZED_SYMMETRIC"}.get(key, key)
            return cls.__members__.get(key)
        return None

    @property
    def symmetric(self) -> bool:
        return self in (CertKind.BANACH_SYMMETRIC, CertKind.GENERALIZED_SYMMETRIC)

    @property
    def generalized(self) -> bool:
        return self in (CertKind.GENERALIZED, CertKind.GENERALIZED_SYMMETRIC)


class Termination(enum.Enum):
    CONVERGED = "CONVERGED"
    MAX_ITERS = "MAX_ITERS"
    DIVERGED_BOUND = "DIVERGED_BOUND"


@dataclass(frozen=True)
class SelfMap:
    name: str
    fn: Callable = field(repr=False, compare=False)

    def __call__(self, x):
        return self.fn(x)


@dataclass(frozen=True)
class ContractionCertificate:
    kind: CertKind
    b: float = 1.0
    h: Optional[float] = None
    alpha1: Optional[float] = None
    alpha2: Optional[float] = None
    valid: bool = False
    margin: float = 0.0
    attained: float = 0.0
    threshold: float = 0.0
    rate: Optional[float] = None
    # b^2 r < 1 (or b r < 1 for symmetric kinds): the tail bound is usable
    tail_ok: bool = False

    def tail_bound(self, n: int, s0: float) -> float:
        if not (self.valid and self.tail_ok):
            raise CertificateError(f"{self.kind.value} certificate does not support a tail bound")
        return apriori_tail_bound(self.rate, self.b, n, s0, symmetric=self.kind.symmetric)

    def to_text(self) -> str:
        parts = [f"certificate kind={self.kind.value}", f"b={fmt_number(self.b)}"]
        if self.h is not None:
            parts.append(f"h={fmt_number(self.h)}")
        if self.alpha1 is not None:
            parts.append(f"alpha1={fmt_number(self.alpha1)} alpha2={fmt_number(self.alpha2)}")
        parts += [
            f"attained={fmt_number(self.attained)}",
            f"threshold={fmt_number(self.threshold)}",
            f"valid={str(self.valid).lower()}",
            f"margin={fmt_number(self.margin)}",
        ]
        if self.rate is not None:
            parts.append(f"rate={fmt_number(self.rate)}")
            parts.append(f"tail_bound={'usable' if self.tail_ok else 'unusable'}")
        return " ".join(parts)


NO_CERTIFICATE = ContractionCertificate(CertKind.NONE)


def certify(kind: CertKind | str, metric: SbMetricSpec | None = None, h=None, alpha1=None, alpha2=None,
            b=None) -> ContractionCertificate:
    """Check the threshold inequality of ``kind`` for the metric's coefficient.

    ``b`` overrides ``metric.b``; either may be given. Parameters may be
    ints, floats or ``Fraction``s; the comparison is exact either way.
    """
    kind = CertKind(kind)
    if kind is CertKind.NONE:
        return NO_CERTIFICATE
    if b is None:
        if metric is None:
            raise InputError("certify needs a metric or an explicit b")
        b = metric.b
    if kind.symmetric and metric is not None and not metric.symmetric:
        raise PreconditionError(f"{kind.value} requires a symmetric metric; {metric.name} is not")
    B = Fraction(b)
    if B < 1:
        raise InputError(f"b must be >= 1, got {b}")

    if not kind.generalized:
        if h is None:
            raise InputError(f"{kind.value} needs h")
        H = Fraction(h)
        if H < 0:
            raise InputError(f"h must be >= 0, got {h}")
        threshold = 1 / (B * B) if kind is CertKind.BANACH else 1 / B
        attained, rate = H, H
        extra = dict(h=float(H))
    else:
        if alpha1 is None or alpha2 is None:
            raise InputError(f"{kind.value} needs alpha1 and alpha2")
        A1, A2 = Fraction(alpha1), Fraction(alpha2)
        if A1 < 0 or A2 < 0:
            raise InputError("alpha1 and alpha2 must be >= 0")
        if kind is CertKind.GENERALIZED:
            attained = A1 + (2 * B * B + B) * A2
            denom = 1 - 2 * B * B * A2
        else:
            attained = A1 + 3 * B * A2
            denom = 1 - 2 * B * A2
        threshold = Fraction(1)
        rate = (A1 + B * A2) / denom if denom > 0 else None
        extra = dict(alpha1=float(A1), alpha2=float(A2))

    valid = attained < threshold
    factor = B if kind.symmetric else B * B
    tail_ok = valid and rate is not None and factor * rate < 1
    return ContractionCertificate(
        kind, float(B), valid=valid, margin=float(threshold - attained),
        attained=float(attained), threshold=float(threshold),
        rate=None if rate is None else float(rate), tail_ok=tail_ok, **extra,
    )


def apriori_tail_bound(h: float, b: float, n: int, s0: float, symmetric: bool = False) -> float:
    """Upper bound ``2 b h^n / (1 - b^2 h) * s0`` on S(xn, xn, xm), m > n.

    With ``symmetric=True`` the denominator is ``1 - b h``.
    """
    factor = b if symmetric else b * b
    if not factor * h < 1:
        raise CertificateError(f"tail bound needs {'b' if symmetric else 'b^2'} h < 1 (b={b}, h={h})")
    if n < 0:
        raise InputError("n must be >= 0")
    return 2 * b * h ** n / (1 - factor * h) * s0


# ---------------------------------------------------------------------------
# sampled estimates


def _sup_ratio(metric: SbMetricSpec, T: SelfMap, cfg: SamplerConfig):
    s = metric.distance
    best, witness = None, None
    for (x, y), _ in TupleStream(metric.space, 2, cfg, metric.probes):
        den = s(x, x, y)
        if den <= 0:
            continue
        tx, ty = T(x), T(y)
        r = s(tx, tx, ty) / den
        if best is None or r > best:
            best, witness = r, (x, y)
    if best is None:
        raise DegenerateError("no sampled pair with S(x,x,y) > 0")
    return best, witness


def estimate_contraction_h(metric: SbMetricSpec, T: SelfMap, cfg: SamplerConfig | None = None) -> float:
    """Largest sampled S(Tx,Tx,Ty) / S(x,x,y): a lower bound on any admissible h."""
    return _sup_ratio(metric, T, cfg or SamplerConfig())[0]


def contraction_witness(metric: SbMetricSpec, T: SelfMap, cfg: SamplerConfig | None = None):
    best, (x, y) = _sup_ratio(metric, T, cfg or SamplerConfig())
    fmt = metric.space.format_point
    return best, f"({fmt(x)},{fmt(y)})"


@dataclass(frozen=True)
class GeneralizedCheck:
    holds: bool
    checked: int
    worst_pair: Optional[str]
    worst_slack: float
    lhs: float
    rhs: float


def check_generalized(metric: SbMetricSpec, T: SelfMap, alpha1: float, alpha2: float,
                      cfg: SamplerConfig | None = None) -> GeneralizedCheck:
    if alpha1 < 0 or alpha2 < 0:
        raise InputError("alpha1 and alpha2 must be >= 0")
    cfg = cfg or SamplerConfig()
    s = metric.distance
    a1, a2 = float(Fraction(alpha1)), float(Fraction(alpha2))
    worst = None
    checked = 0
    for (x, y), _ in TupleStream(metric.space, 2, cfg, metric.probes):
        tx, ty = T(x), T(y)
        lhs = s(tx, tx, ty)
        rhs = a1 * s(x, x, y) + a2 * max(s(tx, tx, x), s(tx, tx, y), s(ty, ty, y), s(ty, ty, x))
        checked += 1
        slack = rhs - lhs
        if worst is None or slack < worst[0]:
            worst = (slack, x, y, lhs, rhs)
    if worst is None:
        return GeneralizedCheck(True, 0, None, math.inf, 0.0, 0.0)
    slack, x, y, lhs, rhs = worst
    fmt = metric.space.format_point
    return GeneralizedCheck(slack >= -cfg.slack, checked, f"({fmt(x)},{fmt(y)})", slack, lhs, rhs)


# ---------------------------------------------------------------------------
# iteration


@dataclass
class IterationTrace:
    metric: str
    map: str
    points: list
    step_distances: list
    bound_values: list
    termination: Termination
    fixed_point: Optional[tuple]
    iterations: int
    certified: bool
    certificate: ContractionCertificate = NO_CERTIFICATE
    warnings: list = field(default_factory=list)
    format_point: Callable = field(default=str, repr=False, compare=False)

    @property
    def mode(self) -> str:
        return "certified" if self.certified else "heuristic"

    def to_text(self) -> str:
        fp = "-" if self.fixed_point is None else self.format_point(self.fixed_point)
        lines = [
            f"trace metric={self.metric} map={self.map} mode={self.mode} "
            f"certificate={self.certificate.kind.value} termination={self.termination.value} "
            f"iterations={self.iterations} fixed_point={fp}"
        ]
        lines += [f"warning {w}" for w in self.warnings]
        for k, p in enumerate(self.points):
            step = self.step_distances[k] if k < len(self.step_distances) else None
            bound = self.bound_values[k] if k < len(self.bound_values) else None
            lines.append(
                f"step index={k} x={self.format_point(p)} "
                f"step={'-' if step is None else fmt_number(step)} "
                f"bound={'-' if bound is None else fmt_number(bound)}"
            )
        return "\n".join(lines) + "\n"


def _finite(p) -> bool:
    return not isinstance(p, tuple) or all(math.isfinite(c) for c in p)


def _coord_step(x, y) -> float:
    if not isinstance(x, tuple):
        return 0.0
    return max(abs(a - c) for a, c in zip(x, y))


def picard(metric: SbMetricSpec, T: SelfMap, x0, cert: ContractionCertificate | None = None,
           eps: float = DEFAULT_EPS, max_iters: int = DEFAULT_MAX_ITERS,
           xtol: float | None = None) -> IterationTrace:
    """Iterate ``x_{n+1} = T(x_n)`` from ``x0``.

    With a valid certificate the run stops once the a priori tail bound at
    index n drops below ``eps``; otherwise once the step distance
    S(xn, xn, xn+1) does (heuristic mode). On real spaces the sup-norm
    coordinate step must also be at most ``xtol`` (default ``eps``), since
    a small S-value need not mean a small coordinate change (for a squared
    metric it is only the square root). An exact repeat x_{n+1} == x_n
    stops immediately. The estimate returned is x_{n+1}.
    """
    if not eps > 0:
        raise InputError("eps must be > 0")
    if max_iters < 1:
        raise InputError("max_iters must be >= 1")
    cert = cert or NO_CERTIFICATE
    xtol = eps if xtol is None else xtol
    s = metric.distance
    x = metric.space.point(x0)
    warns = []

    certified = cert.kind is not CertKind.NONE and cert.valid and cert.tail_ok
    if cert.kind is not CertKind.NONE and not cert.valid:
        warns.append(f"{cert.kind.value} certificate is invalid; stopping rule is heuristic")
    elif cert.kind is not CertKind.NONE and not cert.tail_ok:
        warns.append(
            f"{cert.kind.value} certificate holds but its rate {fmt_number(cert.rate)} gives no usable "
            f"tail bound at b={fmt_number(cert.b)}; stopping rule is heuristic"
        )
    elif cert.kind is CertKind.NONE:
        warns.append("no certificate; stopping on step distance is heuristic")
    for w in warns:
        log.warning(w)

    points = [x]
    steps: list = []
    bounds: list = []
    s0 = None
    termination = Termination.MAX_ITERS
    fixed = None
    for n in range(max_iters):
        nxt = T(x)
        points.append(nxt)
        if not _finite(nxt):
            termination = Termination.DIVERGED_BOUND
            break
        step = s(x, x, nxt)
        steps.append(step)
        if not math.isfinite(step):
            termination = Termination.DIVERGED_BOUND
            break
        if s0 is None:
            s0 = step
        if certified:
            bound = cert.tail_bound(n, s0)
            bounds.append(bound)
            if step > bound * (1 + 1e-9) + 1e-12 and not any("exceeds" in w for w in warns):
                warns.append(f"step {n} distance exceeds the a priori bound; certificate contradicted")
                log.warning(warns[-1])
            primary = bound < eps
        else:
            primary = step < eps
        if nxt == x or (primary and _coord_step(x, nxt) <= xtol):
            termination = Termination.CONVERGED
            fixed = nxt
            break
        x = nxt

    return IterationTrace(
        metric.name, T.name, points, steps, bounds, termination, fixed,
        len(points) - 1, certified, cert, warns, metric.space.format_point,
    )


def verify_fixed_point(metric: SbMetricSpec, T: SelfMap, x, tol: float = 0.0) -> bool:
    x = metric.space.point(x)
    tx = T(x)
    return metric.distance(tx, tx, x) <= tol


# ---------------------------------------------------------------------------
# built-in maps


def _coordwise(f: Callable[[float], float]) -> Callable:
    return lambda x: tuple(f(c) for c in x)


def scale_map(c) -> SelfMap:
    c = Fraction(c)
    p, q = float(c.numerator), float(c.denominator)
    return SelfMap(f"scale:{c}", _coordwise(lambda v: v * p / q))


def affine_map(c, d) -> SelfMap:
    c, d = Fraction(c), Fraction(d)
    p, q, dd = float(c.numerator), float(c.denominator), float(d)
    return SelfMap(f"affine:{c}:{d}", _coordwise(lambda v: v * p / q + dd))


def constant_map(c) -> SelfMap:
    c = float(Fraction(c))
    return SelfMap(f"const:{fmt_number(c)}", _coordwise(lambda v: c))


def identity_map() -> SelfMap:
    return SelfMap("identity", lambda x: x)


def ex3_2_map() -> SelfMap:
    """x + 50 when |x - 1| = 1, otherwise 45."""
    def t(x):
        v = x[0]
        return (v + 50.0,) if abs(v - 1.0) == 1.0 else (45.0,)

    return SelfMap("ex3_2", t)


def parse_map(spec: str) -> SelfMap:
    """``scale:<c>``, ``affine:<c>:<d>``, ``const:<c>``, ``identity`` or ``ex3_2``.

    Numbers may be written as rationals such as ``1/6``.
    """
    head, *args = spec.split(":")
    try:
        if head == "scale" and len(args) == 1:
            return scale_map(args[0])
        if head == "affine" and len(args) == 2:
            return affine_map(*args)
        if head == "const" and len(args) == 1:
            return constant_map(args[0])
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad number in map {spec!r}") from None
    if head == "identity" and not args:
        return identity_map()
    if head == "ex3_2" and not args:
        return ex3_2_map()
    raise UnknownNameError(f"unknown map {spec!r}")
