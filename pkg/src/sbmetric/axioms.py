"""Sampling-based falsification of generalized-metric axioms.

A clause is checked over the probe, grid and random tuples of a
``SamplerConfig``. PASS_SAMPLED only means no sampled tuple violated the
clause; FAIL always comes with witnesses that can be re-evaluated.
"""

from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DegenerateError, InputError
from .metrics import BMetricSpec, SbMetricSpec
from .sampling import SamplerConfig, TupleStream
from .spaces import fmt_number


class AxiomFamily(enum.Enum):
    B_METRIC = "B_METRIC"
    G_METRIC = "G_METRIC"
    GB_METRIC = "GB_METRIC"
    S_METRIC = "S_METRIC"
    SB_METRIC = "SB_METRIC"
    SYMMETRY = "SYMMETRY"
    QUASI_SYMMETRY = "QUASI_SYMMETRY"


class Verdict(enum.Enum):
    PASS_SAMPLED = "PASS_SAMPLED"
    FAIL = "FAIL"


# lhs REL rhs is what the clause requires
LE, EQ, LT = "<=", "==", "<"
_REL_NAMES = {LE: "le", EQ: "eq", LT: "lt"}

# evaluator result: (lhs, rhs, base) where base is the right-hand sum
# before the coefficient is applied (None for non-triangle clauses);
# None means the tuple is outside the clause's quantifier
Evaluation = Optional[tuple]


@dataclass(frozen=True)
class Clause:
    name: str
    statement: str
    arity: int
    relation: str
    evaluate: Callable[[tuple], Evaluation] = field(repr=False, compare=False)
    auxiliary: bool = False


@dataclass(frozen=True)
class AxiomSchema:
    family: AxiomFamily
    clauses: tuple


@dataclass(frozen=True)
class Counterexample:
    clause: str
    points: tuple
    lhs: float
    rhs: float
    relation: str
    violation: float
    text: str

    def violates(self, slack: float) -> bool:
        return violated(self.relation, self.lhs, self.rhs, slack)


@dataclass
class ClauseResult:
    name: str
    statement: str
    verdict: Verdict
    checked: int
    failures: int
    counterexamples: list


@dataclass
class AxiomReport:
    schema: str
    metric: str
    b: Optional[float]
    seed: int
    slack: float
    clauses: list
    samples_evaluated: int
    grid_exhaustive: bool
    empirical_b_lower: Optional[float] = None
    empirical_witness: Optional[str] = None

    @property
    def verdict(self) -> Verdict:
        if any(c.verdict is Verdict.FAIL for c in self.clauses):
            return Verdict.FAIL
        return Verdict.PASS_SAMPLED

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS_SAMPLED

    @property
    def counterexamples(self) -> list:
        return [cx for c in self.clauses for cx in c.counterexamples]

    def clause(self, name: str) -> ClauseResult:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_text(self) -> str:
        head = [
            "report",
            f"schema={self.schema}",
            f"metric={self.metric}",
            f"b={'-' if self.b is None else fmt_number(self.b)}",
            f"seed={self.seed}",
            f"slack={fmt_number(self.slack)}",
            f"samples={self.samples_evaluated}",
            f"grid_exhaustive={str(self.grid_exhaustive).lower()}",
            f"verdict={self.verdict.value}",
        ]
        if self.empirical_b_lower is not None:
            head.append(f"empirical_b_lower={fmt_number(self.empirical_b_lower)}")
            head.append(f"empirical_witness={self.empirical_witness}")
        lines = [" ".join(head)]
        for c in self.clauses:
            lines.append(
                f"clause name={c.name} verdict={c.verdict.value} checked={c.checked} "
                f"failures={c.failures} statement={c.statement!r}"
            )
            for cx in c.counterexamples:
                lines.append(
                    f"counterexample clause={cx.clause} tuple={cx.text} lhs={fmt_number(cx.lhs)} "
                    f"rel={_REL_NAMES[cx.relation]} rhs={fmt_number(cx.rhs)} violation={fmt_number(cx.violation)}"
                )
        return "\n".join(lines) + "\n"


def violation_of(relation: str, lhs: float, rhs: float) -> float:
    if relation == EQ:
        return abs(lhs - rhs)
    return lhs - rhs


def violated(relation: str, lhs: float, rhs: float, slack: float) -> bool:
    if relation == LE:
        return lhs > rhs + slack
    if relation == EQ:
        return abs(lhs - rhs) > slack
    # strict positivity: no tolerance, any positive value counts
    return not lhs < rhs


# ---------------------------------------------------------------------------
# schemas


def b_metric_schema(d: Callable, b: float) -> AxiomSchema:
    clauses = (
        Clause("b1(zero)", "d(x,x) = 0", 1, EQ, lambda t: (d(t[0], t[0]), 0.0, None)),
        Clause("b1(positive)", "x != y => 0 < d(x,y)", 2, LT,
               lambda t: None if t[0] == t[1] else (0.0, d(t[0], t[1]), None)),
        Clause("b2", "d(x,y) = d(y,x)", 2, EQ, lambda t: (d(t[0], t[1]), d(t[1], t[0]), None)),
        Clause("b3", "d(x,z) <= b[d(x,y) + d(y,z)]", 3, LE, _b3(d, b)),
    )
    return AxiomSchema(AxiomFamily.B_METRIC, clauses)


def _b3(d, b):
    def ev(t):
        x, y, z = t
        base = d(x, y) + d(y, z)
        return d(x, z), b * base, base
    return ev


def g_metric_schema(g: Callable, b: float = 1.0, family: AxiomFamily = AxiomFamily.G_METRIC) -> AxiomSchema:
    tag = "G" if family is AxiomFamily.G_METRIC else "Gb"
    coef = "" if family is AxiomFamily.G_METRIC else "b"

    def g4(t):
        x, y, z = t
        v = g(x, y, z)
        others = [g(*p) for p in itertools.permutations(t) if p != t]
        if not others:
            return None
        worst = max(others, key=lambda w: abs(w - v))
        return v, worst, None

    def g5(t):
        x, y, z, a = t
        base = g(x, a, a) + g(a, y, z)
        return g(x, y, z), b * base, base

    clauses = (
        Clause(f"{tag}1", "G(x,x,x) = 0", 1, EQ, lambda t: (g(t[0], t[0], t[0]), 0.0, None)),
        Clause(f"{tag}2", "x != y => 0 < G(x,x,y)", 2, LT,
               lambda t: None if t[0] == t[1] else (0.0, g(t[0], t[0], t[1]), None)),
        Clause(f"{tag}3", "y != z => G(x,x,y) <= G(x,y,z)", 3, LE,
               lambda t: None if t[1] == t[2] else (g(t[0], t[0], t[1]), g(*t), None)),
        Clause(f"{tag}4", "G is invariant under permutation of its arguments", 3, EQ, g4),
        Clause(f"{tag}5", f"G(x,y,z) <= {coef}[G(x,a,a) + G(a,y,z)]", 4, LE,
               g5, auxiliary=True),
    )
    return AxiomSchema(family, clauses)


def s_metric_schema(s: Callable, b: float = 1.0, family: AxiomFamily = AxiomFamily.S_METRIC) -> AxiomSchema:
    tag = "S" if family is AxiomFamily.S_METRIC else "Sb"
    coef = "" if family is AxiomFamily.S_METRIC else "b"

    def s2(t):
        x, y, z, a = t
        base = s(x, x, a) + s(y, y, a) + s(z, z, a)
        return s(x, y, z), b * base, base

    clauses = (
        Clause(f"{tag}1(zero)", "S(x,x,x) = 0", 1, EQ, lambda t: (s(t[0], t[0], t[0]), 0.0, None)),
        Clause(f"{tag}1(positive)", "not x = y = z => 0 < S(x,y,z)", 3, LT,
               lambda t: None if t[0] == t[1] == t[2] else (0.0, s(*t), None)),
        Clause(f"{tag}2", f"S(x,y,z) <= {coef}[S(x,x,a) + S(y,y,a) + S(z,z,a)]", 4, LE, s2,
               auxiliary=True),
    )
    return AxiomSchema(family, clauses)


def symmetry_schema(s: Callable) -> AxiomSchema:
    return AxiomSchema(AxiomFamily.SYMMETRY, (
        Clause("symmetry", "S(x,x,y) = S(y,y,x)", 2, EQ,
               lambda t: (s(t[0], t[0], t[1]), s(t[1], t[1], t[0]), None)),
    ))


def quasi_symmetry_schema(s: Callable, b: float) -> AxiomSchema:
    def fwd(t):
        x, y = t
        base = s(y, y, x)
        return s(x, x, y), b * base, base

    def back(t):
        x, y = t
        base = s(x, x, y)
        return s(y, y, x), b * base, base

    return AxiomSchema(AxiomFamily.QUASI_SYMMETRY, (
        Clause("quasi(xy)", "S(x,x,y) <= b S(y,y,x)", 2, LE, fwd),
        Clause("quasi(yx)", "S(y,y,x) <= b S(x,x,y)", 2, LE, back),
    ))


def schema_for(family: AxiomFamily, metric, b: Optional[float] = None) -> tuple[AxiomSchema, Optional[float]]:
    """Build the schema of ``family`` over ``metric``; returns it with the coefficient used."""
    family = AxiomFamily(family)
    if family is AxiomFamily.B_METRIC:
        if not isinstance(metric, BMetricSpec):
            raise InputError(f"schema {family.value} needs a binary metric, got {metric.name}")
        coef = metric.b if b is None else b
        return b_metric_schema(_cached(metric.distance), coef), coef
    if not isinstance(metric, SbMetricSpec):
        raise InputError(f"schema {family.value} needs a ternary metric, got {metric.name}")
    fn = _cached(metric.distance)
    if family is AxiomFamily.G_METRIC:
        return g_metric_schema(fn), 1.0
    if family is AxiomFamily.GB_METRIC:
        coef = metric.b if b is None else b
        return g_metric_schema(fn, coef, family), coef
    if family is AxiomFamily.S_METRIC:
        return s_metric_schema(fn), 1.0
    if family is AxiomFamily.SB_METRIC:
        coef = metric.b if b is None else b
        return s_metric_schema(fn, coef, family), coef
    if family is AxiomFamily.SYMMETRY:
        return symmetry_schema(fn), None
    coef = metric.b if b is None else b
    return quasi_symmetry_schema(fn, coef), coef


def _cached(fn: Callable) -> Callable:
    memo: dict = {}

    def wrapped(*args):
        try:
            return memo[args]
        except KeyError:
            v = memo[args] = fn(*args)
            return v

    return wrapped


# ---------------------------------------------------------------------------
# running a schema


class _Collector:
    """Keeps the worst ``cap`` violations plus every violating probe."""

    def __init__(self, cap: int):
        self.cap = cap
        self.heap: list = []
        self.pinned: list = []
        self.count = 0
        self.seq = 0

    def add(self, violation: float, item, pinned: bool):
        self.count += 1
        self.seq += 1
        entry = (violation, -self.seq, item)
        if pinned:
            self.pinned.append(entry)
        elif len(self.heap) < self.cap:
            heapq.heappush(self.heap, entry)
        elif entry > self.heap[0]:
            heapq.heapreplace(self.heap, entry)

    def result(self) -> list:
        entries = self.heap + self.pinned
        entries.sort(key=lambda e: (-e[0], -e[1]))
        return [e[2] for e in entries]


def format_tuple(space, t: tuple, auxiliary: bool) -> str:
    parts = [space.format_point(p) for p in t]
    if auxiliary and len(parts) > 1:
        return "(" + ",".join(parts[:-1]) + ";" + parts[-1] + ")"
    return "(" + ",".join(parts) + ")"


def run_schema(schema: AxiomSchema, metric, cfg: SamplerConfig, b: Optional[float] = None) -> AxiomReport:
    space = metric.space
    results = []
    streams: dict = {}
    total = 0
    exhaustive = True
    best_ratio = None
    best_witness = None
    for clause in schema.clauses:
        stream = streams.get(clause.arity)
        if stream is None:
            stream = streams[clause.arity] = TupleStream(space, clause.arity, cfg, metric.probes)
        exhaustive = exhaustive and stream.grid_exhaustive
        collector = _Collector(cfg.max_counterexamples)
        checked = 0
        for t, pinned in stream:
            ev = clause.evaluate(t)
            if ev is None:
                continue
            checked += 1
            lhs, rhs, base = ev
            if base is not None and base > 0:
                ratio = lhs / base
                if best_ratio is None or ratio > best_ratio:
                    best_ratio = ratio
                    best_witness = format_tuple(space, t, clause.auxiliary)
            if violated(clause.relation, lhs, rhs, cfg.slack):
                viol = violation_of(clause.relation, lhs, rhs)
                collector.add(viol, Counterexample(
                    clause.name, t, lhs, rhs, clause.relation, viol,
                    format_tuple(space, t, clause.auxiliary)), pinned)
        total += checked
        found = collector.result()
        results.append(ClauseResult(
            clause.name, clause.statement,
            Verdict.FAIL if found else Verdict.PASS_SAMPLED,
            checked, collector.count, found,
        ))
    return AxiomReport(
        schema.family.value if isinstance(schema.family, AxiomFamily) else str(schema.family),
        metric.name, b, cfg.seed, cfg.slack, results, total, exhaustive,
        best_ratio, best_witness,
    )


def check_axioms(family: AxiomFamily | str, metric, cfg: SamplerConfig | None = None,
                 b: Optional[float] = None) -> AxiomReport:
    """Check every clause of ``family`` for ``metric``.

    ``b`` overrides the metric's own coefficient for the families that carry
    one (B_METRIC, GB_METRIC, SB_METRIC, QUASI_SYMMETRY); G_METRIC and
    S_METRIC always use 1. For families with a triangle-type clause the
    report's ``empirical_b_lower`` is the largest observed ratio of its left
    side to the unscaled right side.
    """
    cfg = cfg or SamplerConfig()
    schema, coef = schema_for(AxiomFamily(family), metric, b)
    return run_schema(schema, metric, cfg, coef)


def check_symmetry(metric: SbMetricSpec, cfg: SamplerConfig | None = None) -> AxiomReport:
    return check_axioms(AxiomFamily.SYMMETRY, metric, cfg)


def check_quasi_symmetry(metric: SbMetricSpec, cfg: SamplerConfig | None = None,
                         b: Optional[float] = None) -> AxiomReport:
    return check_axioms(AxiomFamily.QUASI_SYMMETRY, metric, cfg, b)


def check_not_b_generated(metric: SbMetricSpec, cfg: SamplerConfig | None = None) -> AxiomReport:
    """Test the identity S(x,y,z) = [S(x,x,z) + S(y,y,z)] / 2.

    Any S_b-metric of the form d(x,z) + d(y,z) satisfies it, because then
    S(x,x,z) = 2 d(x,z). A FAIL therefore shows the metric is not generated
    by any b-metric.
    """
    cfg = cfg or SamplerConfig()
    if not isinstance(metric, SbMetricSpec):
        raise InputError("check_not_b_generated needs a ternary metric")
    s = _cached(metric.distance)
    clause = Clause("generated_identity", "S(x,y,z) = [S(x,x,z) + S(y,y,z)] / 2", 3, EQ,
                    lambda t: (s(*t), 0.5 * (s(t[0], t[0], t[2]) + s(t[1], t[1], t[2])), None))
    schema = AxiomSchema("NOT_B_GENERATED", (clause,))
    return run_schema(schema, metric, cfg, None)


def estimate_min_b(metric: SbMetricSpec, cfg: SamplerConfig | None = None) -> float:
    return min_b_witness(metric, cfg)[0]


def min_b_witness(metric: SbMetricSpec, cfg: SamplerConfig | None = None) -> tuple[float, str]:
    """Largest sampled S(x,y,z) / (S(x,x,a) + S(y,y,a) + S(z,z,a)).

    Tuples with x = y = z or a zero denominator are skipped. The value is a
    lower bound on every admissible coefficient, never a certificate.
    """
    cfg = cfg or SamplerConfig()
    s = _cached(metric.distance)
    best = None
    witness = None
    for t, _ in TupleStream(metric.space, 4, cfg, metric.probes):
        x, y, z, a = t
        if x == y == z:
            continue
        den = s(x, x, a) + s(y, y, a) + s(z, z, a)
        if den <= 0:
            continue
        r = s(x, y, z) / den
        if best is None or r > best:
            best, witness = r, t
    if best is None:
        raise DegenerateError(f"every sampled denominator vanished for {metric.name}")
    return best, format_tuple(metric.space, witness, True)
