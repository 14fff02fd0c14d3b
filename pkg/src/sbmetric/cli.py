"""Command-line interface.

Exit codes: 0 success, 1 for a machine-detectable negative outcome (an
axiom FAIL, an invalid certificate, an estimate above the claimed
coefficient, an iteration that did not converge), 2 for usage or input
errors.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import axioms, fixpoint, linsys, metrics, topology
from .errors import SbMetricError
from .metrics import BMetricSpec, SbMetricSpec
from .sampling import SamplerConfig
from .spaces import fmt_number

SCHEMAS = {
    "b": axioms.AxiomFamily.B_METRIC,
    "g": axioms.AxiomFamily.G_METRIC,
    "gb": axioms.AxiomFamily.GB_METRIC,
    "s": axioms.AxiomFamily.S_METRIC,
    "sb": axioms.AxiomFamily.SB_METRIC,
    "sym": axioms.AxiomFamily.SYMMETRY,
    "quasi": axioms.AxiomFamily.QUASI_SYMMETRY,
}

KINDS = {
    "banach": fixpoint.CertKind.BANACH,
    "banach-sym": fixpoint.CertKind.BANACH_SYMMETRIC,
    "generalized": fixpoint.CertKind.GENERALIZED,
    "generalized-sym": fixpoint.CertKind.GENERALIZED_SYMMETRIC,
}


class UsageError(SbMetricError):
    pass


def rational(text: str) -> Fraction:
    """Parse ``3``, ``0.25``, ``1e-12`` or ``1/18`` exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_point(text: str) -> tuple:
    try:
        return tuple(float(Fraction(c.strip())) for c in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad point {text!r}; use comma-separated coordinates") from None


def parse_set(text: str) -> list:
    items = [t for t in text.split(";") if t.strip()]
    if not items:
        raise UsageError("empty point set")
    return [parse_point(t) for t in items]


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sbmetric",
        description="S_b-metric spaces: axiom checks, balls and distances, certified Picard iteration, "
                    "and a fixed-point linear solver.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", type=Path, help="write the output here instead of stdout")

    metric = argparse.ArgumentParser(add_help=False)
    metric.add_argument("--metric", required=True,
                        help="catalog name such as ex2_1, ex2_2:3, s1:2, or s-from:abs / sb-from:sq / b-from:ex2_1")

    sampling = argparse.ArgumentParser(add_help=False)
    g = sampling.add_argument_group("sampling")
    g.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    g.add_argument("--samples", type=int, default=10_000, help="random tuples per clause (default 10000)")
    g.add_argument("--lo", type=rational, default=Fraction(-10), help="grid lower end (default -10)")
    g.add_argument("--hi", type=rational, default=Fraction(10), help="grid upper end (default 10)")
    g.add_argument("--step", type=rational, default=Fraction(1), help="grid step (default 1)")
    g.add_argument("--slack", type=float, default=1e-9, help="inequality tolerance (default 1e-9)")
    g.add_argument("--max-counterexamples", type=int, default=10)

    cert = argparse.ArgumentParser(add_help=False)
    g = cert.add_argument_group("certificate")
    g.add_argument("--kind", choices=sorted(KINDS), help="certificate kind (default banach with --h, "
                                                         "generalized with --alpha1/--alpha2)")
    g.add_argument("--h", type=rational, help="Banach contraction constant")
    g.add_argument("--alpha1", type=rational)
    g.add_argument("--alpha2", type=rational)
    g.add_argument("--b", type=rational, help="override the metric's coefficient")

    p = sub.add_parser("list-metrics", parents=[out], help="list the built-in metrics")
    p.set_defaults(func=cmd_list_metrics)

    p = sub.add_parser("check", parents=[metric, sampling, out], help="check an axiom schema by sampling")
    p.add_argument("--schema", required=True, choices=sorted(SCHEMAS))
    p.add_argument("--b", type=rational, help="coefficient for the b, gb, sb and quasi schemas")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("symmetry", parents=[metric, sampling, out], help="check S(x,x,y) = S(y,y,x)")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("not-generated", parents=[metric, sampling, out],
                       help="look for evidence that a metric is not of the form d(x,z) + d(y,z)")
    p.set_defaults(func=cmd_not_generated)

    p = sub.add_parser("min-b", parents=[metric, sampling, out],
                       help="sampled lower bound on the admissible coefficient b")
    p.set_defaults(func=cmd_min_b)

    p = sub.add_parser("ball", parents=[metric, out], help="open or closed ball membership")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=rational, required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--closed", action="store_true")
    p.add_argument("--tol", type=float, default=0.0)
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("distance", parents=[metric, out],
                       help="point-to-set (--point, --set) or set-to-set (--set, --to) distance")
    p.add_argument("--point")
    p.add_argument("--set", required=True, help="points separated by ';', coordinates by ','")
    p.add_argument("--to", help="second set for a set-to-set distance")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("diameter", parents=[metric, out], help="diameter of a finite set")
    p.add_argument("--set", required=True)
    p.add_argument("--radius", type=rational, help="also report boundedness by this radius")
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("iterate", parents=[metric, cert, out], help="Picard iteration")
    p.add_argument("--map", required=True, help="scale:<c>, affine:<c>:<d>, const:<c>, identity or ex3_2")
    p.add_argument("--x0", required=True)
    p.add_argument("--eps", type=rational, default=Fraction(fixpoint.DEFAULT_EPS))
    p.add_argument("--max-iters", type=int, default=fixpoint.DEFAULT_MAX_ITERS)
    p.add_argument("--trace", type=Path, help="write the full trace here")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("certify", parents=[metric, cert, sampling, out],
                       help="check a contraction certificate's threshold (and, with --map, its inequality)")
    p.add_argument("--map", help="also test the contraction inequality for this map on samples")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("solve", parents=[out], help="solve x = Ax + b by certified Picard iteration")
    p.add_argument("--matrix", type=Path, required=True)
    p.add_argument("--rhs", type=Path, required=True)
    p.add_argument("--form", choices=["fixed-point", "standard"], default="fixed-point",
                   help="fixed-point: x = Ax + b (default); standard: Ax = b")
    p.add_argument("--eps", type=rational, default=Fraction(fixpoint.DEFAULT_EPS))
    p.add_argument("--max-iters", type=int, default=fixpoint.DEFAULT_MAX_ITERS)
    p.add_argument("--trace", type=Path)
    p.set_defaults(func=cmd_solve)
    return parser


def sampler(args) -> SamplerConfig:
    return SamplerConfig(seed=args.seed, lo=float(args.lo), hi=float(args.hi), step=float(args.step),
                         random_count=args.samples, slack=args.slack,
                         max_counterexamples=args.max_counterexamples)


def ternary(args) -> SbMetricSpec:
    m = metrics.resolve(args.metric)
    if not isinstance(m, SbMetricSpec):
        raise UsageError(f"{args.metric} is a binary metric; this command needs a ternary one")
    return m


# ---------------------------------------------------------------------------
# commands; each returns (exit code, text)


def cmd_list_metrics(args):
    lines = []
    for m in metrics.catalog():
        kind = "ternary" if isinstance(m, SbMetricSpec) else "binary"
        sym = f" symmetric={str(m.symmetric).lower()}" if kind == "ternary" else ""
        lines.append(f"metric name={m.name} kind={kind} b={fmt_number(m.b)}{sym} "
                     f"description={m.description!r}")
    return 0, "\n".join(lines) + "\n"


def cmd_check(args):
    m = metrics.resolve(args.metric)
    family = SCHEMAS[args.schema]
    if (family is axioms.AxiomFamily.B_METRIC) != isinstance(m, BMetricSpec):
        need = "binary" if family is axioms.AxiomFamily.B_METRIC else "ternary"
        raise UsageError(f"schema {args.schema} needs a {need} metric; {args.metric} is not")
    b = None if args.b is None else float(args.b)
    report = axioms.check_axioms(family, m, sampler(args), b)
    return (0 if report.passed else 1), report.to_text()


def cmd_symmetry(args):
    report = axioms.check_symmetry(ternary(args), sampler(args))
    return (0 if report.passed else 1), report.to_text()


def cmd_not_generated(args):
    report = axioms.check_not_b_generated(ternary(args), sampler(args))
    # a FAIL of the identity is the interesting outcome here, reported as exit 1
    return (0 if report.passed else 1), report.to_text()


def cmd_min_b(args):
    m = ternary(args)
    cfg = sampler(args)
    value, witness = axioms.min_b_witness(m, cfg)
    refuted = value > m.b + cfg.slack
    text = (f"min_b metric={m.name} estimate={fmt_number(value)} witness={witness} "
            f"claimed_b={fmt_number(m.b)} claimed_admissible={str(not refuted).lower()}\n")
    return (1 if refuted else 0), text


def cmd_ball(args):
    m = ternary(args)
    test = topology.in_closed_ball if args.closed else topology.in_open_ball
    inside = test(m, parse_point(args.center), float(args.radius), parse_point(args.point), args.tol)
    kind = "closed" if args.closed else "open"
    return 0, (f"ball metric={m.name} kind={kind} center={args.center} radius={args.radius} "
               f"point={args.point} member={str(inside).lower()}\n")


def cmd_distance(args):
    m = ternary(args)
    A = parse_set(args.set)
    if args.to is not None:
        if args.point is not None:
            raise UsageError("give either --point or --to, not both")
        value = topology.set_set_distance(m, A, parse_set(args.to))
        return 0, f"distance metric={m.name} kind=set-set value={fmt_number(value)}\n"
    if args.point is None:
        raise UsageError("distance needs --point or --to")
    value = topology.point_set_distance(m, parse_point(args.point), A)
    return 0, f"distance metric={m.name} kind=point-set value={fmt_number(value)}\n"


def cmd_diameter(args):
    m = ternary(args)
    A = parse_set(args.set)
    value = topology.diameter(m, A)
    text = f"diameter metric={m.name} value={fmt_number(value)}"
    if args.radius is not None:
        text += f" bounded_by={args.radius} bounded={str(topology.is_bounded(m, A, float(args.radius))).lower()}"
    return 0, text + "\n"


def certificate_from(args, m: SbMetricSpec):
    kind = args.kind
    if kind is None:
        if args.h is not None:
            kind = "banach"
        elif args.alpha1 is not None or args.alpha2 is not None:
            kind = "generalized"
        else:
            return None
    kind = KINDS[kind]
    if kind.generalized:
        alpha1 = Fraction(0) if args.alpha1 is None else args.alpha1
        alpha2 = Fraction(0) if args.alpha2 is None else args.alpha2
        return fixpoint.certify(kind, m, alpha1=alpha1, alpha2=alpha2, b=args.b)
    if args.h is None:
        raise UsageError(f"--kind {args.kind} needs --h")
    return fixpoint.certify(kind, m, h=args.h, b=args.b)


def cmd_iterate(args):
    m = ternary(args)
    T = fixpoint.parse_map(args.map)
    cert = certificate_from(args, m)
    trace = fixpoint.picard(m, T, parse_point(args.x0), cert, eps=float(args.eps), max_iters=args.max_iters)
    if args.trace:
        args.trace.write_text(trace.to_text())
    lines = []
    if cert is not None:
        lines.append(cert.to_text())
    lines.append(trace.to_text().splitlines()[0])
    lines += [f"warning {w}" for w in trace.warnings]
    if trace.fixed_point is not None:
        lines.append(f"fixed_point {m.space.format_point(trace.fixed_point)}")
    ok = trace.termination is fixpoint.Termination.CONVERGED and (cert is None or cert.valid)
    return (0 if ok else 1), "\n".join(lines) + "\n"


def cmd_certify(args):
    m = ternary(args)
    cert = certificate_from(args, m)
    if cert is None:
        raise UsageError("certify needs --h or --alpha1/--alpha2")
    lines = [cert.to_text()]
    ok = cert.valid
    if args.map:
        T = fixpoint.parse_map(args.map)
        cfg = sampler(args)
        if cert.kind.generalized:
            res = fixpoint.check_generalized(m, T, cert.alpha1, cert.alpha2, cfg)
            lines.append(f"sampled inequality=generalized holds={str(res.holds).lower()} checked={res.checked} "
                         f"worst_pair={res.worst_pair} worst_slack={fmt_number(res.worst_slack)}")
            ok = ok and res.holds
        else:
            h_est, witness = fixpoint.contraction_witness(m, T, cfg)
            holds = h_est <= cert.h + cfg.slack
            lines.append(f"sampled inequality=banach holds={str(holds).lower()} "
                         f"estimated_h={fmt_number(h_est)} witness={witness}")
            ok = ok and holds
    return (0 if ok else 1), "\n".join(lines) + "\n"


def cmd_solve(args):
    form = linsys.Form.STANDARD if args.form == "standard" else linsys.Form.FIXED_POINT
    system = linsys.read_system(args.matrix, args.rhs, form)
    if form is linsys.Form.STANDARD:
        system = linsys.to_fixed_point_form(system)
    sol = linsys.solve_iterative(system, eps=float(args.eps), max_iters=args.max_iters)
    if args.trace:
        args.trace.write_text(sol.certificate.to_text() + "\n" + sol.trace.to_text())
    for w in sol.trace.warnings:
        print(f"sbmetric: warning: {w}", file=sys.stderr)
    if not sol.converged:
        print(f"sbmetric: solve terminated with {sol.trace.termination.value}", file=sys.stderr)
        return 1, ""
    return 0, linsys.format_vector(sol.x)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = args.func(args)
    except (SbMetricError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"sbmetric: error: {msg}", file=sys.stderr)
        return 2
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
