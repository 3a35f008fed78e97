"""Command-line front end: ``prefgame {gen,analyze,dynamics,sweep}``.

Exit codes: 0 success, 2 usage or validation error, 3 search budget
exceeded, 4 a proven property failed (bug or falsified claim).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from pathlib import Path

from . import constructions as cons
from .core import GameError, TheoremViolation, check_vector
from .dynamics import (
    SearchTooLarge,
    is_equilibrium,
    potential_descent,
    two_phase_schedule,
)
from .optimize import (
    DEFAULT_BUDGET,
    OutOfRange,
    analyze,
    lower_bound_curve,
    potential_min_optimum,
    pos_upper_bound_two,
    single_deviation_bound,
)
from .serialization import (
    dumps,
    instance_to_dict,
    load_instance,
    parse_rational,
    rational_str,
    report_to_dict,
    trace_to_list,
)

EXIT_USAGE, EXIT_BUDGET, EXIT_THEOREM = 2, 3, 4
CURVES = ("pos_upper_two", "path_lower", "single_dev_lower")
_DECIMAL = Context(prec=12, rounding=ROUND_HALF_EVEN)
HALF = Fraction(1, 2)


def decimal_str(x: Fraction) -> str:
    return str(_DECIMAL.divide(Decimal(x.numerator), Decimal(x.denominator)))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise GameError(f"construction {args.construction!r} needs --{name.replace('_', '-')}")
    return value


def cmd_gen(args) -> int:
    cid = args.construction
    if cid == "poa_clique":
        built = cons.gen_poa_clique(_need(args, "alpha")).instance
    elif cid == "fig1_ring":
        built = cons.gen_fig1_ring().instance
    elif cid == "two_strategy_star":
        built = cons.gen_two_strategy_star(_need(args, "alpha")).instance
    elif cid == "cycle_metric_gadget":
        built = cons.gen_cycle_gadget(_need(args, "k"), args.clique_size).instance
    elif cid in ("path_cliques_half", "path_cliques_sub_half"):
        alpha = HALF if cid == "path_cliques_half" else _need(args, "alpha")
        if cid == "path_cliques_sub_half" and not alpha < HALF:
            raise OutOfRange("path_cliques_sub_half needs alpha < 1/2")
        built = cons.gen_path_cliques(alpha, _need(args, "n"), _need(args, "eps"),
                                      args.clique_size).instance
    elif cid == "anchored_star":
        built = cons.gen_anchored_star(_need(args, "k")).instance
    elif cid == "anchored_from_discrete":
        built = cons.discrete_to_anchored(load_instance(_need(args, "source")))
    elif cid == "random":
        rng = random.Random(args.seed)
        alpha = args.alpha if args.alpha is not None else cons.random_alpha(rng)
        built = cons.random_instance(rng, args.n or 5, args.strategies, alpha, args.metric_kind)
    else:  # argparse restricts choices
        raise GameError(f"unknown construction {cid!r}")
    _emit(dumps(instance_to_dict(built)), args.out)
    return 0


def cmd_analyze(args) -> int:
    inst = load_instance(args.instance)
    report = analyze(inst, budget=args.budget)
    payload = report_to_dict(report)
    if args.out:
        Path(args.out).write_text(dumps(payload))
    for key in ("opt_cost", "best_eq_cost", "worst_eq_cost", "pos", "poa",
                "num_optima", "num_equilibria"):
        value = payload[key]
        if isinstance(value, str) and value != "inf":
            value = parse_rational(value)
        print(f"{key.replace('_cost', '')}: {value}")
    return 0


def _start_vector(inst, start: str, budget: int):
    if start == "preferred":
        if not hasattr(inst, "preferred"):
            raise GameError("anchored instances have no preferred vector; pass one explicitly")
        return inst.preferred
    if start == "optimum":
        return potential_min_optimum(inst, budget)
    return check_vector(inst, [int(x) for x in start.replace(" ", "").split(",") if x != ""])


def cmd_dynamics(args) -> int:
    inst = load_instance(args.instance)
    z0 = _start_vector(inst, args.start, args.budget)
    if args.schedule == "two-phase":
        trace = two_phase_schedule(inst, z0)
    else:
        trace = potential_descent(inst, z0, picker=args.schedule)
    stable, _ = is_equilibrium(inst, trace.end)
    payload = {
        "schedule": args.schedule,
        "start": list(trace.start),
        "end": list(trace.end),
        "equilibrium": stable,
        "moves": trace_to_list(trace),
    }
    _emit(dumps(payload), args.out)
    return 0


@dataclass(frozen=True)
class SweepSpec:
    alphas: tuple[Fraction, ...]
    curves: tuple[str, ...] = CURVES
    eps: Fraction = Fraction(1, 1000)
    out: str | None = None

    def __post_init__(self):
        for a in self.alphas:
            if not 0 <= a <= 1:
                raise OutOfRange(f"alpha = {a} outside [0, 1]")
        for c in self.curves:
            if c not in CURVES:
                raise GameError(f"unknown curve {c!r}")

    @classmethod
    def from_range(cls, start, end, step, **kw) -> SweepSpec:
        if step <= 0:
            raise OutOfRange("step must be positive")
        alphas, a = [], start
        while a <= end:
            alphas.append(a)
            a += step
        return cls(tuple(alphas), **kw)


def curve_value(curve: str, alpha: Fraction, eps: Fraction) -> Fraction | None:
    """Value of ``curve`` at ``alpha``, or ``None`` outside the curve's domain."""
    if curve == "pos_upper_two":
        return pos_upper_bound_two(alpha) if HALF < alpha < 1 else None
    if curve == "path_lower":
        return lower_bound_curve(alpha, eps)[1] if 0 < alpha < HALF else None
    if curve == "single_dev_lower":
        return single_deviation_bound(alpha) if 0 <= alpha <= HALF else None
    raise GameError(f"unknown curve {curve!r}")


def run_sweep(spec: SweepSpec) -> str:
    rows = []
    for alpha in sorted(set(spec.alphas)):
        for curve in spec.curves:
            value = curve_value(curve, alpha, spec.eps)
            if value is not None:
                rows.append((alpha, curve, value))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "alpha_decimal", "value", "curve_id"])
    for alpha, curve, value in rows:
        writer.writerow([rational_str(alpha), decimal_str(alpha), rational_str(value), curve])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    curves = tuple(args.curve) if args.curve else CURVES
    if args.alphas:
        spec = SweepSpec(tuple(parse_rational(a) for a in args.alphas.split(",")),
                         curves, args.eps, args.out)
    else:
        if args.start is None or args.end is None or args.step is None:
            raise GameError("sweep needs --alphas or all of --start/--end/--step")
        spec = SweepSpec.from_range(args.start, args.end, args.step,
                                    curves=curves, eps=args.eps, out=args.out)
    _emit(run_sweep(spec), spec.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    rational = parse_rational
    parser = argparse.ArgumentParser(prog="prefgame", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a generated instance as JSON")
    gen.add_argument("construction", choices=[c.value for c in cons.ConstructionId])
    gen.add_argument("--alpha", type=rational)
    gen.add_argument("--eps", type=rational)
    gen.add_argument("--n", type=int, help="path length or number of random players")
    gen.add_argument("--k", type=int)
    gen.add_argument("--clique-size", type=int)
    gen.add_argument("--source", help="discrete instance file for anchored_from_discrete")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--strategies", type=int, default=3)
    gen.add_argument("--metric-kind", default="mixed",
                     choices=["mixed", "tree", "line", "cycle", "graphic", "uniform"])
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    an = sub.add_parser("analyze", help="exhaustive optimum / equilibrium analysis")
    an.add_argument("instance")
    an.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    an.add_argument("--out", help="write the JSON report here")
    an.set_defaults(func=cmd_analyze)

    dyn = sub.add_parser("dynamics", help="run best-response dynamics")
    dyn.add_argument("instance")
    dyn.add_argument("--start", default="preferred",
                     help='"preferred", "optimum" or a comma-separated vector')
    dyn.add_argument("--schedule", default="first",
                     choices=["two-phase", "first", "best", "coherent"])
    dyn.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    dyn.add_argument("--out")
    dyn.set_defaults(func=cmd_dynamics)

    sw = sub.add_parser("sweep", help="tabulate bound curves over alpha as CSV")
    sw.add_argument("--curve", action="append", choices=CURVES)
    sw.add_argument("--alphas", help="comma-separated list of p/q values")
    sw.add_argument("--start", type=rational)
    sw.add_argument("--end", type=rational)
    sw.add_argument("--step", type=rational)
    sw.add_argument("--eps", type=rational, default=Fraction(1, 1000))
    sw.add_argument("--out")
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        return args.func(args)
    except SearchTooLarge as exc:
        print(f"error: SearchTooLarge: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except TheoremViolation as exc:
        print(f"error: theorem violation: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    except (GameError, ValueError, TypeError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
