"""Exhaustive optima, equilibrium enumeration, price of stability/anarchy, bound formulas."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import _kernel
from .core import GameError, Instance, TheoremViolation, check_vector
from .costs import cost_if, deviation_contribution, total_cost
from .dynamics import (
    SearchTooLarge,
    Trace,
    improving_move,
    potential_descent,
    two_phase_schedule,
)
from .treemed import NotTreeMetric

DEFAULT_BUDGET = 2 * 10**7
INFINITE = math.inf


class OutOfRange(GameError, ValueError):
    pass


class NotImproving(GameError, ValueError):
    pass


def search_size(inst) -> int:
    return inst.num_strategies ** inst.num_players


def _scan(inst, budget: int, equilibria: bool = True, keep_optima: bool = True):
    size = search_size(inst)
    if size > budget:
        raise SearchTooLarge(size, budget, "strategy-vector enumeration")
    return _kernel.scan(inst, equilibria=equilibria, keep_optima=keep_optima)


def brute_force_optimum(inst, budget: int = DEFAULT_BUDGET) -> tuple[Fraction, list[tuple[int, ...]]]:
    """Minimum social cost and every vector attaining it, in lexicographic order."""
    res = _scan(inst, budget, equilibria=False)
    return res.value(res.opt), [res.vector(k) for k in res.opt_indices]


def potential_min_optimum(inst, budget: int = DEFAULT_BUDGET) -> tuple[int, ...]:
    """Among social optima, the one with least potential (lexicographically first on ties)."""
    res = _scan(inst, budget, equilibria=False, keep_optima=False)
    return res.vector(res.opt_min_potential_index)


@dataclass(frozen=True)
class EquilibriumSummary:
    count: int
    best_cost: Fraction
    best_vector: tuple[int, ...]
    worst_cost: Fraction
    worst_vector: tuple[int, ...]
    costs: Counter  # social cost -> number of pure equilibria with that cost


def _summary(res) -> EquilibriumSummary:
    if res.eq_count == 0:
        raise TheoremViolation("no pure equilibrium found; the potential argument guarantees one")
    return EquilibriumSummary(
        count=res.eq_count,
        best_cost=res.value(res.best_eq),
        best_vector=res.vector(res.best_eq_index),
        worst_cost=res.value(res.worst_eq),
        worst_vector=res.vector(res.worst_eq_index),
        costs=Counter({res.value(k): v for k, v in res.eq_costs.items()}),
    )


def enumerate_equilibria(inst, budget: int = DEFAULT_BUDGET) -> EquilibriumSummary:
    return _summary(_scan(inst, budget, keep_optima=False))


@dataclass(frozen=True)
class AnalysisReport:
    opt_cost: Fraction
    opt_vector: tuple[int, ...]
    best_eq_cost: Fraction
    best_eq_vector: tuple[int, ...]
    worst_eq_cost: Fraction
    worst_eq_vector: tuple[int, ...]
    pos: Fraction
    poa: Fraction | float
    num_optima: int
    num_equilibria: int

    @property
    def poa_infinite(self) -> bool:
        return self.poa == INFINITE


def analyze(inst, budget: int = DEFAULT_BUDGET) -> AnalysisReport:
    """Optimum, best and worst pure equilibria, PoS and PoA in one exhaustive pass.

    Raises :class:`TheoremViolation` if the price of stability exceeds 2.
    """
    res = _scan(inst, budget)
    eq = _summary(res)
    opt = res.value(res.opt)
    if opt > 0:
        pos = eq.best_cost / opt
        poa = eq.worst_cost / opt
    else:
        pos = Fraction(1) if eq.best_cost == 0 else INFINITE
        poa = Fraction(1) if eq.worst_cost == 0 else INFINITE
    report = AnalysisReport(
        opt_cost=opt,
        opt_vector=res.vector(res.opt_min_potential_index),
        best_eq_cost=eq.best_cost,
        best_eq_vector=eq.best_vector,
        worst_eq_cost=eq.worst_cost,
        worst_eq_vector=eq.worst_vector,
        pos=pos,
        poa=poa,
        num_optima=len(res.opt_indices),
        num_equilibria=eq.count,
    )
    if not opt <= report.best_eq_cost <= report.worst_eq_cost:
        raise TheoremViolation(f"inconsistent report {report}")
    if not report.pos <= 2:
        raise TheoremViolation(f"price of stability {report.pos} exceeds 2")
    return report


def pos_upper_bound_two(alpha) -> Fraction:
    """Worst-case PoS of two-strategy games for ``1/2 < alpha < 1``."""
    alpha = Fraction(alpha)
    if not Fraction(1, 2) < alpha < 1:
        raise OutOfRange(f"alpha = {alpha} outside (1/2, 1)")
    return 2 * math.ceil(alpha / (1 - alpha) - 1) * (1 - alpha) / alpha


class OptimumToEquilibrium(NamedTuple):
    equilibrium: tuple[int, ...]
    ratio: Fraction
    trace: Trace


def equilibrium_from_optimum_two(inst: Instance, budget: int = DEFAULT_BUDGET) -> OptimumToEquilibrium:
    """Run the two-phase schedule from the potential-minimal optimum.

    The resulting equilibrium costs at most ``pos_upper_bound_two(alpha)``
    times the optimum when ``alpha > 1/2``, and exactly the optimum when
    ``alpha <= 1/2`` or ``alpha == 2/3``.
    """
    start = potential_min_optimum(inst, budget)
    trace = two_phase_schedule(inst, start)
    opt = total_cost(inst, start)
    eq_cost = total_cost(inst, trace.end)
    ratio = eq_cost / opt if opt else Fraction(1)
    return OptimumToEquilibrium(trace.end, ratio, trace)


def equilibrium_from_optimum_tree(inst, start: Sequence[int] | None = None,
                                  budget: int = DEFAULT_BUDGET) -> Trace:
    """Walk from an optimum to an optimal equilibrium using shared responses.

    Each step moves an improving player to a strategy that is both a best
    response and a social-cost minimizer, so the social cost never changes
    and the potential strictly drops. ``start`` defaults to the
    lexicographically first optimum. Works for discrete games (tree metric,
    ``alpha <= 1/2``) and anchored games (tree metric, ``k <= 2``).
    """
    if inst.metric.tree is None:
        raise NotTreeMetric("equilibrium_from_optimum_tree needs a tree metric")
    if start is None:
        _, optima = brute_force_optimum(inst, budget)
        start = optima[0]
    start = check_vector(inst, start)
    cost = total_cost(inst, start)
    trace = potential_descent(inst, start, picker="coherent")
    z = list(start)
    for move in trace.moves:
        z[move.player] = move.to
        if total_cost(inst, z) != cost:
            raise TheoremViolation(f"social cost changed along coherent descent at {move}")
    return trace


def single_deviation_ratio(inst: Instance, y: Sequence[int], i: int,
                           x_i: int | None = None) -> Fraction:
    """Contribution of ``i`` after deviating to ``x_i``, over its contribution at ``y``.

    ``x_i`` defaults to ``i``'s lowest-indexed best response; it must strictly
    lower ``i``'s cost, otherwise :class:`NotImproving` is raised.
    """
    y = check_vector(inst, y)
    if x_i is None:
        move = improving_move(inst, y, i)
        if move is None:
            raise NotImproving(f"player {i} has no improving move at {y}")
        x_i = move.to
    elif not cost_if(inst, y, i, x_i) < cost_if(inst, y, i, y[i]):
        raise NotImproving(f"strategy {x_i} does not lower player {i}'s cost")
    return deviation_contribution(inst, y, i, x_i) / deviation_contribution(inst, y, i, y[i])


def single_deviation_bound(alpha) -> Fraction:
    """Largest PoS reachable when equilibrium and optimum differ in one player."""
    return 2 / (2 - Fraction(alpha))


def deviation_slack(inst: Instance, y: Sequence[int], i: int, x_i: int) -> Fraction:
    """``d(s_i, x_i) - (d(s_i, y_i) - sum_j d(y_i, y_j))``; positive for improving deviations from an optimum."""
    d = inst.metric.dist
    s = inst.preferred[i]
    spread = sum((d[y[i]][y[j]] for j in inst.graph.neighbors[i]), Fraction(0))
    return d[s][x_i] - (d[s][y[i]] - spread)


def improving_deviations(inst: Instance, y: Sequence[int], i: int) -> list[int]:
    """Every strategy that strictly lowers player ``i``'s cost at ``y``."""
    here = cost_if(inst, y, i, y[i])
    return [s for s in range(inst.num_strategies) if cost_if(inst, y, i, s) < here]


# Path-with-cliques lower-bound family: closed forms.


def path_spacing(alpha, eps) -> Fraction:
    """Per-step distance increment of the path-with-cliques metric for ``alpha < 1/2``."""
    alpha, eps = Fraction(alpha), Fraction(eps)
    return (1 - 2 * alpha) / (1 - alpha) * (1 + eps)


def path_equilibrium_cost(alpha, n: int) -> Fraction:
    """Social cost of everyone playing their preferred strategy."""
    alpha = Fraction(alpha)
    return 2 * (1 - alpha) * (n + 1)


def path_bi_consensus_exact(alpha, n: int, eps) -> Fraction:
    """Exact cost of the bi-consensus split after path node ``floor(n/2)``."""
    alpha = Fraction(alpha)
    g = path_spacing(alpha, eps)
    half = n // 2
    pref = sum((1 + (i - 1) * g for i in range(1, half + 1)), Fraction(0))
    pref += sum((1 + (n - i) * g for i in range(half + 1, n + 1)), Fraction(0))
    return alpha * pref + 2 * (1 - alpha) * (1 + n * g)


def path_bi_consensus_bound(alpha, n: int, eps) -> Fraction:
    """Closed-form upper bound on :func:`path_bi_consensus_exact` used for the curve."""
    alpha, eps = Fraction(alpha), Fraction(eps)
    g = path_spacing(alpha, eps)
    return (alpha * n + alpha * Fraction((n - 1) ** 2, 4) * g + 2 * (1 - alpha)
            + 2 * n * (1 - 2 * alpha) * (1 + eps))


def path_lower_ratio(alpha, n: int, eps) -> Fraction:
    return path_equilibrium_cost(alpha, n) / path_bi_consensus_bound(alpha, n, eps)


def _optimal_n_bracket(alpha: Fraction) -> tuple[int, int]:
    # n* = 2*sqrt((q-2p)(2q-3p))/(q-2p) - 1 for alpha = p/q; bracket sqrt by isqrt.
    p, q = alpha.numerator, alpha.denominator
    gap = q - 2 * p
    root = math.isqrt(gap * (2 * q - 3 * p))
    low = (2 * root) // gap - 1
    high = -((-2 * (root + 1)) // gap) - 1
    return low, high


def lower_bound_curve(alpha, eps, window: int = 3) -> tuple[int, Fraction]:
    """Best path length ``n`` and PoS lower bound of the path-with-cliques family.

    The real maximizer is bracketed exactly, then every integer within
    ``window`` of the bracket is evaluated as an exact ratio; ties go to the
    smaller ``n``.
    """
    alpha, eps = Fraction(alpha), Fraction(eps)
    if not 0 < alpha < Fraction(1, 2):
        raise OutOfRange(f"alpha = {alpha} outside (0, 1/2)")
    if eps <= 0:
        raise OutOfRange("eps must be positive")
    low, high = _optimal_n_bracket(alpha)
    best_n, best = None, None
    for n in range(max(1, low - window), max(1, high + window) + 1):
        r = path_lower_ratio(alpha, n, eps)
        if best is None or r > best:
            best_n, best = n, r
    return best_n, best


def anchored_pos_bound(k: int) -> Fraction:
    """PoS bound for anchored games on tree metrics with at most ``k`` fixed neighbors."""
    if k < 0:
        raise OutOfRange("k must be non-negative")
    if k <= 2:
        return Fraction(1)
    return Fraction(2 * (k - 1), k)


__all__ = [
    "AnalysisReport",
    "DEFAULT_BUDGET",
    "EquilibriumSummary",
    "INFINITE",
    "NotImproving",
    "OptimumToEquilibrium",
    "OutOfRange",
    "analyze",
    "anchored_pos_bound",
    "brute_force_optimum",
    "deviation_slack",
    "enumerate_equilibria",
    "equilibrium_from_optimum_tree",
    "equilibrium_from_optimum_two",
    "improving_deviations",
    "lower_bound_curve",
    "path_bi_consensus_bound",
    "path_bi_consensus_exact",
    "path_equilibrium_cost",
    "path_lower_ratio",
    "pos_upper_bound_two",
    "potential_min_optimum",
    "single_deviation_bound",
    "single_deviation_ratio",
]
