"""Best responses, equilibrium checks and best-response dynamics.

Every function here accepts either an :class:`~prefgame.core.Instance` or an
:class:`~prefgame.core.AnchoredInstance`; players are strategy-vector
positions (for anchored games, positions of strategic nodes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from .core import GameError, Instance, check_vector
from .costs import cost_if, contribution_if, total_potential


class NotTwoStrategies(GameError, ValueError):
    pass


class SearchTooLarge(GameError, RuntimeError):
    """A brute-force search would exceed its configured budget."""

    def __init__(self, size: int, budget: int, what: str = "search"):
        self.size = size
        self.budget = budget
        super().__init__(f"{what} needs {size} evaluations, budget is {budget}")


class NoConvergence(GameError, RuntimeError):
    pass


@dataclass(frozen=True)
class Move:
    player: int
    from_: int
    to: int
    cost_delta: Fraction

    def __post_init__(self):
        if not self.cost_delta < 0:
            raise ValueError(f"moves must strictly lower the mover's cost (delta {self.cost_delta})")


@dataclass
class Trace:
    start: tuple[int, ...]
    moves: list[Move] = field(default_factory=list)
    phis: list[Fraction] = field(default_factory=list)
    end: tuple[int, ...] | None = None

    def replay(self) -> tuple[int, ...]:
        z = list(self.start)
        for m in self.moves:
            assert z[m.player] == m.from_, f"move {m} does not match state {z}"
            z[m.player] = m.to
        return tuple(z)


def best_responses(inst, z: Sequence[int], i: int) -> frozenset[int]:
    """All strategies minimizing player ``i``'s cost against ``z``."""
    z = check_vector(inst, z)
    costs = [cost_if(inst, z, i, s) for s in range(inst.num_strategies)]
    low = min(costs)
    return frozenset(s for s, c in enumerate(costs) if c == low)


def social_responses(inst, z: Sequence[int], i: int) -> frozenset[int]:
    """All strategies for player ``i`` minimizing its contribution to the social cost."""
    z = check_vector(inst, z)
    costs = [contribution_if(inst, z, i, s) for s in range(inst.num_strategies)]
    low = min(costs)
    return frozenset(s for s, c in enumerate(costs) if c == low)


def improving_move(inst, z: Sequence[int], i: int) -> Move | None:
    """Move of player ``i`` to its lowest-indexed best response, if that strictly helps."""
    current = cost_if(inst, z, i, z[i])
    best_s, best_c = z[i], current
    for s in range(inst.num_strategies):
        c = cost_if(inst, z, i, s)
        if c < best_c:
            best_s, best_c = s, c
    if best_c < current:
        return Move(i, z[i], best_s, best_c - current)
    return None


def is_equilibrium(inst, z: Sequence[int]) -> tuple[bool, Move | None]:
    """Check for a pure Nash equilibrium.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is an
    improving move of the lowest-indexed player that has one.
    """
    z = check_vector(inst, z)
    for i in inst.players():
        move = improving_move(inst, z, i)
        if move is not None:
            return False, move
    return True, None


def _apply(z: list[int], move: Move) -> None:
    z[move.player] = move.to


def two_phase_schedule(inst: Instance, z0: Sequence[int], first: int = 0) -> Trace:
    """Two-strategy best-response order that always ends at an equilibrium.

    Phase one lets players switch *to* strategy ``first`` while some player
    strictly gains by doing so; phase two does the same for the other
    strategy. Players are scanned in ascending index within each phase.
    """
    if inst.num_strategies != 2:
        raise NotTwoStrategies(f"instance has {inst.num_strategies} strategies")
    z = list(check_vector(inst, z0))
    trace = Trace(start=tuple(z))
    for target in (first, 1 - first):
        progress = True
        while progress:
            progress = False
            for i in inst.players():
                if z[i] == target:
                    continue
                delta = cost_if(inst, z, i, target) - cost_if(inst, z, i, z[i])
                if delta < 0:
                    move = Move(i, z[i], target, delta)
                    _apply(z, move)
                    trace.moves.append(move)
                    trace.phis.append(total_potential(inst, z))
                    progress = True
                    break
    trace.end = tuple(z)
    return trace


def flip_social_delta_bounds(alpha: Fraction) -> tuple[Fraction, Fraction]:
    """Upper bounds on the social-cost change of a unique two-strategy best response.

    Returns ``(away, toward)``: the bound for a player leaving its preferred
    strategy, and for a player returning to it. Requires ``0 <= alpha < 1``.
    """
    alpha = Fraction(alpha)
    ratio = alpha / (1 - alpha)
    away = alpha - 2 * (1 - alpha) * math.floor(ratio + 1)
    toward = -alpha + 2 * (1 - alpha) * math.ceil(ratio - 1)
    return away, toward


def _first_improving(inst, z):
    for i in inst.players():
        move = improving_move(inst, z, i)
        if move is not None:
            return move
    return None


def _best_improving(inst, z):
    best = None
    for i in inst.players():
        move = improving_move(inst, z, i)
        if move is not None and (best is None or move.cost_delta < best.cost_delta):
            best = move
    return best


def _coherent_improving(inst, z):
    from .treemed import anchored_coherent_response, coherent_response
    from .core import AnchoredInstance

    for i in inst.players():
        if improving_move(inst, z, i) is None:
            continue
        if isinstance(inst, AnchoredInstance):
            s = anchored_coherent_response(inst, z, inst.strategic[i])
        else:
            s = coherent_response(inst, z, i)
        return Move(i, z[i], s, cost_if(inst, z, i, s) - cost_if(inst, z, i, z[i]))
    return None


PICKERS: dict[str, Callable] = {
    "first": _first_improving,
    "best": _best_improving,
    "coherent": _coherent_improving,
}


def potential_descent(inst, z0: Sequence[int], picker: str | Callable = "first",
                      max_steps: int | None = None) -> Trace:
    """Run improving moves until no player can gain.

    ``picker`` is ``"first"`` (lowest player, lowest best response),
    ``"best"`` (largest cost drop over all players), ``"coherent"`` (lowest
    improving player moves to its shared best/social response; tree metrics
    with ``alpha <= 1/2`` only) or a callable ``(inst, z) -> Move | None``.
    The potential drops strictly with every move, so the loop terminates.
    """
    pick = PICKERS[picker] if isinstance(picker, str) else picker
    z = list(check_vector(inst, z0))
    if max_steps is None:
        max_steps = inst.num_strategies ** inst.num_players
    trace = Trace(start=tuple(z))
    phi = total_potential(inst, z)
    for _ in range(max_steps):
        move = pick(inst, tuple(z))
        if move is None:
            break
        _apply(z, move)
        new_phi = total_potential(inst, z)
        if not new_phi < phi:
            raise AssertionError(f"potential did not drop on {move}: {phi} -> {new_phi}")
        phi = new_phi
        trace.moves.append(move)
        trace.phis.append(phi)
    else:
        if pick(inst, tuple(z)) is not None:
            raise NoConvergence(f"no equilibrium after {max_steps} moves")
    trace.end = tuple(z)
    return trace


def is_strong_equilibrium(inst, z: Sequence[int], max_coalition: int | None = None,
                          budget: int = 2 * 10**6) -> tuple[bool, tuple | None]:
    """Check that no coalition can jointly deviate so every member strictly gains.

    Coalitions are tried by increasing size. The witness is
    ``(coalition, deviation)``, both tuples of equal length.
    """
    z = check_vector(inst, z)
    n, m = inst.num_players, inst.num_strategies
    top = n if max_coalition is None else min(max_coalition, n)
    size = sum(math.comb(n, k) * m**k for k in range(1, top + 1))
    if size > budget:
        raise SearchTooLarge(size, budget, "coalition search")
    current = [cost_if(inst, z, i, z[i]) for i in range(n)]
    for k in range(1, top + 1):
        for coalition in combinations(range(n), k):
            for dev in product(range(m), repeat=k):
                if all(dev[t] == z[p] for t, p in enumerate(coalition)):
                    continue
                w = list(z)
                for t, p in enumerate(coalition):
                    w[p] = dev[t]
                if all(cost_if(inst, w, p, w[p]) < current[p] for p in coalition):
                    return False, (coalition, dev)
    return True, None
