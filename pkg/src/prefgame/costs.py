"""Exact cost functionals for discrete and anchored preference games."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import AnchoredInstance, Instance, IndexOutOfRange, NotStrategic, check_vector


@dataclass(frozen=True)
class CostBreakdown:
    preference_term: Fraction
    neighbor_term: Fraction

    @property
    def total(self) -> Fraction:
        return self.preference_term + self.neighbor_term


def _node(inst: Instance, i: int) -> int:
    if not 0 <= i < inst.n:
        raise IndexOutOfRange(f"node {i} outside 0..{inst.n - 1}")
    return i


def player_cost(inst: Instance, z: Sequence[int], i: int) -> CostBreakdown:
    """Cost of player ``i`` under strategy vector ``z``, split into its two terms."""
    z = check_vector(inst, z)
    i = _node(inst, i)
    return _breakdown(inst, z, i, z[i])


def _breakdown(inst: Instance, z, i: int, s: int) -> CostBreakdown:
    d = inst.metric.dist
    row = d[s]
    pref = inst.alpha * row[inst.preferred[i]]
    nbr = (1 - inst.alpha) * sum((row[z[j]] for j in inst.graph.neighbors[i]), Fraction(0))
    return CostBreakdown(pref, nbr)


def deviation_cost(inst: Instance, z: Sequence[int], i: int, s: int) -> Fraction:
    """Cost of player ``i`` if it switched to ``s`` while everyone else keeps ``z``."""
    return _breakdown(inst, z, i, s).total


def social_cost(inst: Instance, z: Sequence[int]) -> Fraction:
    z = check_vector(inst, z)
    d = inst.metric.dist
    pref = sum((d[s][z[i]] for i, s in enumerate(inst.preferred)), Fraction(0))
    cut = sum((d[z[u]][z[v]] for u, v in inst.graph.edges), Fraction(0))
    return inst.alpha * pref + 2 * (1 - inst.alpha) * cut


def contribution(inst: Instance, z: Sequence[int], i: int) -> Fraction:
    """The part of the social cost that player ``i``'s choice controls.

    Changing only ``z[i]`` changes :func:`social_cost` by exactly the change
    in this quantity.
    """
    z = check_vector(inst, z)
    i = _node(inst, i)
    return deviation_contribution(inst, z, i, z[i])


def deviation_contribution(inst: Instance, z: Sequence[int], i: int, s: int) -> Fraction:
    row = inst.metric.dist[s]
    nbr = sum((row[z[j]] for j in inst.graph.neighbors[i]), Fraction(0))
    return inst.alpha * row[inst.preferred[i]] + 2 * (1 - inst.alpha) * nbr


def potential(inst: Instance, z: Sequence[int]) -> Fraction:
    """Exact potential: unilateral cost changes equal potential changes."""
    z = check_vector(inst, z)
    d = inst.metric.dist
    pref = sum((d[z[i]][s] for i, s in enumerate(inst.preferred)), Fraction(0))
    cut = sum((d[z[u]][z[v]] for u, v in inst.graph.edges), Fraction(0))
    return inst.alpha * pref + (1 - inst.alpha) * cut


# Anchored games. Vectors are indexed by strategic position, ``i`` below is a
# strategic *node* id.


def _played(inst: AnchoredInstance, z, node: int) -> int:
    if node in inst.fixed:
        return inst.fixed[node]
    return z[inst.position(node)]


def anchored_deviation_cost(
    inst: AnchoredInstance, z: Sequence[int], i: int, s: int, neighbor_weight: int = 1
) -> Fraction:
    row = inst.metric.dist[s]
    fixed = sum((row[inst.fixed[j]] for j in inst.fixed_neighbors(i)), Fraction(0))
    strat = sum((row[z[inst.position(j)]] for j in inst.strategic_neighbors(i)), Fraction(0))
    return fixed + neighbor_weight * strat


def anchored_player_cost(inst: AnchoredInstance, z: Sequence[int], i: int) -> Fraction:
    """Cost of strategic node ``i``: distance to every neighbor's strategy."""
    z = check_vector(inst, z)
    if i in inst.fixed:
        raise NotStrategic(f"node {i} is fixed")
    return anchored_deviation_cost(inst, z, i, z[inst.position(i)])


def anchored_contribution(inst: AnchoredInstance, z: Sequence[int], i: int) -> Fraction:
    z = check_vector(inst, z)
    if i in inst.fixed:
        raise NotStrategic(f"node {i} is fixed")
    return anchored_deviation_cost(inst, z, i, z[inst.position(i)], neighbor_weight=2)


def _anchored_terms(inst: AnchoredInstance, z) -> tuple[Fraction, Fraction]:
    d = inst.metric.dist
    anchor = Fraction(0)
    mutual = Fraction(0)
    for u, v in inst.graph.edges:
        fu, fv = u in inst.fixed, v in inst.fixed
        if fu and fv:
            continue
        dist = d[_played(inst, z, u)][_played(inst, z, v)]
        if fu or fv:
            anchor += dist
        else:
            mutual += dist
    return anchor, mutual


def anchored_social_cost(inst: AnchoredInstance, z: Sequence[int]) -> Fraction:
    z = check_vector(inst, z)
    anchor, mutual = _anchored_terms(inst, z)
    return anchor + 2 * mutual


def anchored_potential(inst: AnchoredInstance, z: Sequence[int]) -> Fraction:
    z = check_vector(inst, z)
    anchor, mutual = _anchored_terms(inst, z)
    return anchor + mutual


# Dispatch helpers used by the dynamics and optimization layers.


def cost_if(inst, z, player: int, s: int) -> Fraction:
    """Player cost if ``player`` (a vector position) plays ``s`` against ``z``."""
    if isinstance(inst, AnchoredInstance):
        return anchored_deviation_cost(inst, z, inst.strategic[player], s)
    return _breakdown(inst, z, player, s).total


def contribution_if(inst, z, player: int, s: int) -> Fraction:
    if isinstance(inst, AnchoredInstance):
        return anchored_deviation_cost(inst, z, inst.strategic[player], s, neighbor_weight=2)
    return deviation_contribution(inst, z, player, s)


def total_cost(inst, z) -> Fraction:
    if isinstance(inst, AnchoredInstance):
        return anchored_social_cost(inst, z)
    return social_cost(inst, z)


def total_potential(inst, z) -> Fraction:
    if isinstance(inst, AnchoredInstance):
        return anchored_potential(inst, z)
    return potential(inst, z)
