"""Medians and separators of node-weighted trees, and their use as best responses.

On a tree metric, a player's best responses are exactly the medians of a
weighted copy of the strategy tree (its preferred strategy weighted by the
preference coefficient, each neighbor's strategy by the coordination
coefficient). The social-cost minimizers are the medians of the same tree
with the coordination weight doubled. For ``alpha <= 1/2`` the two median
sets always intersect, which is what :func:`coherent_response` relies on.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import (
    AnchoredInstance,
    GameError,
    Instance,
    NotStrategic,
    TheoremViolation,
    check_vector,
)


class NotTreeMetric(GameError, ValueError):
    pass


class ZeroTotalWeight(GameError, ValueError):
    pass


class WrongFixedDegree(GameError, ValueError):
    pass


class EmptyIntersection(TheoremViolation):
    """Best responses and social responses failed to intersect.

    Never raised for valid inputs; seeing it means a bug or a falsified claim.
    """


@dataclass(frozen=True)
class WeightedTree:
    """A tree on nodes ``0..size-1`` with non-negative integer node weights."""

    size: int
    edges: tuple[tuple[int, int, Fraction], ...]
    weights: tuple[int, ...]
    _adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        weights = tuple(int(w) for w in self.weights)
        if len(weights) != self.size:
            raise ValueError(f"{len(weights)} weights for {self.size} nodes")
        if any(w < 0 for w in weights):
            raise ValueError("tree weights must be non-negative integers")
        if len(self.edges) != self.size - 1:
            raise ValueError("a tree on m nodes has m-1 edges")
        adj = [[] for _ in range(self.size)]
        for u, v, length in self.edges:
            adj[u].append((v, Fraction(length)))
            adj[v].append((u, Fraction(length)))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "_adj", tuple(tuple(a) for a in adj))
        if self.size and len(self._reach(0, None)) != self.size:
            raise ValueError("tree edges must connect every node")

    @classmethod
    def unit(cls, size: int, edges, weights) -> WeightedTree:
        """Tree with unit edge lengths from plain ``(u, v)`` pairs."""
        return cls(size, tuple((u, v, Fraction(1)) for u, v in edges), tuple(weights))

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def with_weights(self, weights) -> WeightedTree:
        return WeightedTree(self.size, self.edges, tuple(weights))

    def _reach(self, start: int, banned: int | None) -> list[int]:
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y, _ in self._adj[x]:
                if y != banned and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return list(seen)

    def distances_from(self, source: int) -> list[Fraction]:
        dist: list[Fraction | None] = [None] * self.size
        dist[source] = Fraction(0)
        stack = [source]
        while stack:
            x = stack.pop()
            for y, length in self._adj[x]:
                if dist[y] is None:
                    dist[y] = dist[x] + length
                    stack.append(y)
        return dist  # type: ignore[return-value]

    def score(self, u: int) -> Fraction:
        """Weighted distance sum from ``u`` to every node."""
        return sum((w * d for w, d in zip(self.weights, self.distances_from(u))), Fraction(0))

    def component_weights(self, v: int) -> list[int]:
        """Weights of the connected components left after deleting ``v``."""
        out = []
        for y, _ in self._adj[v]:
            out.append(sum(self.weights[x] for x in self._reach(y, v)))
        return out


def union(t1: WeightedTree, t2: WeightedTree) -> WeightedTree:
    """Same tree, node weights summed."""
    if (t1.size, t1.edges) != (t2.size, t2.edges):
        raise ValueError("trees must share nodes and edges")
    return t1.with_weights(a + b for a, b in zip(t1.weights, t2.weights))


def medians(t: WeightedTree, allow_zero: bool = False) -> frozenset[int]:
    """Nodes minimizing the weighted distance sum.

    With zero total weight every node ties; that raises
    :class:`ZeroTotalWeight` unless ``allow_zero`` is set, in which case the
    full node set is returned.
    """
    if t.total_weight == 0:
        if allow_zero:
            return frozenset(range(t.size))
        raise ZeroTotalWeight("all nodes are medians of a zero-weight tree")
    scores = [t.score(u) for u in range(t.size)]
    low = min(scores)
    return frozenset(u for u, s in enumerate(scores) if s == low)


def separators(t: WeightedTree) -> frozenset[int]:
    """Nodes whose removal leaves no component heavier than half the total."""
    total = t.total_weight
    return frozenset(
        v for v in range(t.size) if all(2 * w <= total for w in t.component_weights(v))
    )


def _tree_of(metric) -> tuple:
    if metric.tree is None:
        raise NotTreeMetric("metric was not built from a tree")
    return metric.tree


def build_response_tree(inst: Instance, z: Sequence[int], i: int, q: int, r: int) -> WeightedTree:
    """Strategy tree weighted by player ``i``'s view of ``z``.

    Every strategy gets ``r`` times the number of ``i``'s neighbors playing
    it; ``i``'s preferred strategy additionally gets ``q``.
    """
    edges = _tree_of(inst.metric)
    z = check_vector(inst, z)
    if q < 0 or r < 0:
        raise ValueError("q and r must be non-negative")
    counts = Counter(z[j] for j in inst.graph.neighbors[i])
    weights = [r * counts[v] for v in range(inst.num_strategies)]
    weights[inst.preferred[i]] += q
    return WeightedTree(inst.num_strategies, edges, tuple(weights))


def alpha_weights(alpha: Fraction) -> tuple[int, int]:
    """Integers ``(a, b)`` in lowest terms with ``alpha == a / (a + b)``."""
    alpha = Fraction(alpha)
    return alpha.numerator, alpha.denominator - alpha.numerator


def coherent_response(inst: Instance, z: Sequence[int], i: int,
                      a: int | None = None, b: int | None = None) -> int:
    """A strategy that is both a best response and a social-cost minimizer for ``i``.

    Returns the lowest-indexed element of the intersection of the medians of
    the ``(a, b)`` and ``(a, 2b)`` response trees, where ``alpha = a/(a+b)``.
    """
    if a is None or b is None:
        a, b = alpha_weights(inst.alpha)
    if Fraction(a, a + b) != inst.alpha:
        raise ValueError(f"a/(a+b) = {a}/{a + b} does not match alpha = {inst.alpha}")
    if a > b:
        raise ValueError(f"needs alpha <= 1/2, got {inst.alpha}")
    own = medians(build_response_tree(inst, z, i, a, b), allow_zero=True)
    social = medians(build_response_tree(inst, z, i, a, 2 * b), allow_zero=True)
    shared = own & social
    if not shared:
        raise EmptyIntersection(
            f"player {i} at {tuple(z)}: best responses {sorted(own)} and "
            f"social responses {sorted(social)} are disjoint"
        )
    return min(shared)


def _anchored_weights(inst: AnchoredInstance, z, node: int, fixed_weights, r: int) -> list[int]:
    fixed = inst.fixed_neighbors(node)
    weights = [0] * inst.num_strategies
    for j in inst.strategic_neighbors(node):
        weights[z[inst.position(j)]] += r
    for j, q in zip(fixed, fixed_weights):
        weights[inst.fixed[j]] += q
    return weights


def anchored_response_tree(inst: AnchoredInstance, z: Sequence[int], i: int,
                           q1: int, q2: int, r: int) -> WeightedTree:
    """Response tree for strategic node ``i`` with exactly two fixed neighbors.

    ``q1`` weights the lower-numbered fixed neighbor's strategy, ``q2`` the
    other; each strategic neighbor's strategy gets ``r``.
    """
    edges = _tree_of(inst.metric)
    z = check_vector(inst, z)
    if i in inst.fixed:
        raise NotStrategic(f"node {i} is fixed")
    degree = len(inst.fixed_neighbors(i))
    if degree != 2:
        raise WrongFixedDegree(f"node {i} has {degree} fixed neighbors, expected 2")
    weights = _anchored_weights(inst, z, i, (q1, q2), r)
    return WeightedTree(inst.num_strategies, edges, tuple(weights))


def anchored_coherent_response(inst: AnchoredInstance, z: Sequence[int], i: int) -> int:
    """Shared best/social response of strategic node ``i`` (at most two fixed neighbors)."""
    edges = _tree_of(inst.metric)
    z = check_vector(inst, z)
    if i in inst.fixed:
        raise NotStrategic(f"node {i} is fixed")
    degree = len(inst.fixed_neighbors(i))
    if degree > 2:
        raise WrongFixedDegree(f"node {i} has {degree} fixed neighbors, at most 2 allowed")
    ones = (1,) * degree
    own = WeightedTree(inst.num_strategies, edges, tuple(_anchored_weights(inst, z, i, ones, 1)))
    social = own.with_weights(_anchored_weights(inst, z, i, ones, 2))
    shared = medians(own, allow_zero=True) & medians(social, allow_zero=True)
    if not shared:
        raise EmptyIntersection(f"strategic node {i} at {tuple(z)} has no shared response")
    return min(shared)
