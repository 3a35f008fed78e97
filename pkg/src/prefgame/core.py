"""Domain types: graphs, strategy metrics, game instances.

All distances and the mixing weight ``alpha`` are exact ``Fraction`` values.
Nodes and strategies are dense integer indices.
"""

from __future__ import annotations

import operator
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

Rational = Fraction


class GameError(Exception):
    """Base class for validation errors raised by this package."""


class TheoremViolation(GameError, AssertionError):
    """A proven property failed to hold; signals a bug rather than bad input."""


class AxiomViolation(GameError, ValueError):
    """A distance matrix fails one of the metric axioms.

    ``axiom`` is one of ``"shape"``, ``"zero"``, ``"positivity"``,
    ``"symmetry"`` or ``"triangle"``; ``witnesses`` holds the offending
    indices (``(i, j, k)`` for the triangle inequality, meaning
    ``d(i, j) > d(i, k) + d(k, j)``).
    """

    def __init__(self, axiom: str, witnesses: tuple[int, ...], message: str = ""):
        self.axiom = axiom
        self.witnesses = witnesses
        super().__init__(message or f"{axiom} axiom violated at {witnesses}")


class NotATree(GameError, ValueError):
    pass


class NotSorted(GameError, ValueError):
    pass


class TooSmall(GameError, ValueError):
    pass


class IndexOutOfRange(GameError, IndexError):
    pass


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``.

    Floats are refused: they would smuggle rounding into exact comparisons.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact rational")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes ``0..n-1``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    neighbors: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        seen = set()
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for edge in self.edges:
            u, v = (int(x) for x in edge)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise IndexOutOfRange(f"edge {edge} references a node outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "neighbors", tuple(tuple(sorted(a)) for a in adj))

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, tuple(combinations(range(n), 2)))


@dataclass(frozen=True)
class Metric:
    """Finite metric over strategies ``0..m-1``.

    Build through :func:`make_metric`, :func:`tree_metric`, :func:`line_metric`
    or :func:`cycle_metric`; the constructor runs the full axiom check.

    ``tree`` is set when the metric is the path metric of a tree on the
    strategies, as ``((u, v, length), ...)``. ``source`` records how the
    metric was built so it can be serialized back in the same form.
    """

    dist: tuple[tuple[Fraction, ...], ...]
    tree: tuple[tuple[int, int, Fraction], ...] | None = None
    source: Mapping | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        rows = tuple(tuple(to_rational(x) for x in row) for row in self.dist)
        object.__setattr__(self, "dist", rows)
        _check_axioms(rows)

    @property
    def size(self) -> int:
        return len(self.dist)

    def __call__(self, a: int, b: int) -> Fraction:
        return self.dist[a][b]

    @property
    def is_tree(self) -> bool:
        return self.tree is not None


def _check_axioms(rows: Sequence[Sequence[Fraction]]) -> None:
    m = len(rows)
    for i, row in enumerate(rows):
        if len(row) != m:
            raise AxiomViolation("shape", (i,), f"row {i} has length {len(row)}, expected {m}")
    for i in range(m):
        if rows[i][i] != 0:
            raise AxiomViolation("zero", (i,), f"d({i},{i}) = {rows[i][i]} is not 0")
        for j in range(i + 1, m):
            if rows[i][j] != rows[j][i]:
                raise AxiomViolation("symmetry", (i, j), f"d({i},{j}) != d({j},{i})")
            if rows[i][j] <= 0:
                raise AxiomViolation(
                    "positivity", (i, j), f"d({i},{j}) = {rows[i][j]} must be positive"
                )
    for k in range(m):
        rk = rows[k]
        for i in range(m):
            dik = rows[i][k]
            ri = rows[i]
            for j in range(m):
                if ri[j] > dik + rk[j]:
                    raise AxiomViolation(
                        "triangle",
                        (i, j, k),
                        f"d({i},{j}) = {ri[j]} > d({i},{k}) + d({k},{j}) = {dik + rk[j]}",
                    )


def make_metric(matrix: Sequence[Sequence]) -> Metric:
    """Validate a square matrix of rationals and wrap it as a :class:`Metric`.

    >>> make_metric([[0, 1], [1, 0]])(0, 1)
    Fraction(1, 1)
    """
    rows = tuple(tuple(to_rational(x) for x in row) for row in matrix)
    return Metric(rows, source={"kind": "matrix", "matrix": rows})


def tree_metric(size: int, edges: Iterable[tuple[int, int, object]]) -> Metric:
    """Shortest-path metric of a tree whose vertex set is the strategy set.

    ``edges`` is an iterable of ``(u, v, length)`` with positive lengths.
    Raises :class:`NotATree` if the edges do not form a spanning tree on
    ``0..size-1``.
    """
    edge_list = [(int(u), int(v), to_rational(w)) for u, v, w in edges]
    if size < 1:
        raise NotATree("a tree needs at least one vertex")
    if len(edge_list) != size - 1:
        raise NotATree(f"{len(edge_list)} edges on {size} vertices cannot form a tree")
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(size)]
    for u, v, w in edge_list:
        if not (0 <= u < size and 0 <= v < size) or u == v:
            raise NotATree(f"bad tree edge ({u}, {v})")
        if w <= 0:
            raise ValueError(f"tree edge ({u}, {v}) has non-positive length {w}")
        adj[u].append((v, w))
        adj[v].append((u, w))
    dist = [[None] * size for _ in range(size)]
    for src in range(size):
        row = dist[src]
        row[src] = Fraction(0)
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y, w in adj[x]:
                if row[y] is None:
                    row[y] = row[x] + w
                    queue.append(y)
        if any(d is None for d in row):
            raise NotATree("tree edges do not connect every vertex")
    tree = tuple((min(u, v), max(u, v), w) for u, v, w in edge_list)
    return Metric(
        tuple(tuple(r) for r in dist),
        tree=tree,
        source={"kind": "tree", "size": size, "edges": tree},
    )


def line_metric(positions: Sequence) -> Metric:
    """Metric of points on a line; a path-shaped tree metric."""
    pos = [to_rational(p) for p in positions]
    for a, b in zip(pos, pos[1:]):
        if not a < b:
            raise NotSorted(f"positions must be strictly increasing ({a} >= {b})")
    dist = tuple(tuple(abs(p - q) for q in pos) for p in pos)
    tree = tuple((i, i + 1, pos[i + 1] - pos[i]) for i in range(len(pos) - 1))
    return Metric(dist, tree=tree, source={"kind": "line", "positions": tuple(pos)})


def cycle_metric(size: int) -> Metric:
    """Unit-length cycle on ``size`` points: ``d(i, j) = min(|i-j|, size-|i-j|)``."""
    if size < 3:
        raise TooSmall(f"a cycle needs at least 3 points, got {size}")
    dist = tuple(
        tuple(Fraction(min(abs(i - j), size - abs(i - j))) for j in range(size))
        for i in range(size)
    )
    return Metric(dist, source={"kind": "cycle", "size": size})


def _check_strategy(metric: Metric, s, what: str) -> int:
    try:
        s = operator.index(s)
    except TypeError:
        raise IndexOutOfRange(f"{what} = {s!r} is not an integer strategy") from None
    if not 0 <= s < metric.size:
        raise IndexOutOfRange(f"{what} = {s!r} is not a strategy in 0..{metric.size - 1}")
    return s


@dataclass(frozen=True)
class Instance:
    """A discrete preference game.

    Player ``i`` pays ``alpha * d(preferred[i], z[i])`` plus
    ``(1 - alpha) * d(z[i], z[j])`` for every neighbor ``j``.
    """

    graph: Graph
    metric: Metric
    preferred: tuple[int, ...]
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "preferred", tuple(int(s) for s in self.preferred))
        object.__setattr__(self, "alpha", to_rational(self.alpha))
        if len(self.preferred) != self.graph.n:
            raise ValueError(
                f"{len(self.preferred)} preferred strategies for {self.graph.n} nodes"
            )
        for i, s in enumerate(self.preferred):
            _check_strategy(self.metric, s, f"preferred[{i}]")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha = {self.alpha} outside [0, 1]")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def num_strategies(self) -> int:
        return self.metric.size

    @property
    def num_players(self) -> int:
        return self.graph.n

    def players(self) -> range:
        return range(self.graph.n)


@dataclass(frozen=True)
class AnchoredInstance:
    """Anchored preference game (``alpha`` fixed at 1/2).

    ``fixed`` maps each fixed node to the strategy it is pinned to; every
    other node is strategic. Strategy vectors list the choices of the
    strategic nodes in ascending node order (see :attr:`strategic`).
    """

    graph: Graph
    metric: Metric
    fixed: Mapping[int, int]
    strategic: tuple[int, ...] = field(init=False)
    _position: Mapping[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fixed = {int(v): int(s) for v, s in dict(self.fixed).items()}
        for v, s in fixed.items():
            if not 0 <= v < self.graph.n:
                raise IndexOutOfRange(f"fixed node {v} outside 0..{self.graph.n - 1}")
            _check_strategy(self.metric, s, f"preferred strategy of fixed node {v}")
        strategic = tuple(v for v in range(self.graph.n) if v not in fixed)
        object.__setattr__(self, "fixed", dict(sorted(fixed.items())))
        object.__setattr__(self, "strategic", strategic)
        object.__setattr__(self, "_position", {v: p for p, v in enumerate(strategic)})

    alpha = Fraction(1, 2)

    @property
    def num_strategies(self) -> int:
        return self.metric.size

    @property
    def num_players(self) -> int:
        return len(self.strategic)

    def players(self) -> range:
        """Positions ``0..|S|-1`` of strategic nodes inside strategy vectors."""
        return range(len(self.strategic))

    def position(self, node: int) -> int:
        """Index of strategic ``node`` inside a strategy vector."""
        try:
            return self._position[node]
        except KeyError:
            raise NotStrategic(f"node {node} is not strategic") from None

    def fixed_neighbors(self, node: int) -> tuple[int, ...]:
        return tuple(j for j in self.graph.neighbors[node] if j in self.fixed)

    def strategic_neighbors(self, node: int) -> tuple[int, ...]:
        return tuple(j for j in self.graph.neighbors[node] if j not in self.fixed)

    @property
    def k(self) -> int:
        """Largest number of fixed neighbors of any strategic node."""
        return max((len(self.fixed_neighbors(v)) for v in self.strategic), default=0)


class NotStrategic(GameError, ValueError):
    pass


def check_vector(inst: Instance | AnchoredInstance, z: Sequence[int]) -> tuple[int, ...]:
    """Validate a strategy vector against ``inst`` and return it as a tuple."""
    z = tuple(z)
    if len(z) != inst.num_players:
        raise ValueError(f"strategy vector has length {len(z)}, expected {inst.num_players}")
    return tuple(_check_strategy(inst.metric, s, f"z[{i}]") for i, s in enumerate(z))
