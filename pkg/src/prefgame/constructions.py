"""Generators for the named instance families, plus random instances for property runs."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping

from .core import (
    AnchoredInstance,
    GameError,
    Graph,
    Instance,
    cycle_metric,
    line_metric,
    make_metric,
    to_rational,
    tree_metric,
)
from .optimize import OutOfRange

A, B = 0, 1
HALF = Fraction(1, 2)


class WrongAlpha(GameError, ValueError):
    pass


class ConstructionId(str, enum.Enum):
    POA_CLIQUE = "poa_clique"
    FIG1_RING = "fig1_ring"
    TWO_STRATEGY_STAR = "two_strategy_star"
    CYCLE_METRIC_GADGET = "cycle_metric_gadget"
    PATH_CLIQUES_HALF = "path_cliques_half"
    PATH_CLIQUES_SUB_HALF = "path_cliques_sub_half"
    ANCHORED_STAR = "anchored_star"
    ANCHORED_FROM_DISCRETE = "anchored_from_discrete"
    RANDOM = "random"


@dataclass(frozen=True)
class NamedConstruction:
    """A generated instance, the generator that made it and its parameters.

    ``designated`` is the strategy vector the family is built around (an
    equilibrium for the PoA families, the all-preferred vector for the lower
    bound families), or ``None``.
    """

    id: ConstructionId
    instance: Instance | AnchoredInstance
    params: Mapping = field(default_factory=dict)
    designated: tuple[int, ...] | None = None


def _two_point():
    return make_metric([[0, 1], [1, 0]])


def gen_poa_clique(alpha) -> NamedConstruction:
    """Clique of all-A preferrers where all-B is a costly equilibrium."""
    alpha = to_rational(alpha)
    if not 0 < alpha < 1:
        raise OutOfRange(f"alpha = {alpha} outside (0, 1); use gen_fig1_ring for alpha = 0")
    size = math.ceil(alpha / (1 - alpha)) + 1
    inst = Instance(Graph.complete(size), _two_point(), (A,) * size, alpha)
    return NamedConstruction(ConstructionId.POA_CLIQUE, inst, {"alpha": alpha}, (B,) * size)


def gen_fig1_ring() -> NamedConstruction:
    """Two nested 4-cycles joined by spokes, ``alpha = 0``.

    Outer ring on nodes 0-3, inner ring on 4-7. The designated equilibrium
    colors the outer ring A and the inner ring B.
    """
    outer = [(0, 1), (1, 2), (2, 3), (3, 0)]
    inner = [(4, 5), (5, 6), (6, 7), (7, 4)]
    spokes = [(3, 4), (2, 5), (1, 6), (0, 7)]
    inst = Instance(Graph(8, tuple(outer + inner + spokes)), _two_point(), (A,) * 8, Fraction(0))
    return NamedConstruction(ConstructionId.FIG1_RING, inst, {}, (A,) * 4 + (B,) * 4)


def gen_two_strategy_star(alpha) -> NamedConstruction:
    """Star whose center (node 0) prefers B and whose leaves prefer A."""
    alpha = to_rational(alpha)
    if not HALF < alpha < 1 or alpha == Fraction(2, 3):
        raise OutOfRange(f"alpha = {alpha} must lie in (1/2, 1) and differ from 2/3")
    leaves = math.ceil(alpha / (1 - alpha) - 1)
    edges = tuple((0, j) for j in range(1, leaves + 1))
    inst = Instance(Graph(leaves + 1, edges), _two_point(), (B,) + (A,) * leaves, alpha)
    return NamedConstruction(
        ConstructionId.TWO_STRATEGY_STAR, inst, {"alpha": alpha}, (B,) + (A,) * leaves
    )


def _clique_edges(nodes):
    return list(combinations(nodes, 2))


def gen_cycle_gadget(k: int, clique_size: int | None = None) -> NamedConstruction:
    """Central A-preferrer bridging a B-clique and a C-clique on a cycle metric.

    Strategies are the ``3k+1`` points of a unit cycle with ``A = 0``,
    ``B = k`` and ``C = 2k+1``. Node 0 is central; the B-clique follows, then
    the C-clique, each of ``clique_size`` nodes (default ``3k``). The first
    node of each clique is the one linked to the center.
    """
    if k < 1:
        raise OutOfRange("k must be at least 1")
    size = 3 * k if clique_size is None else clique_size
    if size < 1:
        raise OutOfRange("clique size must be positive")
    a, b, c = 0, k, 2 * k + 1
    b_nodes = list(range(1, 1 + size))
    c_nodes = list(range(1 + size, 1 + 2 * size))
    edges = [(0, b_nodes[0]), (0, c_nodes[0])] + _clique_edges(b_nodes) + _clique_edges(c_nodes)
    preferred = (a,) + (b,) * size + (c,) * size
    inst = Instance(Graph(1 + 2 * size, tuple(edges)), cycle_metric(3 * k + 1), preferred, HALF)
    return NamedConstruction(
        ConstructionId.CYCLE_METRIC_GADGET,
        inst,
        {"k": k, "clique_size": size, "A": a, "B": b, "C": c},
        preferred,
    )


def path_cliques_metric(alpha, n: int, eps):
    """Metric on ``s_0..s_{n+1}`` where distance grows with index gap.

    ``alpha = 1/2`` uses ``1 + (|i-j|-1) * eps``; smaller ``alpha`` uses
    ``1 + (|i-j|-1) * (1-2a)/(1-a) * (1+eps)``.
    """
    alpha, eps = to_rational(alpha), to_rational(eps)
    step = eps if alpha == HALF else (1 - 2 * alpha) / (1 - alpha) * (1 + eps)
    m = n + 2
    return make_metric(
        [[0 if i == j else 1 + (abs(i - j) - 1) * step for j in range(m)] for i in range(m)]
    )


def gen_path_cliques(alpha, n: int, eps, clique_size: int | None = None) -> NamedConstruction:
    """Path of ``n`` nodes between two large cliques.

    Path node ``t`` (0-based) prefers strategy ``t + 1``. The left clique
    prefers strategy 0 and hangs off path node 0; the right clique prefers
    strategy ``n + 1`` and hangs off path node ``n - 1``. Clique size defaults
    to ``n**2`` at ``alpha = 1/2`` and ``ceil(n**2 / alpha)`` below it.
    """
    alpha, eps = to_rational(alpha), to_rational(eps)
    if not 0 < alpha <= HALF:
        raise OutOfRange(f"alpha = {alpha} outside (0, 1/2]")
    if n < 2:
        raise OutOfRange("path needs at least 2 nodes")
    if eps <= 0:
        raise OutOfRange("eps must be positive")
    if clique_size is None:
        clique_size = n * n if alpha == HALF else math.ceil(n * n / alpha)
    if clique_size < 1:
        raise OutOfRange("clique size must be positive")
    left = list(range(n, n + clique_size))
    right = list(range(n + clique_size, n + 2 * clique_size))
    edges = [(t, t + 1) for t in range(n - 1)]
    edges += [(0, left[0]), (n - 1, right[0])]
    edges += _clique_edges(left) + _clique_edges(right)
    preferred = tuple(range(1, n + 1)) + (0,) * clique_size + (n + 1,) * clique_size
    inst = Instance(
        Graph(n + 2 * clique_size, tuple(edges)), path_cliques_metric(alpha, n, eps), preferred, alpha
    )
    cid = ConstructionId.PATH_CLIQUES_HALF if alpha == HALF else ConstructionId.PATH_CLIQUES_SUB_HALF
    params = {"alpha": alpha, "n": n, "eps": eps, "clique_size": clique_size}
    return NamedConstruction(cid, inst, params, preferred)


def bi_consensus(construction: NamedConstruction, split: int) -> tuple[int, ...]:
    """Path nodes ``0..split-1`` and the left clique play strategy 0, the rest ``n+1``."""
    n, size = construction.params["n"], construction.params["clique_size"]
    if not 0 <= split <= n:
        raise OutOfRange(f"split {split} outside 0..{n}")
    path = (0,) * split + (n + 1,) * (n - split)
    return path + (0,) * size + (n + 1,) * size


def gen_anchored_star(k: int) -> NamedConstruction:
    """Anchored star whose best equilibrium costs ``2(k-1)`` against an optimum of ``k``.

    Strategic nodes come first: the center (node 0), then a clique of
    ``k - 1`` strategic nodes. Fixed nodes follow: ``k`` pinned to A around
    the center, and ``k`` pinned to B around each clique node.
    """
    if k < 3:
        raise OutOfRange("k must be at least 3 (k <= 2 has PoS 1)")
    clique = list(range(1, k))
    edges = [(0, j) for j in clique] + _clique_edges(clique)
    fixed = {}
    nxt = k
    for owner, pinned in [(0, A)] + [(j, B) for j in clique]:
        for _ in range(k):
            fixed[nxt] = pinned
            edges.append((owner, nxt))
            nxt += 1
    inst = AnchoredInstance(Graph(nxt, tuple(edges)), _two_point(), fixed)
    return NamedConstruction(ConstructionId.ANCHORED_STAR, inst, {"k": k}, (A,) + (B,) * (k - 1))


def discrete_to_anchored(inst: Instance) -> AnchoredInstance:
    """Replace each node's preference with a private fixed neighbor.

    Node ``i`` stays strategic (same vector position); fixed node ``n + i``
    carries its preferred strategy. Social costs double exactly.
    """
    if inst.alpha != HALF:
        raise WrongAlpha(f"anchored games use alpha = 1/2, got {inst.alpha}")
    n = inst.n
    edges = list(inst.graph.edges) + [(i, n + i) for i in range(n)]
    fixed = {n + i: s for i, s in enumerate(inst.preferred)}
    return AnchoredInstance(Graph(2 * n, tuple(edges)), inst.metric, fixed)


# Random instances for property runs and the CLI.


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph(n, tuple(e for e in combinations(range(n), 2) if rng.random() < p))


def random_tree_metric(rng: random.Random, size: int, max_length: int = 3,
                       fractional: bool = True):
    """Random labelled tree with positive rational edge lengths."""
    edges = []
    for v in range(1, size):
        u = rng.randrange(v)
        length = Fraction(rng.randint(1, max_length * 2), 2) if fractional else Fraction(
            rng.randint(1, max_length))
        edges.append((u, v, length))
    return tree_metric(size, edges)


def random_graphic_metric(rng: random.Random, size: int, max_length: int = 4):
    """Shortest-path metric of a random connected graph with cycles (generally not a tree metric)."""
    w = [[None] * size for _ in range(size)]
    for v in range(1, size):
        u = rng.randrange(v)
        w[u][v] = w[v][u] = rng.randint(1, max_length)
    for u, v in combinations(range(size), 2):
        if w[u][v] is None and rng.random() < 0.6:
            w[u][v] = w[v][u] = rng.randint(1, max_length)
    dist = [[0 if i == j else (w[i][j] if w[i][j] is not None else math.inf)
             for j in range(size)] for i in range(size)]
    for k in range(size):
        for i in range(size):
            for j in range(size):
                if dist[i][k] + dist[k][j] < dist[i][j]:
                    dist[i][j] = dist[i][k] + dist[k][j]
    return make_metric([[Fraction(x) for x in row] for row in dist])


def random_metric(rng: random.Random, size: int, kind: str = "mixed"):
    """Random metric of the requested ``kind``: tree, line, cycle, graphic, uniform, mixed."""
    if kind == "mixed":
        kind = rng.choice(["tree", "line", "cycle", "graphic", "uniform"])
    if kind == "cycle" and size < 3:
        kind = "tree"
    if kind == "tree":
        return random_tree_metric(rng, size)
    if kind == "line":
        pos, acc = [], Fraction(0)
        for _ in range(size):
            acc += Fraction(rng.randint(1, 6), rng.randint(1, 3))
            pos.append(acc)
        return line_metric(pos)
    if kind == "cycle":
        return cycle_metric(size)
    if kind == "graphic":
        return random_graphic_metric(rng, size)
    if kind == "uniform":
        # every distance in [c, 2c], so the triangle inequality holds automatically
        c = rng.randint(2, 5)
        rows = [[Fraction(0)] * size for _ in range(size)]
        for i, j in combinations(range(size), 2):
            rows[i][j] = rows[j][i] = Fraction(rng.randint(2 * c, 4 * c), 2)
        return make_metric(rows)
    raise ValueError(f"unknown metric kind {kind!r}")


def random_instance(rng: random.Random, n: int, num_strategies: int, alpha,
                    metric: str = "mixed", edge_prob: float = 0.5) -> Instance:
    m = random_metric(rng, num_strategies, metric)
    preferred = tuple(rng.randrange(m.size) for _ in range(n))
    return Instance(random_graph(rng, n, edge_prob), m, preferred, to_rational(alpha))


def random_hub_instance(rng: random.Random, num_strategies: int | None = None,
                        metric: str = "uniform") -> Instance:
    """A hub node tied to two or three small cliques, over a random metric.

    Each clique agrees on one preferred strategy and touches the hub through
    a single edge; ``alpha`` lies in ``[1/3, 1/2]`` so the cliques rarely
    move. Plain random graphs almost never have an optimum that fails to be
    an equilibrium; this skeleton does so a few percent of the time.
    """
    size = num_strategies or rng.randint(4, 5)
    m = random_metric(rng, size, metric)
    preferred = [rng.randrange(size)]
    edges: list[tuple[int, int]] = []
    nodes = 1
    for _ in range(rng.randint(2, 3)):
        width = rng.randint(2, 3)
        if nodes + width > 7:
            break
        members = list(range(nodes, nodes + width))
        nodes += width
        preferred += [rng.randrange(size)] * width
        edges += _clique_edges(members) + [(0, members[0])]
    alpha = Fraction(rng.randint(4, 6), 12)
    return Instance(Graph(nodes, tuple(edges)), m, tuple(preferred), alpha)


def random_alpha(rng: random.Random, upper=HALF, max_den: int = 12) -> Fraction:
    """Random rational in ``[0, upper]`` with a small denominator."""
    den = rng.randint(1, max_den)
    num = rng.randint(0, math.floor(upper * den))
    return Fraction(num, den)


def random_anchored_tree_instance(rng: random.Random, num_strategic: int, num_strategies: int,
                                  max_fixed: int = 2, edge_prob: float = 0.5) -> AnchoredInstance:
    """Anchored game on a random tree metric with at most ``max_fixed`` fixed neighbors per strategic node."""
    metric = random_tree_metric(rng, num_strategies)
    edges = [e for e in combinations(range(num_strategic), 2) if rng.random() < edge_prob]
    fixed = {}
    nxt = num_strategic
    for v in range(num_strategic):
        for _ in range(rng.randint(0, max_fixed)):
            fixed[nxt] = rng.randrange(num_strategies)
            edges.append((v, nxt))
            nxt += 1
    return AnchoredInstance(Graph(nxt, tuple(edges)), metric, fixed)


GENERATORS: dict[str, Callable[..., NamedConstruction]] = {
    ConstructionId.POA_CLIQUE.value: gen_poa_clique,
    ConstructionId.FIG1_RING.value: gen_fig1_ring,
    ConstructionId.TWO_STRATEGY_STAR.value: gen_two_strategy_star,
    ConstructionId.CYCLE_METRIC_GADGET.value: gen_cycle_gadget,
    ConstructionId.PATH_CLIQUES_HALF.value: gen_path_cliques,
    ConstructionId.PATH_CLIQUES_SUB_HALF.value: gen_path_cliques,
    ConstructionId.ANCHORED_STAR.value: gen_anchored_star,
}
