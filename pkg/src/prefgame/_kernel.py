"""Chunked exhaustive scan of all strategy vectors on scaled integer costs.

Every cost in a game is ``scale * integer`` once distances are brought to a
common denominator and ``alpha = p/q`` is cleared, so the scan runs on
numpy integers (object dtype when int64 could overflow) and converts back to
``Fraction`` only for reported values. Vector index order is lexicographic
(player 0 is the most significant digit).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import AnchoredInstance

CHUNK = 1 << 17
_INT64_SAFE = 1 << 61


@dataclass
class CompiledGame:
    num_players: int
    num_strategies: int
    dist: np.ndarray            # (L, L) scaled distances
    unary: np.ndarray           # (P, L) per-player preference/anchor cost
    edge_weight: int            # coordination coefficient on every player-player edge
    edges: list[tuple[int, int]]
    neighbors: list[list[int]]
    scale: Fraction             # true cost = scale * integer cost

    @property
    def size(self) -> int:
        return self.num_strategies ** self.num_players


def compile_game(inst) -> CompiledGame:
    rows = inst.metric.dist
    den = math.lcm(*(x.denominator for row in rows for x in row)) if rows else 1
    dist = [[int(x * den) for x in row] for row in rows]
    L = inst.metric.size
    if isinstance(inst, AnchoredInstance):
        players = inst.strategic
        unary = []
        for v in players:
            u = [0] * L
            for j in inst.fixed_neighbors(v):
                for s in range(L):
                    u[s] += dist[inst.fixed[j]][s]
            unary.append(u)
        edges = [(inst.position(u), inst.position(v)) for u, v in inst.graph.edges
                 if u not in inst.fixed and v not in inst.fixed]
        weight = 1
        scale = Fraction(1, den)
    else:
        p, q = inst.alpha.numerator, inst.alpha.denominator
        unary = [[p * dist[s][t] for t in range(L)] for s in inst.preferred]
        edges = list(inst.graph.edges)
        weight = q - p
        scale = Fraction(1, q * den)
    P = len(unary)
    nbrs: list[list[int]] = [[] for _ in range(P)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    max_d = max((max(r) for r in dist), default=0)
    bound = sum(max(u) for u in unary) + 2 * weight * len(edges) * max_d
    bound += weight * max_d * max((len(a) for a in nbrs), default=0)
    dtype = np.int64 if bound < _INT64_SAFE else object
    return CompiledGame(
        num_players=P,
        num_strategies=L,
        dist=np.array(dist, dtype=dtype).reshape(L, L),
        unary=np.array(unary, dtype=dtype).reshape(P, L),
        edge_weight=weight,
        edges=edges,
        neighbors=nbrs,
        scale=scale,
    )


def decode(index: int, num_players: int, num_strategies: int) -> tuple[int, ...]:
    digits = []
    for _ in range(num_players):
        index, d = divmod(index, num_strategies)
        digits.append(d)
    return tuple(reversed(digits))


@dataclass
class ScanResult:
    """Integer-scaled results of a full scan; see :class:`CompiledGame` for ``scale``."""

    game: CompiledGame
    opt: int | None = None
    opt_indices: list = field(default_factory=list)
    opt_min_potential: int | None = None
    opt_min_potential_index: int | None = None
    eq_count: int = 0
    best_eq: int | None = None
    best_eq_index: int | None = None
    worst_eq: int | None = None
    worst_eq_index: int | None = None
    eq_costs: Counter = field(default_factory=Counter)

    def vector(self, index: int) -> tuple[int, ...]:
        return decode(int(index), self.game.num_players, self.game.num_strategies)

    def value(self, x: int) -> Fraction:
        return self.game.scale * int(x)


def _chunk_states(lo: int, hi: int, P: int, L: int) -> np.ndarray:
    idx = np.arange(lo, hi, dtype=np.int64)
    Z = np.empty((P, hi - lo), dtype=np.int64)
    for t in range(P - 1, -1, -1):
        Z[t] = idx % L
        idx //= L
    return Z


def scan(inst, equilibria: bool = True, keep_optima: bool = True) -> ScanResult:
    """Evaluate social cost, potential and (optionally) the Nash condition everywhere."""
    g = compile_game(inst)
    P, L, W = g.num_players, g.num_strategies, g.edge_weight
    D, U = g.dist, g.unary
    res = ScanResult(game=g)
    total = g.size
    for lo in range(0, total, CHUNK):
        hi = min(total, lo + CHUNK)
        Z = _chunk_states(lo, hi, P, L)
        width = hi - lo
        pref = np.zeros(width, dtype=U.dtype)
        for i in range(P):
            pref = pref + U[i][Z[i]]
        cut = np.zeros(width, dtype=U.dtype)
        for u, v in g.edges:
            cut = cut + D[Z[u], Z[v]]
        social = pref + 2 * W * cut
        phi = pref + W * cut

        low = social.min()
        if res.opt is None or low < res.opt:
            res.opt = low
            res.opt_indices = []
            res.opt_min_potential = None
        if low == res.opt:
            hits = np.flatnonzero(social == low)
            if keep_optima:
                res.opt_indices.append(hits + lo)
            phis = phi[hits]
            pmin = phis.min()
            if res.opt_min_potential is None or pmin < res.opt_min_potential:
                res.opt_min_potential = pmin
                res.opt_min_potential_index = lo + int(hits[np.flatnonzero(phis == pmin)[0]])

        if not equilibria:
            continue
        stable = np.ones(width, dtype=bool)
        cols = np.arange(width)
        for i in range(P):
            costs = np.repeat(U[i][:, None], width, axis=1)
            for j in g.neighbors[i]:
                costs = costs + W * D[:, Z[j]]
            stable &= costs[Z[i], cols] <= costs.min(axis=0)
        eq_social = social[stable]
        if eq_social.size == 0:
            continue
        res.eq_count += int(eq_social.size)
        eq_idx = np.flatnonzero(stable)
        b = eq_social.min()
        if res.best_eq is None or b < res.best_eq:
            res.best_eq = b
            res.best_eq_index = lo + int(eq_idx[np.flatnonzero(eq_social == b)[0]])
        w = eq_social.max()
        if res.worst_eq is None or w > res.worst_eq:
            res.worst_eq = w
            res.worst_eq_index = lo + int(eq_idx[np.flatnonzero(eq_social == w)[0]])
        values, counts = np.unique(eq_social, return_counts=True)
        for v, c in zip(values, counts):
            res.eq_costs[int(v)] += int(c)
    if keep_optima:
        res.opt_indices = [int(x) for arr in res.opt_indices for x in arr]
    return res
