import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from prefgame import constructions as cons
from prefgame.core import Graph, Instance, line_metric, make_metric, tree_metric
from prefgame.costs import social_cost
from prefgame.dynamics import (
    Move,
    NotTwoStrategies,
    SearchTooLarge,
    best_responses,
    flip_social_delta_bounds,
    is_equilibrium,
    is_strong_equilibrium,
    potential_descent,
    social_responses,
    two_phase_schedule,
)

F = Fraction
A, B, C = 0, 1, 2
TWO = make_metric([[0, 1], [1, 0]])


def _star_graph(leaves):
    return Graph(leaves + 1, tuple((0, j) for j in range(1, leaves + 1)))


def test_best_response_follows_majority_threshold():
    inst = Instance(_star_graph(3), TWO, (A, B, B, B), F(1, 2))
    assert best_responses(inst, (A, B, B, B), 0) == {B}


def test_isolated_node_best_and_social_response_is_preferred():
    inst = Instance(Graph(1, ()), line_metric([0, 1, 2]), (C,), F(1, 3))
    assert best_responses(inst, (A,), 0) == {C}
    assert social_responses(inst, (A,), 0) == {C}


def test_best_response_on_path_metric():
    # cost(u) = d(u,A)/3 + 2/3 (d(u,A) + d(u,C)) gives 4/3, 5/3, 2
    inst = Instance(_star_graph(2), tree_metric(3, [(A, B, 1), (B, C, 1)]), (A, A, C), F(1, 3))
    assert best_responses(inst, (B, A, C), 0) == {A}


def test_social_response_with_one_extra_neighbor():
    inst = Instance(_star_graph(3), TWO, (A, A, B, B), F(1, 2))
    assert social_responses(inst, (A, A, B, B), 0) == {B}


def test_social_response_at_zero_alpha_is_neighbor_median():
    inst = Instance(_star_graph(3), line_metric([0, 1, 5]), (A,) * 4, F(0))
    # neighbors at A, B, C: distance sums 6, 5, 9
    assert social_responses(inst, (C, A, B, C), 0) == {B}
    assert best_responses(inst, (C, A, B, C), 0) == {B}


def test_equilibrium_examples():
    ring = cons.gen_fig1_ring()
    assert is_equilibrium(ring.instance, ring.designated) == (True, None)
    clique = cons.gen_poa_clique(F(2, 3))
    assert is_equilibrium(clique.instance, clique.designated)[0]
    star = cons.gen_two_strategy_star(F(3, 4)).instance
    ok, witness = is_equilibrium(star, (A, A, A))
    assert not ok
    assert (witness.player, witness.from_, witness.to) == (0, A, B)


def test_move_must_improve():
    with pytest.raises(ValueError):
        Move(0, A, B, F(0))


def test_two_phase_single_edge():
    inst = Instance(Graph(2, ((0, 1),)), TWO, (A, B), F(3, 5))
    trace = two_phase_schedule(inst, (B, B))
    assert [(m.player, m.to) for m in trace.moves] == [(0, A)]
    assert trace.end == (A, B)
    assert is_equilibrium(inst, trace.end)[0]
    assert trace.replay() == trace.end


def test_two_phase_from_equilibrium_is_empty():
    inst = Instance(Graph(2, ((0, 1),)), TWO, (A, B), F(3, 5))
    assert two_phase_schedule(inst, (A, B)).moves == []


def test_two_phase_star_from_optimum():
    star = cons.gen_two_strategy_star(F(3, 4)).instance
    trace = two_phase_schedule(star, (A, A, A))
    assert [(m.player, m.to) for m in trace.moves] == [(0, B)]
    assert social_cost(star, trace.end) == 1


def test_two_phase_needs_two_strategies():
    inst = Instance(Graph(1, ()), line_metric([0, 1, 2]), (A,), F(1, 2))
    with pytest.raises(NotTwoStrategies):
        two_phase_schedule(inst, (A,))


def test_descent_on_clique_from_all_a_is_empty():
    clique = cons.gen_poa_clique(F(3, 4)).instance
    assert potential_descent(clique, (A,) * clique.n).moves == []


@pytest.mark.parametrize("inner", [4, 5, 6, 7])
@pytest.mark.parametrize("picker", ["first", "best"])
def test_descent_on_ring(inner, picker):
    ring = cons.gen_fig1_ring().instance
    start = [B] * 8
    start[inner] = A
    trace = potential_descent(ring, start, picker=picker)
    assert is_equilibrium(ring, trace.end)[0]
    phis = [oracle.potential(ring, start)] + trace.phis
    assert all(b < a for a, b in zip(phis, phis[1:]))


def test_ring_equilibria_from_every_start():
    # every one of the 2^8 starts must descend to an equilibrium
    ring = cons.gen_fig1_ring().instance
    for z in itertools.product((A, B), repeat=8):
        assert oracle.is_equilibrium(ring, potential_descent(ring, z).end)


def test_descent_random_tree_instances():
    for seed in range(100):
        rng = random.Random(seed)
        inst = cons.random_instance(rng, 6, 3, cons.random_alpha(rng, upper=1), "tree")
        z0 = tuple(rng.randrange(3) for _ in range(6))
        trace = potential_descent(inst, z0, picker="best")
        assert oracle.is_equilibrium(inst, trace.end)


def test_strong_equilibrium_examples():
    clique = cons.gen_poa_clique(F(2, 3))
    ok, witness = is_strong_equilibrium(clique.instance, clique.designated)
    assert not ok
    coalition, dev = witness
    assert set(dev) == {A}
    # the grand coalition switching to A also helps every member
    before = [oracle.player_cost(clique.instance, clique.designated, i) for i in range(3)]
    assert all(oracle.player_cost(clique.instance, (A,) * 3, i) < before[i] for i in range(3))

    inst = Instance(Graph.complete(4), TWO, (A, A, A, B), F(1, 3))
    assert is_strong_equilibrium(inst, (B,) * 4) == (True, None)

    zero = Instance(Graph.complete(3), TWO, (B,) * 3, F(1, 2))
    assert is_strong_equilibrium(zero, (B,) * 3)[0]


def test_strong_equilibrium_budget():
    big = Instance(Graph.complete(12), TWO, (A,) * 12, F(1, 2))
    with pytest.raises(SearchTooLarge):
        is_strong_equilibrium(big, (A,) * 12, budget=100)


@pytest.mark.parametrize("alpha", [F(5, 9), F(3, 5), F(3, 4), F(4, 5), F(9, 10)])
def test_flip_bounds_are_negative_above_half(alpha):
    away, toward = flip_social_delta_bounds(alpha)
    assert away < 0
    # for alpha in (1/2, 1) returning home can cost socially but never more than ~alpha
    assert toward < 1


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([F(5, 9), F(3, 5), F(3, 4), F(4, 5), F(9, 10)]))
def test_two_phase_moves_respect_flip_bounds(seed, alpha):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    inst = Instance(cons.random_graph(rng, n), TWO, tuple(rng.randrange(2) for _ in range(n)), alpha)
    z = [rng.randrange(2) for _ in range(n)]
    away, toward = flip_social_delta_bounds(alpha)
    trace = two_phase_schedule(inst, z)
    assert len(trace.moves) <= 2 * n
    for m in trace.moves:
        before = oracle.social_cost(inst, z)
        z[m.player] = m.to
        delta = oracle.social_cost(inst, z) - before
        assert delta <= (toward if m.to == inst.preferred[m.player] else away)
    assert oracle.is_equilibrium(inst, tuple(z))


def test_two_phase_moves_each_player_at_most_once_per_phase():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(2, 8)
        alpha = rng.choice([F(1, 3), F(3, 5), F(3, 4), F(9, 10)])
        inst = Instance(cons.random_graph(rng, n), TWO,
                        tuple(rng.randrange(2) for _ in range(n)), alpha)
        trace = two_phase_schedule(inst, [rng.randrange(2) for _ in range(n)])
        targets = [m.to for m in trace.moves]
        # all moves to strategy 0 come first, then all moves to strategy 1
        assert targets == sorted(targets)
        for target in (A, B):
            movers = [m.player for m in trace.moves if m.to == target]
            assert len(movers) == len(set(movers)) <= n
