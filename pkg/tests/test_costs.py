import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from prefgame import constructions as cons
from prefgame.core import AnchoredInstance, Graph, Instance, NotStrategic, make_metric
from prefgame.costs import (
    anchored_contribution,
    anchored_player_cost,
    anchored_potential,
    anchored_social_cost,
    contribution,
    deviation_cost,
    player_cost,
    potential,
    social_cost,
)

F = Fraction
A, B = 0, 1


@pytest.fixture
def star():
    return cons.gen_two_strategy_star(F(3, 4)).instance


def test_consensus_on_shared_preference_is_free():
    inst = Instance(Graph.complete(4), make_metric([[0, 1], [1, 0]]), (A,) * 4, F(1, 3))
    z = (A,) * 4
    assert all(player_cost(inst, z, i).total == 0 for i in range(4))
    assert social_cost(inst, z) == 0
    assert potential(inst, z) == 0


def test_star_costs(star):
    # center is node 0 and prefers B
    assert player_cost(star, (B, A, A), 0).total == F(1, 2)
    assert social_cost(star, (B, A, A)) == 1
    assert social_cost(star, (A, A, A)) == F(3, 4)
    brute = min(oracle.social_cost(star, z) for z in itertools.product((A, B), repeat=3))
    assert brute == F(3, 4)


def test_breakdown_terms(star):
    bd = player_cost(star, (B, A, A), 0)
    assert bd.preference_term == 0
    assert bd.neighbor_term == F(1, 2)
    assert deviation_cost(star, (B, A, A), 0, A) == F(3, 4)


def test_cycle_gadget_preferred_cost():
    g = cons.gen_cycle_gadget(3)
    assert social_cost(g.instance, g.instance.preferred) == 6


def test_isolated_node_contribution():
    inst = Instance(Graph(2, ()), make_metric([[0, 1], [1, 0]]), (A, B), F(1, 2))
    assert contribution(inst, (A, B), 0) == 0
    assert contribution(inst, (B, B), 0) == F(1, 2)


def test_anchored_star_costs():
    star = cons.gen_anchored_star(3).instance
    # strategic positions: center, then the two other clique nodes
    assert anchored_player_cost(star, (A, B, B), 0) == 2
    assert anchored_player_cost(star, (B, B, B), 0) == 3
    assert anchored_social_cost(star, (A, B, B)) == 4
    assert anchored_social_cost(star, (B, B, B)) == 3
    with pytest.raises(NotStrategic):
        anchored_player_cost(star, (A, B, B), star.graph.n - 1)


def test_anchored_isolated():
    m = make_metric([[0, 1], [1, 0]])
    inst = AnchoredInstance(Graph(3, ()), m, {2: 1})
    assert anchored_player_cost(inst, (A, B), 0) == 0
    assert anchored_social_cost(inst, (A, B)) == 0


def _random_discrete(seed):
    rng = random.Random(seed)
    return cons.random_instance(rng, rng.randint(1, 6), rng.randint(2, 4),
                                cons.random_alpha(rng, upper=1), "mixed"), rng


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_costs_match_oracle(seed):
    inst, rng = _random_discrete(seed)
    z = tuple(rng.randrange(inst.num_strategies) for _ in range(inst.n))
    assert social_cost(inst, z) == oracle.social_cost(inst, z)
    assert potential(inst, z) == oracle.potential(inst, z)
    for i in range(inst.n):
        assert player_cost(inst, z, i).total == oracle.player_cost(inst, z, i)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_contributions_sum_to_social_cost_plus_edges(seed):
    inst, rng = _random_discrete(seed)
    z = tuple(rng.randrange(inst.num_strategies) for _ in range(inst.n))
    d = inst.metric.dist
    edges = sum((d[z[u]][z[v]] for u, v in inst.graph.edges), F(0))
    # every edge is counted twice inside each endpoint's contribution
    total = sum(contribution(inst, z, i) for i in range(inst.n))
    assert total == social_cost(inst, z) + 2 * (1 - inst.alpha) * edges


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_anchored_costs_match_oracle(seed):
    rng = random.Random(seed)
    inst = cons.random_anchored_tree_instance(rng, rng.randint(1, 4), rng.randint(2, 4), 3)
    z = tuple(rng.randrange(inst.num_strategies) for _ in inst.strategic)
    assert anchored_social_cost(inst, z) == oracle.anchored_social(inst, z)
    for pos, node in enumerate(inst.strategic):
        assert anchored_player_cost(inst, z, node) == oracle.anchored_cost(inst, z, node)
        old = anchored_contribution(inst, z, node)
        for s in range(inst.num_strategies):
            y = list(z)
            y[pos] = s
            dc = oracle.anchored_cost(inst, y, node) - oracle.anchored_cost(inst, z, node)
            assert anchored_potential(inst, y) - anchored_potential(inst, z) == dc
            assert (anchored_social_cost(inst, y) - anchored_social_cost(inst, z)
                    == anchored_contribution(inst, y, node) - old)
