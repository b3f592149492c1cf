from mmbrg.net import fire, is_enabled
from mmbrg.oracle import (
    GenConfig,
    blocking_from,
    build_reachability_graph,
    gen_random_plant,
    oracle_blocking,
    random_corpus,
)
from mmbrg.net import validate_partition

from conftest import corpus


def test_rg_fixtures(fix_a, fix_b, fix_t):
    assert set(build_reachability_graph(fix_a.plant).markings) == {
        (2, 0, 1), (1, 1, 1), (0, 2, 1), (1, 0, 0), (0, 1, 0)
    }
    assert set(build_reachability_graph(fix_b.plant).markings) == {
        (2, 0, 1), (1, 1, 1), (0, 2, 1), (0, 0, 0)
    }
    assert build_reachability_graph(fix_t.plant).markings == ((1,),)


def test_blocking_fixtures(fix_a, fix_b, fix_t):
    a = oracle_blocking(fix_a.plant)
    assert a.blocking == {(1, 0, 0), (0, 1, 0)}
    assert a.dead == frozenset()
    assert not a.is_nonblocking
    b = oracle_blocking(fix_b.plant)
    assert b.dead == {(0, 0, 0)}
    assert not b.is_nonblocking
    assert oracle_blocking(fix_t.plant).is_nonblocking


def test_blocking_from(fix_a):
    assert blocking_from(fix_a.plant, (1, 0, 0))
    assert not blocking_from(fix_a.plant, (0, 2, 1))


def test_dead_final_marking_is_not_blocking(fix_b):
    from mmbrg.net import ExplicitFinal, Plant

    plant = Plant(fix_b.plant.net, fix_b.plant.m0, ExplicitFinal(frozenset({(0, 0, 0)})))
    cls = oracle_blocking(plant)
    assert (0, 0, 0) in cls.dead and (0, 0, 0) not in cls.blocking
    assert cls.is_nonblocking


def test_rg_closed_under_firing():
    for _, plant, _ in corpus()[:60]:
        rg = build_reachability_graph(plant)
        marks = set(rg.markings)
        out = {(rg.markings[s], t): rg.markings[d] for s, t, d in rg.edges}
        for mk in rg.markings:
            for t in plant.net.transitions:
                if is_enabled(plant.net, mk, t):
                    nxt = fire(plant.net, mk, t)
                    assert nxt in marks
                    assert out[(mk, t)] == nxt


def test_generator_deterministic():
    assert gen_random_plant(1) == gen_random_plant(1)
    a = list(random_corpus(5, 5))
    b = list(random_corpus(5, 5))
    assert a == b


def test_generator_contract():
    config = GenConfig()
    for _, plant, p in random_corpus(99, 30, config):
        assert validate_partition(plant.net, p) is None
        assert len(build_reachability_graph(plant).markings) <= config.rg_cap
        assert plant.net.m <= config.max_places and plant.net.n <= config.max_transitions
        assert max(max(r) for r in plant.net.pre) <= config.max_weight
        assert max(plant.m0) <= config.max_tokens
        assert oracle_blocking(plant).final  # at least one reachable final marking
