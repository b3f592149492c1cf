import pytest
from hypothesis import given
from hypothesis import strategies as st

from mmbrg.net import (
    BasisPartition,
    ContractError,
    ExplicitFinal,
    GmecFinal,
    NetError,
    PetriNet,
    Plant,
    acyclic_state_equation_reach,
    decode_marking,
    encode_marking,
    fire,
    is_dead,
    is_enabled,
    is_final,
    validate_partition,
)
from mmbrg.oracle import implicit_sequence_reach


def part(net, implicit):
    return BasisPartition(frozenset(net.transitions) - set(implicit), tuple(implicit))


def test_incidence_is_post_minus_pre(fix_a):
    net = fix_a.plant.net
    assert net.incidence == ((-1, 1, 0), (1, -1, -1), (0, 0, -1))


def test_is_enabled(fix_a, fix_t):
    net = fix_a.plant.net
    assert not is_enabled(net, (2, 0, 1), "t2")
    assert is_enabled(net, (2, 0, 1), "t1")
    tnet = fix_t.plant.net
    assert is_enabled(tnet, tnet.pre_col("t"), "t")
    with pytest.raises(NetError):
        is_enabled(net, (2, 0, 1), "nope")


def test_fire(fix_a, fix_t):
    net = fix_a.plant.net
    assert fire(net, (2, 0, 1), "t1") == (1, 1, 1)
    assert fire(net, (1, 1, 1), "t2") == (2, 0, 1)
    assert fire(fix_t.plant.net, (1,), "t") == (1,)
    with pytest.raises(ContractError):
        fire(net, (2, 0, 1), "t2")


def test_is_dead(fix_a, fix_b):
    assert is_dead(fix_b.plant.net, (0, 0, 0))
    assert not is_dead(fix_a.plant.net, (0, 1, 0))
    assert not is_dead(fix_a.plant.net, (1, 0, 0))


def test_validate_partition(fix_a):
    net = fix_a.plant.net
    assert validate_partition(net, part(net, ["t1", "t3"])) is None
    assert validate_partition(net, part(net, ["t1", "t2"])) == ["p1", "t1", "p2", "t2", "p1"]
    assert validate_partition(net, part(net, [])) is None


def test_validate_partition_self_loop_is_a_cycle(fix_t):
    net = fix_t.plant.net
    assert validate_partition(net, part(net, ["t"])) == ["p", "t", "p"]


def test_validate_partition_cycle_with_downstream_sink():
    # p1 -> t1 -> p2 -> t2 -> p1, and t2 also feeds p3 which t3 consumes.
    net = PetriNet(
        ["p1", "p2", "p3"],
        ["t1", "t2", "t3"],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [1, 0, 0], [0, 1, 0]],
    )
    cycle = validate_partition(net, part(net, ["t1", "t2", "t3"]))
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {"p1", "t1", "p2", "t2"}


def test_validate_partition_rejects_non_partitions(fix_a):
    net = fix_a.plant.net
    with pytest.raises(NetError):
        validate_partition(net, BasisPartition(frozenset({"t1"}), ("t1", "t3")))
    with pytest.raises(NetError):
        validate_partition(net, BasisPartition(frozenset({"t2"}), ("t1",)))


def test_whole_net_acyclicity(fix_a):
    net = fix_a.plant.net
    assert validate_partition(net, part(net, net.transitions)) is not None
    assert validate_partition(net, part(net, [])) is None


def test_acyclic_state_equation_reach(fix_a):
    net = fix_a.plant.net
    p = part(net, ["t1", "t3"])
    assert acyclic_state_equation_reach(net, p, (2, 0, 1), (2, 1)) == (0, 1, 0)
    assert acyclic_state_equation_reach(net, p, (2, 0, 1), (0, 0)) == (2, 0, 1)
    assert acyclic_state_equation_reach(net, p, (0, 1, 0), (1, 0)) is None
    # Independent check: t1 t1 t3 fired one by one.
    m = (2, 0, 1)
    for t in ("t1", "t1", "t3"):
        m = fire(net, m, t)
    assert m == (0, 1, 0)


def test_state_equation_requires_acyclic(fix_a):
    net = fix_a.plant.net
    with pytest.raises(ContractError):
        acyclic_state_equation_reach(net, part(net, ["t1", "t2"]), (2, 0, 1), (1, 1))


def test_is_final(fix_a):
    assert is_final(GmecFinal((0, 0, 0), 0), (5, 4, 3))
    assert not is_final(fix_a.plant.final, (1, 0, 0))
    assert is_final(fix_a.plant.final, (2, 0, 1))
    w = (0,) * 11 + (1,) * 5 + (0,) * 6
    four = (0,) * 11 + (1, 1, 1, 1, 0) + (0,) * 6
    assert not is_final(GmecFinal(w, 3), four)
    assert is_final(GmecFinal(w, 4), four)


def test_plant_dimension_checks(fix_a):
    net = fix_a.plant.net
    with pytest.raises(NetError):
        Plant(net, (1, 0), ExplicitFinal(frozenset()))
    with pytest.raises(NetError):
        Plant(net, (2, 0, 1), GmecFinal((1, 1, 0, 0), 1))
    with pytest.raises(NetError):
        Plant(net, (2, 0, 1), ExplicitFinal(frozenset({(1, 0)})))


def test_net_construction_errors():
    with pytest.raises(NetError, match="at least one place"):
        PetriNet([], ["t"], [], [])
    with pytest.raises(NetError, match="duplicate"):
        PetriNet(["p", "p"], ["t"], [[1], [1]], [[0], [0]])
    with pytest.raises(NetError, match="negative"):
        PetriNet(["p"], ["t"], [[-1]], [[0]])


def test_encoding_layout():
    assert encode_marking((1, 2)) == b"\x01\x00\x00\x00\x02\x00\x00\x00"
    with pytest.raises(OverflowError):
        encode_marking((2**32,))


markings = st.lists(st.integers(0, 2**32 - 1), min_size=1, max_size=6).map(tuple)


@given(markings)
def test_encoding_round_trip(m):
    assert decode_marking(encode_marking(m)) == m


@given(markings, markings)
def test_encoding_injective(a, b):
    assert (encode_marking(a) == encode_marking(b)) == (a == b)


@given(st.integers(0, 10**6))
def test_fire_matches_incidence(seed):
    from mmbrg.oracle import gen_random_plant

    got = gen_random_plant(seed)
    if got is None:
        return
    plant, _ = got
    net = plant.net
    for t in net.transitions:
        if is_enabled(net, plant.m0, t):
            out = fire(net, plant.m0, t)
            assert out == tuple(a + b for a, b in zip(plant.m0, net.delta_col(t)))
            assert min(out) >= 0


@given(st.integers(0, 10**6))
def test_state_equation_matches_sequence_search(seed):
    from mmbrg.explain import implicit_space
    from mmbrg.oracle import gen_random_plant

    got = gen_random_plant(seed)
    if got is None:
        return
    plant, p = got
    net = plant.net
    space = implicit_space(net, p, plant.m0)
    reach = implicit_sequence_reach(net, p, plant.m0)
    assert set(space.values()) == reach
    for y, mk in space.items():
        assert acyclic_state_equation_reach(net, p, plant.m0, y) == mk
