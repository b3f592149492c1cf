import pytest

from mmbrg.brg import build_brg, build_minimax_brg
from mmbrg.net import BudgetExceeded, NetError, BasisPartition
from mmbrg.oracle import build_reachability_graph

from conftest import corpus


def edges(g):
    return g.labeled_edges()


def test_classical_brg_fix_a(fix_a):
    g = build_brg(fix_a.plant, fix_a.partition)
    assert g.nodes == ((2, 0, 1),)
    assert edges(g) == {((2, 0, 1), ("t2", (1, 0)), (2, 0, 1))}
    assert g.kind == "classical"


def test_classical_brg_ignores_alpha(fix_a, fix_b):
    ga = build_brg(fix_a.plant, fix_a.partition)
    gb = build_brg(fix_b.plant, fix_b.partition)
    assert edges(ga) == edges(gb)


def test_minimax_brg_fix_a(fix_a):
    g = build_minimax_brg(fix_a.plant, fix_a.partition)
    assert g.node_set() == {(2, 0, 1), (1, 0, 0)}
    assert g.initial == (2, 0, 1)
    assert edges(g) == {
        ((2, 0, 1), ("t2", (1, 0)), (2, 0, 1)),
        ((2, 0, 1), ("t2", (2, 1)), (1, 0, 0)),
        ((1, 0, 0), ("t2", (1, 0)), (1, 0, 0)),
    }


def test_minimax_brg_fix_b(fix_b):
    g = build_minimax_brg(fix_b.plant, fix_b.partition)
    assert g.node_set() == {(2, 0, 1), (1, 1, 1)}
    assert edges(g) == {
        ((2, 0, 1), ("t2", (1, 0)), (2, 0, 1)),
        ((2, 0, 1), ("t2", (2, 0)), (1, 1, 1)),
        ((1, 1, 1), ("t2", (0, 0)), (2, 0, 1)),
        ((1, 1, 1), ("t2", (1, 0)), (1, 1, 1)),
    }
    # Every node is genuinely reachable.
    assert g.node_set() <= set(build_reachability_graph(fix_b.plant).markings)


def test_fix_t_graphs(fix_t):
    for build in (build_brg, build_minimax_brg):
        g = build(fix_t.plant, fix_t.partition)
        assert g.nodes == ((1,),)
        assert edges(g) == {((1,), ("t", ()), (1,))}


def test_node_budget(fix_a):
    with pytest.raises(BudgetExceeded):
        build_minimax_brg(fix_a.plant, fix_a.partition, budget=1)


def test_invalid_partition_rejected(fix_a):
    bad = BasisPartition(frozenset({"t3"}), ("t1", "t2"))
    with pytest.raises(NetError):
        build_minimax_brg(fix_a.plant, bad)


def test_deterministic_and_edge_formula():
    for _, plant, p in corpus()[:80]:
        g = build_minimax_brg(plant, p)
        labels = [(s, lab) for s, lab, _ in g.edges]
        assert len(labels) == len(set(labels))
        net = plant.net
        for (m1, (t, y), m2) in g.labeled_edges():
            assert t in p.explicit
            cols = [net.delta_col(ti) for ti in p.implicit]
            mid = list(m1)
            for col, k in zip(cols, y):
                mid = [a + k * d for a, d in zip(mid, col)]
            assert tuple(a + d for a, d in zip(mid, net.delta_col(t))) == m2


def test_every_node_reachable_in_graph():
    for _, plant, p in corpus()[:80]:
        g = build_minimax_brg(plant, p)
        succ = g.successors()
        seen, stack = {0}, [0]
        while stack:
            for _, d in succ[stack.pop()]:
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
        assert len(seen) == len(g.nodes)


def test_fifo_lifo_same_graph():
    for _, plant, p in corpus():
        for build in (build_brg, build_minimax_brg):
            a = build(plant, p, order="fifo")
            b = build(plant, p, order="lifo")
            assert a.node_set() == b.node_set()
            assert a.labeled_edges() == b.labeled_edges()
