"""Worklist construction of the classical and minimax basis reachability graphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Literal

from .explain import (
    DEFAULT_BUDGET,
    _extremal,
    explanations_by_transition,
    implicit_space,
)
from .net import (
    BasisPartition,
    BudgetExceeded,
    FiringVector,
    Marking,
    Plant,
    require_valid_partition,
)

Edge = tuple[int, tuple[str, FiringVector], int]


@dataclass(frozen=True)
class BasisGraph:
    """Deterministic automaton over basis markings.

    ``nodes[0]`` is the initial marking; edges are ``(src, (t, y), dst)``
    index triples.
    """

    nodes: tuple[Marking, ...]
    edges: frozenset[Edge]
    kind: Literal["classical", "minimax"]
    partition: BasisPartition

    @property
    def initial(self) -> Marking:
        return self.nodes[0]

    def node_set(self) -> frozenset[Marking]:
        return frozenset(self.nodes)

    def labeled_edges(self) -> frozenset[tuple[Marking, tuple[str, FiringVector], Marking]]:
        """Edges with marking endpoints; independent of node numbering."""
        return frozenset((self.nodes[s], lab, self.nodes[d]) for s, lab, d in self.edges)

    def successors(self) -> dict[int, list[tuple[tuple[str, FiringVector], int]]]:
        out: dict[int, list] = {i: [] for i in range(len(self.nodes))}
        for s, lab, d in sorted(self.edges):
            out[s].append((lab, d))
        return out

    def canonical_order(self) -> list[int]:
        """Node indices sorted by marking, the order used for exports."""
        return sorted(range(len(self.nodes)), key=lambda i: self.nodes[i])


def _build(
    plant: Plant,
    partition: BasisPartition,
    kind: str,
    budget: int,
    order: str,
    cache: dict | None,
) -> BasisGraph:
    net = plant.net
    require_valid_partition(net, partition)
    if order not in ("fifo", "lifo"):
        raise ValueError("order must be 'fifo' or 'lifo'")
    index = {plant.m0: 0}
    nodes = [plant.m0]
    edges: set[Edge] = set()
    work = deque([plant.m0])
    explicit = partition.explicit_ordered(net)
    deltas = {t: net.delta_col(t) for t in explicit}
    while work:
        mk = work.popleft() if order == "fifo" else work.pop()
        src = index[mk]
        if cache is not None and mk in cache:
            space = cache[mk]
        else:
            space = implicit_space(net, partition, mk, budget)
            if cache is not None:
                cache[mk] = space
        expl = explanations_by_transition(net, partition, mk, space)
        for t in explicit:
            ys = expl[t]
            if not ys:
                continue
            chosen = _extremal(ys, maximal=False)
            if kind == "minimax":
                chosen = chosen | _extremal(ys, maximal=True)
            for y in sorted(chosen):
                nxt = tuple(a + d for a, d in zip(space[y], deltas[t]))
                dst = index.get(nxt)
                if dst is None:
                    dst = len(nodes)
                    if dst >= budget:
                        raise BudgetExceeded(
                            f"node budget of {budget} exceeded (suspected unbounded plant)"
                        )
                    index[nxt] = dst
                    nodes.append(nxt)
                    work.append(nxt)
                edges.add((src, (t, y), dst))
    return BasisGraph(tuple(nodes), frozenset(edges), kind, partition)


def build_brg(
    plant: Plant,
    partition: BasisPartition,
    budget: int = DEFAULT_BUDGET,
    order: str = "fifo",
    cache: dict | None = None,
) -> BasisGraph:
    """Classical BRG: successors through minimal explanations only."""
    return _build(plant, partition, "classical", budget, order, cache)


def build_minimax_brg(
    plant: Plant,
    partition: BasisPartition,
    budget: int = DEFAULT_BUDGET,
    order: str = "fifo",
    cache: dict | None = None,
) -> BasisGraph:
    """Minimax-BRG: successors through minimal and maximal explanations.

    ``cache`` maps markings to their implicit search results and may be
    shared with later verification steps.
    """
    return _build(plant, partition, "minimax", budget, order, cache)
