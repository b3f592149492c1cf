"""Explanation vectors, their minimal/maximal antichains, and implicit reach.

All enumeration here relies on the implicit sub-net being acyclic: a count
vector ``y`` is realizable from ``m`` iff ``m + C_I y >= 0``, so the search
walks count vectors directly and never materialises firing sequences.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .net import (
    BasisPartition,
    BudgetExceeded,
    FiringVector,
    Marking,
    PetriNet,
    implicit_columns,
)

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class ExplanationSet:
    vectors: frozenset[FiringVector]
    source: tuple[Marking, str | None] | None = None

    def __post_init__(self):
        object.__setattr__(self, "vectors", frozenset(self.vectors))

    def __iter__(self):
        return iter(sorted(self.vectors))

    def __len__(self):
        return len(self.vectors)

    def __contains__(self, y):
        return tuple(y) in self.vectors


def implicit_space(
    net: PetriNet, partition: BasisPartition, m: Marking, budget: int = DEFAULT_BUDGET
) -> dict[FiringVector, Marking]:
    """Every realizable implicit count vector at ``m``, mapped to the marking it reaches.

    Breadth-first over count vectors, one unit increment at a time.
    """
    cols = implicit_columns(net, partition)
    n_i = len(cols)
    zero = (0,) * n_i
    space = {zero: tuple(m)}
    queue = deque([zero])
    while queue:
        y = queue.popleft()
        mk = space[y]
        for i, col in enumerate(cols):
            nxt = tuple(a + d for a, d in zip(mk, col))
            if min(nxt) < 0:
                continue
            y2 = y[:i] + (y[i] + 1,) + y[i + 1:]
            if y2 in space:
                continue
            space[y2] = nxt
            if len(space) > budget:
                raise BudgetExceeded(
                    f"exploration budget of {budget} rows exhausted at {list(m)}"
                    " (suspected unbounded implicit sub-net)"
                )
            queue.append(y2)
    return space


def enumerate_explanations(
    net: PetriNet,
    partition: BasisPartition,
    m: Marking,
    t: str | None,
    budget: int = DEFAULT_BUDGET,
) -> ExplanationSet:
    """All explanation vectors ``Y(m, t)`` of an explicit transition.

    ``t=None`` stands for a dummy explicit transition with empty pre- and
    post-sets, whose explanations are every realizable implicit vector.

    The tableau holds rows ``(residual, count)`` with
    ``residual = m - pre(t) + C_I count``. A successor row adds one implicit
    column; it is admitted when the full marking ``residual + pre(t)`` stays
    nonnegative. Rows whose residual is nonnegative are explanations.
    """
    if t is not None:
        if t in partition.implicit or t not in partition.explicit:
            raise ValueError(f"{t!r} is not an explicit transition of the partition")
        pre = net.pre_col(t)
    else:
        pre = (0,) * net.m
    cols = implicit_columns(net, partition)
    zero = (0,) * len(cols)
    first = tuple(a - b for a, b in zip(m, pre))
    rows = {zero: first}
    queue = deque([zero])
    while queue:
        y = queue.popleft()
        residual = rows[y]
        for i, col in enumerate(cols):
            r2 = tuple(a + d for a, d in zip(residual, col))
            if any(a + b < 0 for a, b in zip(r2, pre)):
                continue
            y2 = y[:i] + (y[i] + 1,) + y[i + 1:]
            if y2 in rows:
                continue
            rows[y2] = r2
            if len(rows) > budget:
                raise BudgetExceeded(
                    f"exploration budget of {budget} rows exhausted at {list(m)}"
                    " (suspected unbounded implicit sub-net)"
                )
            queue.append(y2)
    found = (y for y, r in rows.items() if min(r, default=0) >= 0)
    return ExplanationSet(frozenset(found), (tuple(m), t))


def _leq(a: FiringVector, b: FiringVector) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _extremal(vectors: Iterable[FiringVector], maximal: bool) -> frozenset[FiringVector]:
    # Visit candidates so that any strict dominator comes first; then an element
    # is extremal iff no already-kept extremal element dominates it.
    order = sorted(set(vectors), key=sum, reverse=maximal)
    kept: list[FiringVector] = []
    for y in order:
        if maximal:
            dominated = any(_leq(y, z) for z in kept)
        else:
            dominated = any(_leq(z, y) for z in kept)
        if not dominated:
            kept.append(y)
    return frozenset(kept)


def minimal_elements(s):
    """Componentwise-minimal elements. Accepts an ExplanationSet or any iterable."""
    if isinstance(s, ExplanationSet):
        return ExplanationSet(_extremal(s.vectors, maximal=False), s.source)
    return _extremal(map(tuple, s), maximal=False)


def maximal_elements(s):
    """Componentwise-maximal elements. Accepts an ExplanationSet or any iterable."""
    if isinstance(s, ExplanationSet):
        return ExplanationSet(_extremal(s.vectors, maximal=True), s.source)
    return _extremal(map(tuple, s), maximal=True)


def maximal_implicit_vectors(
    net: PetriNet, partition: BasisPartition, m: Marking, budget: int = DEFAULT_BUDGET
) -> ExplanationSet:
    """Count vectors of the maximal implicit sequences enabled at ``m``.

    These are the maximal explanations of a dummy explicit transition that
    is always enabled and changes nothing.
    """
    return maximal_elements(enumerate_explanations(net, partition, m, None, budget))


def implicit_reach(
    net: PetriNet, partition: BasisPartition, m: Marking, budget: int = DEFAULT_BUDGET
) -> frozenset[Marking]:
    """Markings reachable from ``m`` by firing implicit transitions only."""
    return frozenset(implicit_space(net, partition, m, budget).values())


def explanations_by_transition(
    net: PetriNet,
    partition: BasisPartition,
    m: Marking,
    space: dict[FiringVector, Marking] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> dict[str, frozenset[FiringVector]]:
    """``Y(m, t)`` for every explicit ``t`` from one shared implicit search."""
    if space is None:
        space = implicit_space(net, partition, m, budget)
    out = {}
    for t in partition.explicit_ordered(net):
        pre = net.pre_col(t)
        out[t] = frozenset(
            y for y, mk in space.items() if all(a >= b for a, b in zip(mk, pre))
        )
    return out
