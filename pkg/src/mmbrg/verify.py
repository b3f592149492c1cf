"""Nonblockingness verification on the minimax-BRG.

A bounded plant is nonblocking iff it has no reachable non-final dead
marking and every minimax basis marking can reach, inside the graph, a
node whose implicit reach meets the final set.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .brg import BasisGraph, build_minimax_brg
from .explain import DEFAULT_BUDGET, _extremal, implicit_space
from .net import (
    BasisPartition,
    FiringVector,
    GmecFinal,
    Marking,
    Plant,
    implicit_columns,
    is_dead,
    require_valid_partition,
)

ALL_CHECKS_PASSED = "ALL_CHECKS_PASSED"
NON_FINAL_DEADLOCK = "NON_FINAL_DEADLOCK"
OBSTRUCTED = "OBSTRUCTED"


@dataclass(frozen=True)
class DeadlockWitness:
    marking: Marking
    node: Marking
    y: FiringVector


@dataclass
class Verdict:
    nonblocking: bool
    reason: str
    witness: Marking | None = None
    via: tuple[Marking, FiringVector] | None = None
    stats: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)


def _space(plant, partition, mk, cache, budget):
    if cache is not None and mk in cache:
        return cache[mk]
    space = implicit_space(plant.net, partition, mk, budget)
    if cache is not None:
        cache[mk] = space
    return space


def _coreachable_milp(plant: Plant, partition: BasisPartition, mb: Marking) -> bool:
    """Feasibility of ``mb + C_I y = M``, ``M >= 0``, ``M`` final, ``y`` integral."""
    cols = implicit_columns(plant.net, partition)
    n_i = len(cols)
    if n_i == 0:
        return plant.final.contains(mb)
    ci = np.array(cols, dtype=float).T  # m x n_I
    mb_arr = np.array(mb, dtype=float)
    nonneg = LinearConstraint(ci, lb=-mb_arr, ub=np.inf)

    def feasible(extra):
        res = milp(
            c=np.zeros(n_i),
            constraints=[nonneg, *extra],
            integrality=np.ones(n_i),
            bounds=Bounds(0, np.inf),
        )
        return res.status == 0

    final = plant.final
    if isinstance(final, GmecFinal):
        w = np.array(final.w, dtype=float)
        row = (w @ ci).reshape(1, -1)
        return feasible([LinearConstraint(row, lb=-np.inf, ub=final.k - w @ mb_arr)])
    for mf in sorted(final.markings):
        rhs = np.array(mf, dtype=float) - mb_arr
        if feasible([LinearConstraint(ci, lb=rhs, ub=rhs)]):
            return True
    return False


def i_coreachable_set(
    graph: BasisGraph,
    plant: Plant,
    backend: str = "enumerate",
    cache: dict | None = None,
    budget: int = DEFAULT_BUDGET,
) -> frozenset[Marking]:
    """Nodes whose implicit reach contains a final marking.

    ``backend="enumerate"`` scans the (finite) implicit reach of each node;
    ``backend="milp"`` solves the integer feasibility problem instead.
    """
    if cache is None:
        cache = {}
    out = set()
    for mb in graph.nodes:
        if backend == "enumerate":
            reach = _space(plant, graph.partition, mb, cache, budget).values()
            hit = any(plant.final.contains(mk) for mk in reach)
        elif backend == "milp":
            hit = _coreachable_milp(plant, graph.partition, mb)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        if hit:
            out.add(mb)
    return frozenset(out)


def is_unobstructed(graph: BasisGraph, ico) -> Marking | None:
    """None when every node reaches ``ico`` in the graph, else the smallest node that cannot."""
    index = {mk: i for i, mk in enumerate(graph.nodes)}
    preds: dict[int, list[int]] = {i: [] for i in range(len(graph.nodes))}
    for s, _, d in graph.edges:
        preds[d].append(s)
    seen = {index[mk] for mk in ico}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    stuck = [graph.nodes[i] for i in range(len(graph.nodes)) if i not in seen]
    return min(stuck) if stuck else None


def dead_markings(
    plant: Plant,
    partition: BasisPartition,
    graph: BasisGraph,
    cache: dict | None = None,
    budget: int = DEFAULT_BUDGET,
) -> dict[Marking, DeadlockWitness]:
    """Every dead marking found by maximal implicit firing from each node."""
    found: dict[Marking, DeadlockWitness] = {}
    for w in _scan_dead(plant, partition, graph, cache, budget):
        found.setdefault(w.marking, w)
    return found


def _scan_dead(plant, partition, graph, cache, budget):
    net = plant.net
    # Discovery order (initial marking first) is deterministic for a given plant.
    for mb in graph.nodes:
        space = _space(plant, partition, mb, cache, budget)
        for y in sorted(_extremal(space, maximal=True)):
            mk = space[y]
            # No implicit transition is enabled after a maximal vector, so only
            # explicit ones could fire; testing the whole net is equivalent.
            if is_dead(net, mk):
                yield DeadlockWitness(mk, mb, y)


def nonfinal_deadlocks(
    plant: Plant,
    partition: BasisPartition,
    graph: BasisGraph,
    all_deadlocks: bool = False,
    deterministic: bool = False,
    cache: dict | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[DeadlockWitness]:
    """Reachable dead markings outside the final set.

    Stops at the first witness in scan order unless ``all_deadlocks`` is set.
    With ``deterministic`` the whole scan runs and the lexicographically
    smallest witness is returned. An empty list means there are none.
    """
    found: dict[Marking, DeadlockWitness] = {}
    for w in _scan_dead(plant, partition, graph, cache, budget):
        if plant.final.contains(w.marking) or w.marking in found:
            continue
        found[w.marking] = w
        if not (all_deadlocks or deterministic):
            break
    ordered = [found[k] for k in sorted(found)]
    if deterministic and not all_deadlocks:
        return ordered[:1]
    return ordered


def verify_nonblocking(
    plant: Plant,
    partition: BasisPartition,
    budget: int = DEFAULT_BUDGET,
    all_deadlocks: bool = False,
    deterministic: bool = False,
    backend: str = "enumerate",
) -> Verdict:
    """Decide nonblockingness of a bounded plant without building its reachability graph."""
    require_valid_partition(plant.net, partition)
    cache: dict = {}
    phase_ms = {"brg": 0.0, "deadlock": 0.0, "ico": 0.0, "unobstructed": 0.0}
    stats = {"phase_ms": phase_ms}

    t0 = time.perf_counter()
    graph = build_minimax_brg(plant, partition, budget=budget, cache=cache)
    phase_ms["brg"] = (time.perf_counter() - t0) * 1e3
    stats["minimax_nodes"] = len(graph.nodes)
    stats["minimax_edges"] = len(graph.edges)
    stats["ico_count"] = None

    notes = []
    if is_dead(plant.net, plant.m0):
        kind = "final" if plant.final.contains(plant.m0) else "non-final"
        notes.append(f"initial marking is dead and {kind}")

    t0 = time.perf_counter()
    deadlocks = nonfinal_deadlocks(
        plant, partition, graph, all_deadlocks, deterministic, cache, budget
    )
    phase_ms["deadlock"] = (time.perf_counter() - t0) * 1e3
    stats["dead_found"] = len(deadlocks)
    if deadlocks:
        w = deadlocks[0]
        if all_deadlocks:
            stats["deadlocks"] = [d.marking for d in deadlocks]
        return Verdict(False, NON_FINAL_DEADLOCK, w.marking, (w.node, w.y), stats, notes)

    t0 = time.perf_counter()
    ico = i_coreachable_set(graph, plant, backend, cache, budget)
    phase_ms["ico"] = (time.perf_counter() - t0) * 1e3
    stats["ico_count"] = len(ico)

    t0 = time.perf_counter()
    stuck = is_unobstructed(graph, ico)
    phase_ms["unobstructed"] = (time.perf_counter() - t0) * 1e3
    if stuck is not None:
        return Verdict(False, OBSTRUCTED, stuck, None, stats, notes)
    return Verdict(True, ALL_CHECKS_PASSED, None, None, stats, notes)


def check_witness(plant: Plant, partition: BasisPartition, verdict: Verdict) -> bool:
    """Independently re-check a verdict's witness against the plant."""
    if verdict.reason == ALL_CHECKS_PASSED:
        return verdict.nonblocking and verdict.witness is None
    if verdict.reason == NON_FINAL_DEADLOCK:
        mk = verdict.witness
        return is_dead(plant.net, mk) and not plant.final.contains(mk)
    if verdict.reason == OBSTRUCTED:
        graph = build_minimax_brg(plant, partition)
        if verdict.witness not in graph.node_set():
            return False
        ico = i_coreachable_set(graph, plant)
        return not (forward_closure(graph, verdict.witness) & ico)
    return False


def forward_closure(graph: BasisGraph, start: Marking) -> frozenset[Marking]:
    """Nodes reachable from ``start`` in the graph, ``start`` included."""
    succ = graph.successors()
    root = graph.nodes.index(start)
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for _, d in succ[v]:
            if d not in seen:
                seen.add(d)
                queue.append(d)
    return frozenset(graph.nodes[i] for i in seen)
