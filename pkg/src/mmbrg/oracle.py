"""Brute-force ground truth built only from the firing rule.

Nothing here uses the state equation, so these routines can check the
semi-structural pipeline independently.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .explain import ExplanationSet
from .net import (
    BasisPartition,
    BudgetExceeded,
    ExplicitFinal,
    GmecFinal,
    Marking,
    PetriNet,
    Plant,
    fire,
    is_enabled,
    validate_partition,
)

DEFAULT_RG_CAP = 10**6


@dataclass(frozen=True)
class ReachabilityGraph:
    markings: tuple[Marking, ...]  # index 0 is the initial marking
    edges: frozenset[tuple[int, str, int]]

    @property
    def initial(self) -> Marking:
        return self.markings[0]

    def canonical_order(self) -> list[int]:
        return sorted(range(len(self.markings)), key=lambda i: self.markings[i])


@dataclass(frozen=True)
class BlockingClassification:
    reachable: frozenset[Marking]
    blocking: frozenset[Marking]
    dead: frozenset[Marking]
    final: frozenset[Marking]

    @property
    def is_nonblocking(self) -> bool:
        return not self.blocking


def build_reachability_graph(plant: Plant, cap: int = DEFAULT_RG_CAP) -> ReachabilityGraph:
    net = plant.net
    index = {plant.m0: 0}
    markings = [plant.m0]
    edges = set()
    queue = deque([plant.m0])
    while queue:
        mk = queue.popleft()
        src = index[mk]
        for t in net.transitions:
            if not is_enabled(net, mk, t):
                continue
            nxt = fire(net, mk, t)
            dst = index.get(nxt)
            if dst is None:
                dst = len(markings)
                if dst >= cap:
                    raise BudgetExceeded(
                        f"reachability graph exceeds {cap} markings (suspected unbounded plant)"
                    )
                index[nxt] = dst
                markings.append(nxt)
                queue.append(nxt)
            edges.add((src, t, dst))
    return ReachabilityGraph(tuple(markings), frozenset(edges))


def oracle_blocking(
    plant: Plant, cap: int = DEFAULT_RG_CAP, rg: ReachabilityGraph | None = None
) -> BlockingClassification:
    """Classify every reachable marking by backward search from the final ones."""
    if rg is None:
        rg = build_reachability_graph(plant, cap)
    n = len(rg.markings)
    preds: list[list[int]] = [[] for _ in range(n)]
    has_succ = [False] * n
    for s, _, d in rg.edges:
        preds[d].append(s)
        has_succ[s] = True
    final = [i for i, mk in enumerate(rg.markings) if plant.final.contains(mk)]
    # A final marking co-reaches itself through the empty sequence.
    seen = set(final)
    queue = deque(final)
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return BlockingClassification(
        reachable=frozenset(rg.markings),
        blocking=frozenset(rg.markings[i] for i in range(n) if i not in seen),
        dead=frozenset(rg.markings[i] for i in range(n) if not has_succ[i]),
        final=frozenset(rg.markings[i] for i in final),
    )


def blocking_from(plant: Plant, start: Marking, cap: int = DEFAULT_RG_CAP) -> bool:
    """Whether ``start`` is blocking, i.e. reaches no final marking."""
    sub = Plant(plant.net, start, plant.final)
    return not oracle_blocking(sub, cap).final


def implicit_sequence_reach(
    net: PetriNet, partition: BasisPartition, m: Marking, cap: int = DEFAULT_RG_CAP
) -> frozenset[Marking]:
    """Markings reached by firing implicit transitions one at a time from ``m``."""
    seen = {tuple(m)}
    queue = deque(seen)
    while queue:
        mk = queue.popleft()
        for t in partition.implicit:
            if is_enabled(net, mk, t):
                nxt = fire(net, mk, t)
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > cap:
                        raise BudgetExceeded(f"implicit reach exceeds {cap} markings")
                    queue.append(nxt)
    return frozenset(seen)


def brute_force_explanations(
    net: PetriNet,
    partition: BasisPartition,
    m: Marking,
    t: str | None,
    depth_cap: int = 10_000,
) -> ExplanationSet:
    """Explanation vectors found by depth-first search over implicit firing sequences.

    Sequences reaching an already-visited count vector are pruned: the
    marking, hence every continuation, depends only on that vector.
    """
    implicit = partition.implicit
    pre = net.pre_col(t) if t is not None else (0,) * net.m
    zero = (0,) * len(implicit)
    found = set()
    visited = {zero}
    stack = [(tuple(m), zero, 0)]
    while stack:
        mk, y, depth = stack.pop()
        if all(a >= b for a, b in zip(mk, pre)):
            found.add(y)
        for i, ti in enumerate(implicit):
            if not is_enabled(net, mk, ti):
                continue
            if depth + 1 > depth_cap:
                raise BudgetExceeded(f"implicit sequences longer than {depth_cap}")
            y2 = y[:i] + (y[i] + 1,) + y[i + 1:]
            if y2 in visited:
                continue
            visited.add(y2)
            stack.append((fire(net, mk, ti), y2, depth + 1))
    return ExplanationSet(frozenset(found), (tuple(m), t))


@dataclass(frozen=True)
class GenConfig:
    max_places: int = 8
    max_transitions: int = 8
    max_weight: int = 2
    max_tokens: int = 3
    rg_cap: int = 5000
    sink_bias: float = 0.4
    # Chance of leaving a transition explicit even when it could be implicit.
    explicit_bias: float = 0.0
    # Chance that a transition produces as many tokens as it consumes.
    conserve_bias: float = 0.0


def gen_random_plant(
    seed: int, config: GenConfig = GenConfig()
) -> tuple[Plant, BasisPartition] | None:
    """Seeded random bounded plant with a greedy acyclic basis partition.

    Returns None when the drawn net's reachability graph exceeds the cap.
    """
    rng = random.Random(seed)
    m = rng.randint(2, config.max_places)
    n = rng.randint(2, config.max_transitions)
    places = tuple(f"p{i + 1}" for i in range(m))
    transitions = tuple(f"t{j + 1}" for j in range(n))
    pre = [[0] * n for _ in range(m)]
    post = [[0] * n for _ in range(m)]
    for j in range(n):
        for i in rng.sample(range(m), rng.randint(1, min(2, m))):
            pre[i][j] = rng.randint(1, config.max_weight)
        if rng.random() < config.sink_bias:
            continue  # pure sink: consumes only
        if rng.random() < config.conserve_bias:
            for _ in range(sum(pre[i][j] for i in range(m))):
                post[rng.randrange(m)][j] += 1
            continue
        for i in rng.sample(range(m), rng.randint(1, min(2, m))):
            post[i][j] = rng.randint(1, config.max_weight)
    net = PetriNet(places, transitions, pre, post)
    m0 = tuple(rng.randint(0, config.max_tokens) if rng.random() < 0.6 else 0 for _ in range(m))
    if not any(m0):
        m0 = tuple(config.max_tokens if i == 0 else 0 for i in range(m))

    probe = Plant(net, m0, GmecFinal((0,) * m, 0))
    try:
        rg = build_reachability_graph(probe, cap=config.rg_cap)
    except BudgetExceeded:
        return None
    reachable = sorted(rg.markings)

    order = list(transitions)
    rng.shuffle(order)
    implicit: list[str] = []
    for t in order:
        if rng.random() < config.explicit_bias:
            continue
        cand = implicit + [t]
        part = BasisPartition(frozenset(transitions) - set(cand), tuple(cand))
        if validate_partition(net, part) is None:
            implicit.append(t)
    implicit_sorted = tuple(t for t in transitions if t in implicit)
    partition = BasisPartition(frozenset(transitions) - set(implicit), implicit_sorted)

    if rng.random() < 0.5:
        w = tuple(rng.choice((-1, 0, 1, 2)) for _ in range(m))
        anchor = rng.choice(reachable)
        k = sum(a * b for a, b in zip(w, anchor))
        final = GmecFinal(w, k)
    else:
        size = rng.randint(1, max(1, min(4, len(reachable))))
        final = ExplicitFinal(frozenset(rng.sample(reachable, size)))
    return Plant(net, m0, final), partition


def random_corpus(seed: int, count: int, config: GenConfig = GenConfig()):
    """Yield ``(instance_seed, plant, partition)`` for ``count`` accepted draws.

    Instance seeds come from a master RNG so the corpus depends on ``seed`` only.
    """
    master = random.Random(seed)
    produced = 0
    while produced < count:
        sub = master.getrandbits(32)
        got = gen_random_plant(sub, config)
        if got is None:
            continue
        produced += 1
        yield (sub, *got)
