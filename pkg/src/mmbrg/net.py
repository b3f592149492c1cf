"""Place/transition nets, markings, basis partitions and final-marking sets.

Markings and firing vectors are plain tuples of ints, ordered by the
net's place order (resp. the partition's implicit-transition order).
Tuples compare lexicographically, which is the canonical marking order.
"""

from __future__ import annotations

import struct
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Marking = tuple[int, ...]
FiringVector = tuple[int, ...]

U32_MAX = 2**32 - 1
I64_MAX = 2**63 - 1


class NetError(ValueError):
    """Malformed input: unknown ids, dimension mismatches, bad partitions."""


class ContractError(RuntimeError):
    """An operation was called outside its precondition."""


class BudgetExceeded(RuntimeError):
    """An exploration exceeded its budget; the plant is likely unbounded."""


def _check_i64(value: int) -> int:
    if not -I64_MAX - 1 <= value <= I64_MAX:
        raise OverflowError(f"integer {value} exceeds the 64-bit range")
    return value


def encode_marking(m: Sequence[int]) -> bytes:
    """Fixed-width little-endian u32 encoding, one entry per place."""
    for c in m:
        if not 0 <= c <= U32_MAX:
            raise OverflowError(f"token count {c} outside the supported u32 range")
    return struct.pack(f"<{len(m)}I", *m)


def decode_marking(data: bytes) -> Marking:
    if len(data) % 4:
        raise ValueError("encoded marking length must be a multiple of 4")
    return struct.unpack(f"<{len(data) // 4}I", data)


@dataclass(frozen=True)
class PetriNet:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    pre: tuple[tuple[int, ...], ...]  # m x n
    post: tuple[tuple[int, ...], ...]  # m x n
    _tindex: dict = field(init=False, repr=False, compare=False, hash=False)
    _pre_cols: tuple = field(init=False, repr=False, compare=False, hash=False)
    _delta_cols: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        places = tuple(self.places)
        transitions = tuple(self.transitions)
        pre = tuple(tuple(int(v) for v in row) for row in self.pre)
        post = tuple(tuple(int(v) for v in row) for row in self.post)
        m, n = len(places), len(transitions)
        if m < 1:
            raise NetError("at least one place required")
        if n < 1:
            raise NetError("at least one transition required")
        for kind, ids in (("place", places), ("transition", transitions)):
            seen = set()
            for x in ids:
                if x in seen:
                    raise NetError(f"duplicate {kind} id {x!r}")
                seen.add(x)
        if set(places) & set(transitions):
            raise NetError("place and transition ids must be distinct")
        for name, mat in (("pre", pre), ("post", post)):
            if len(mat) != m or any(len(row) != n for row in mat):
                raise NetError(f"{name} matrix must be {m}x{n}")
            for row in mat:
                for v in row:
                    if v < 0:
                        raise NetError(f"negative arc weight in {name}")
                    _check_i64(v)
        object.__setattr__(self, "places", places)
        object.__setattr__(self, "transitions", transitions)
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "post", post)
        object.__setattr__(self, "_tindex", {t: j for j, t in enumerate(transitions)})
        object.__setattr__(
            self, "_pre_cols", tuple(tuple(pre[i][j] for i in range(m)) for j in range(n))
        )
        object.__setattr__(
            self,
            "_delta_cols",
            tuple(tuple(post[i][j] - pre[i][j] for i in range(m)) for j in range(n)),
        )

    @property
    def m(self) -> int:
        return len(self.places)

    @property
    def n(self) -> int:
        return len(self.transitions)

    @property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """C = post - pre, as an m x n matrix."""
        return tuple(zip(*self._delta_cols))

    def index(self, t: str) -> int:
        try:
            return self._tindex[t]
        except KeyError:
            raise NetError(f"unknown transition {t!r}") from None

    def pre_col(self, t: str) -> tuple[int, ...]:
        return self._pre_cols[self.index(t)]

    def post_col(self, t: str) -> tuple[int, ...]:
        j = self.index(t)
        return tuple(row[j] for row in self.post)

    def delta_col(self, t: str) -> tuple[int, ...]:
        return self._delta_cols[self.index(t)]

    def check_marking(self, m: Sequence[int]) -> Marking:
        m = tuple(m)
        if len(m) != self.m:
            raise NetError(f"marking has length {len(m)}, net has {self.m} places")
        if any(c < 0 for c in m):
            raise NetError("marking entries must be nonnegative")
        return m

    def marking(self, counts: dict[str, int] | None = None, **kw: int) -> Marking:
        """Build a marking from ``place=count`` pairs; omitted places are 0."""
        counts = dict(counts or {}, **kw)
        pos = {p: i for i, p in enumerate(self.places)}
        out = [0] * self.m
        for p, c in counts.items():
            if p not in pos:
                raise NetError(f"unknown place {p!r}")
            out[pos[p]] = c
        return self.check_marking(out)


def is_enabled(net: PetriNet, m: Marking, t: str) -> bool:
    pre = net.pre_col(t)
    return all(a >= b for a, b in zip(m, pre))


def fire(net: PetriNet, m: Marking, t: str) -> Marking:
    if not is_enabled(net, m, t):
        raise ContractError(f"transition {t!r} is not enabled at {list(m)}")
    return tuple(_check_i64(a + d) for a, d in zip(m, net.delta_col(t)))


def is_dead(net: PetriNet, m: Marking) -> bool:
    return not any(all(a >= b for a, b in zip(m, col)) for col in net._pre_cols)


@dataclass(frozen=True)
class BasisPartition:
    """Explicit transitions ``T_E`` and the ordered implicit list ``T_I``.

    The implicit order fixes the indices of every firing vector.
    """

    explicit: frozenset[str]
    implicit: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "explicit", frozenset(self.explicit))
        object.__setattr__(self, "implicit", tuple(self.implicit))

    @classmethod
    def from_explicit(cls, net: PetriNet, explicit: Iterable[str]) -> "BasisPartition":
        """Partition with the given explicit set; the rest is implicit in net order."""
        explicit = frozenset(explicit)
        for t in explicit:
            net.index(t)
        return cls(explicit, tuple(t for t in net.transitions if t not in explicit))

    @property
    def n_implicit(self) -> int:
        return len(self.implicit)

    def explicit_ordered(self, net: PetriNet) -> tuple[str, ...]:
        return tuple(t for t in net.transitions if t in self.explicit)

    def check_covers(self, net: PetriNet) -> None:
        imp = set(self.implicit)
        if len(imp) != len(self.implicit):
            raise NetError("implicit list contains duplicates")
        overlap = imp & self.explicit
        if overlap:
            raise NetError(f"transitions both explicit and implicit: {sorted(overlap)}")
        covered = imp | self.explicit
        unknown = covered - set(net.transitions)
        if unknown:
            raise NetError(f"unknown transitions in partition: {sorted(unknown)}")
        missing = set(net.transitions) - covered
        if missing:
            raise NetError(f"transitions missing from partition: {sorted(missing)}")


def validate_partition(net: PetriNet, partition: BasisPartition) -> list[str] | None:
    """Return None if the implicit sub-net is acyclic, else one directed cycle.

    The cycle is a list of alternating place/transition ids whose first
    element is repeated at the end, e.g. ``['p1', 't1', 'p2', 't2', 'p1']``.
    """
    partition.check_covers(net)
    succ: dict[str, list[str]] = {}
    nodes: list[str] = list(net.places) + list(partition.implicit)
    for p in net.places:
        succ[p] = []
    for t in partition.implicit:
        succ[t] = []
    for t in partition.implicit:
        j = net.index(t)
        for i, p in enumerate(net.places):
            if net.pre[i][j] > 0:
                succ[p].append(t)
            if net.post[i][j] > 0:
                succ[t].append(p)

    # Kahn's algorithm; whatever survives lies on or behind a cycle.
    indeg = {v: 0 for v in nodes}
    for v in nodes:
        for w in succ[v]:
            indeg[w] += 1
    queue = deque(v for v in nodes if indeg[v] == 0)
    removed = set()
    while queue:
        v = queue.popleft()
        removed.add(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(removed) == len(nodes):
        return None

    # Residual nodes all keep a residual predecessor; walk backwards to a repeat.
    pred: dict[str, list[str]] = {v: [] for v in nodes}
    for v in nodes:
        for w in succ[v]:
            pred[w].append(v)
    rest = [v for v in nodes if v not in removed]
    path, pos = [], {}
    v = rest[0]
    while v not in pos:
        pos[v] = len(path)
        path.append(v)
        v = next(u for u in pred[v] if u not in removed)
    cycle = list(reversed(path[pos[v]:]))
    # Start at the first-declared place on the cycle.
    porder = {p: i for i, p in enumerate(net.places)}
    k = min((i for i, x in enumerate(cycle) if x in porder), key=lambda i: porder[cycle[i]])
    cycle = cycle[k:] + cycle[:k]
    cycle.append(cycle[0])
    return cycle


def require_valid_partition(net: PetriNet, partition: BasisPartition) -> None:
    cycle = validate_partition(net, partition)
    if cycle is not None:
        raise NetError("implicit sub-net is not acyclic: " + " -> ".join(cycle))


def implicit_columns(net: PetriNet, partition: BasisPartition) -> tuple[tuple[int, ...], ...]:
    """Columns of C_I, one per implicit transition in partition order."""
    return tuple(net.delta_col(t) for t in partition.implicit)


def apply_implicit(
    net: PetriNet, partition: BasisPartition, m: Marking, y: FiringVector
) -> Marking:
    """m + C_I y, without any sign check."""
    if len(y) != partition.n_implicit:
        raise NetError(f"firing vector has length {len(y)}, expected {partition.n_implicit}")
    out = list(m)
    for col, k in zip(implicit_columns(net, partition), y):
        if k:
            for i, d in enumerate(col):
                if d:
                    out[i] = _check_i64(out[i] + k * d)
    return tuple(out)


def acyclic_state_equation_reach(
    net: PetriNet, partition: BasisPartition, m: Marking, y: FiringVector
) -> Marking | None:
    """Marking reached from ``m`` by an implicit sequence with count vector ``y``.

    On an acyclic implicit sub-net a realizing sequence exists exactly when
    ``m + C_I y`` is nonnegative, so no search is needed. Returns None when
    no such sequence exists.
    """
    if validate_partition(net, partition) is not None:
        raise ContractError("state-equation reachability needs an acyclic implicit sub-net")
    if any(k < 0 for k in y):
        raise NetError("firing vector entries must be nonnegative")
    out = apply_implicit(net, partition, m, y)
    if any(c < 0 for c in out):
        return None
    return out


@dataclass(frozen=True)
class ExplicitFinal:
    markings: frozenset[Marking]

    def __post_init__(self):
        object.__setattr__(self, "markings", frozenset(tuple(x) for x in self.markings))

    def contains(self, m: Marking) -> bool:
        return tuple(m) in self.markings

    def dimension_ok(self, m: int) -> bool:
        return all(len(x) == m for x in self.markings)


@dataclass(frozen=True)
class GmecFinal:
    """Final set {M | w.M <= k}."""

    w: tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(v) for v in self.w))

    def contains(self, m: Marking) -> bool:
        return sum(a * b for a, b in zip(self.w, m)) <= self.k

    def dimension_ok(self, m: int) -> bool:
        return len(self.w) == m


FinalSpec = ExplicitFinal | GmecFinal


def is_final(final: FinalSpec, m: Marking) -> bool:
    return final.contains(m)


@dataclass(frozen=True)
class Plant:
    net: PetriNet
    m0: Marking
    final: FinalSpec

    def __post_init__(self):
        object.__setattr__(self, "m0", self.net.check_marking(self.m0))
        for c in self.m0:
            if c > U32_MAX:
                raise NetError(f"token count {c} outside the supported u32 range")
        if not self.final.dimension_ok(self.net.m):
            raise NetError(f"final-set dimension does not match the net's {self.net.m} places")
