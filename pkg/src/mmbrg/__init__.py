"""Nonblockingness verification of bounded Petri nets with minimax basis reachability graphs."""

from .brg import BasisGraph, build_brg, build_minimax_brg
from .explain import (
    ExplanationSet,
    enumerate_explanations,
    implicit_reach,
    maximal_elements,
    maximal_implicit_vectors,
    minimal_elements,
)
from .net import (
    BasisPartition,
    BudgetExceeded,
    ContractError,
    ExplicitFinal,
    GmecFinal,
    NetError,
    PetriNet,
    Plant,
    acyclic_state_equation_reach,
    fire,
    is_dead,
    is_enabled,
    is_final,
    validate_partition,
)
from .verify import (
    Verdict,
    i_coreachable_set,
    is_unobstructed,
    nonfinal_deadlocks,
    verify_nonblocking,
)

__version__ = "0.1.0"
