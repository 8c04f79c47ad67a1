"""Exact calculus on weighted boundary trees, branch pair bookkeeping, and
a bounded Diophantine scenario verifier."""

from .barks import (
    AdmissibilityError,
    Chain,
    ContractibilityClass,
    DivisorQ,
    FujitaZeroClass,
    bark_divisor,
    capacity,
    chain_determinant,
    classify_contractible,
    classify_fujita_zero,
    maximal_twigs,
)
from .bmy import (
    BMYInstance,
    check_bmy,
    enumerate_quotient_orders,
    fork_22n_determinant,
    local_group_order,
)
from .hn import (
    BoundaryConventionError,
    BranchPair,
    HNPair,
    HNSequence,
    derived_params,
    gamma_prime_a,
    gamma_prime_b,
    joint_multiplicities,
    multiplicity_sequence,
)
from .registry import load_registry, run_registry
from .resolution import (
    NoAsymptoteViolation,
    ReducedScene,
    Scene,
    Simulator,
    Token,
    build_resolution,
    check_basic_inequality,
    elementary_transformation,
    minimalize,
    sum_ei,
    two_reduction,
)
from .search import BudgetExceededError, Scenario, hirzebruch_genus_defect, solve
from .trees import (
    BlowKind,
    InvalidSubsetError,
    NotContractibleError,
    Tag,
    WeightedTree,
    blow_down,
    blow_up,
    build_tree,
    chain_tree,
    determinant,
    intersection_matrix,
    kk_plus_t,
    nc_minimalize,
    negative_definite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
