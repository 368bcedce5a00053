"""Dense unit-fraction representations: identities, clearing steps, searches,
counting reports, and the small/big construction pipeline."""

from .analytics import (
    bestposs_check,
    dickman_rho,
    kloosterman_pairs,
    l1_member_exact,
    l1_proxy_count,
    mertens_sum,
    primesums_report,
    smooth_count,
)
from .arith import PrimePower, factor, lcm_upto, p_max, p_star, prime_power_count, prime_powers_upto
from .construct import (
    ConstructionParams,
    ConstructionTrace,
    DESK_PARAMS,
    dense_representation,
    r_window,
    represent_big,
    represent_small,
)
from .identities import Representation, multi_split, split, split_extend, validate
from .lemmas import clear_large, clear_medium, clear_small, inverse_pair, subset_inverse_sum
from .search import (
    LjOutcome,
    LjStatus,
    SearchBounds,
    SearchOutcome,
    Status,
    enumerate_reps,
    lj_member,
    lj_slice,
    m_prime_t,
    m_t,
    max_int_rep,
    t_zero,
)

__version__ = "0.1.0"

__all__ = [
    "ConstructionParams",
    "ConstructionTrace",
    "DESK_PARAMS",
    "LjOutcome",
    "LjStatus",
    "PrimePower",
    "Representation",
    "SearchBounds",
    "SearchOutcome",
    "Status",
    "bestposs_check",
    "clear_large",
    "clear_medium",
    "clear_small",
    "dense_representation",
    "dickman_rho",
    "enumerate_reps",
    "factor",
    "inverse_pair",
    "kloosterman_pairs",
    "l1_member_exact",
    "l1_proxy_count",
    "lcm_upto",
    "lj_member",
    "lj_slice",
    "m_prime_t",
    "m_t",
    "max_int_rep",
    "mertens_sum",
    "multi_split",
    "p_max",
    "p_star",
    "prime_power_count",
    "prime_powers_upto",
    "primesums_report",
    "r_window",
    "represent_big",
    "represent_small",
    "smooth_count",
    "split",
    "split_extend",
    "subset_inverse_sum",
    "t_zero",
    "validate",
    "__version__",
]
