"""Partitions into sums of two squares: exact counts and saddle-point asymptotics."""
from ._kernels import BACKEND
from .errors import NumericalError, ResourceCapError
from .exactcount import (
    PartitionTable,
    difference_exact,
    enumeration_oracle,
    partition_count,
    partition_counts,
)
from .saddle import (
    LogEstimate,
    PhiValue,
    SaddlePoint,
    difference_estimate_log,
    lemma_deriv_reference,
    main_estimate_log,
    phi_log_derivative,
    phi_log_derivative_u,
    prop_p_reference,
    simple_estimate_log,
    solve_saddle,
)
from .twosquares import (
    ConstantApproximation,
    MembershipTable,
    count_members_up_to,
    is_member_by_factorization,
    landau_ramanujan_constant,
    landau_reference,
    sieve_membership,
)

__version__ = "0.1.0"
