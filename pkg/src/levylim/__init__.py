"""levylim: scaled centered jump processes and their Wiener-limit checks.

The package simulates centered compound-Poisson processes (plus optional
diffusion) exactly, scales them in time and amplitude, and verifies three
kinds of limit behavior against closed-form Wiener targets: convergence of
finite-dimensional laws at large scaling times, almost-sure convergence of
log-averaged empirical measures along one realization, and its
integral-average analogue with general weights and time changes.
"""

from .model import (
    JumpLaw,
    LevyModel,
    centered_poisson,
    empirical_cf,
    random_sum,
    theoretical_cf,
    variance_rate,
)
from .simulate import (
    JumpRecord,
    PathGrid,
    RngProvenance,
    UnsupportedForDiffusion,
    build_coupled_path,
    derive_rng,
    exact_sup,
    export_jumps_csv,
    path_value,
    sample_jumps,
    sample_v_values,
    scale_path,
    simulate_wiener,
)
from .conditions import (
    ConditionReport,
    Schedule,
    TimeChange,
    WeightFunction,
    check_schedule,
    check_time_change,
    check_weight,
    default_schedule,
    default_time_change,
    default_weight,
)
from .measures import (
    PathFunctional,
    TargetLaw,
    WeightedSample,
    apply_functional,
    integral_average_measure,
    log_average_measure,
    target_cdf,
    weighted_ks,
    wiener_functional_sample,
)
from .theorems import (
    CheckResult,
    ConditionRefusal,
    ResourceBudgetError,
    TheoremReport,
    audit_moment_bound,
    run_asclt,
    run_cf_check,
    run_fclt_test,
    run_integral_asclt,
    run_wiener_selfcheck,
)

__version__ = "0.1.0"
