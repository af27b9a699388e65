from ._core import (
    ConvergenceError,
    DomainError,
    ResourceError,
    binom,
    coefficient_A,
    expectation,
    fit_check,
    ghz_nonlocality_sum,
    hyper2_interval,
    local_bound,
    mabk_enumerated_bound,
    max_violation,
    minimal_NK,
    minimal_Nk,
    nonlocality_sum,
    optimal_polygamous,
    pure_family_search,
    run_cli,
    solve_max_min,
    solve_sum_objective,
    sym_local_bound,
    verify_n2,
)

__all__ = [name for name in dir() if not name.startswith("_")]
