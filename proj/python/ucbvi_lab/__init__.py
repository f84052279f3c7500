"""Tabular finite-horizon RL laboratory.

Optimistic value iteration agents (count-only and variance-aware exploration
bonuses, each with a refined and an original constant set), an MVP-style
doubling baseline, exact-regret experiments and regret bound evaluation.
The heavy lifting lives in the compiled extension module.
"""

from ._core import (
    Policy,
    TabularMdp,
    ValueFunctions,
    bernstein_bernoulli_bound,
    bonus_ch,
    empirical_next_value_variance,
    evaluate_policy,
    exact_value_iteration,
    load_mdp,
    log_term,
    random_mdp,
    ratio_table,
    riverswim,
    rng_algorithm_id,
    run_experiment,
    save_mdp,
    theorem1_bound,
    theorem2_bound,
    __version__,
)

__all__ = [
    "Policy",
    "TabularMdp",
    "ValueFunctions",
    "bernstein_bernoulli_bound",
    "bonus_ch",
    "empirical_next_value_variance",
    "evaluate_policy",
    "exact_value_iteration",
    "load_mdp",
    "log_term",
    "random_mdp",
    "ratio_table",
    "riverswim",
    "rng_algorithm_id",
    "run_experiment",
    "save_mdp",
    "theorem1_bound",
    "theorem2_bound",
    "__version__",
]
