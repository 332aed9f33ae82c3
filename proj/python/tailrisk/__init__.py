"""Worst-case tail risk over Wasserstein and phi-divergence ambiguity sets.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._tailrisk import (  # noqa: F401
    EmpiricalSample,
    HedgeConfig,
    NetworkModel,
    NominalModel,
    Phi,
    TailLaw,
    TailRegime,
    TailriskError,
    Weight,
    __version__,
    hill_estimate,
    inflation_diagnostic,
    intermediate_var,
    light_tail_estimate,
    normal_quantile,
    phi_dual_cvar,
    pushforward_losses,
    regime_test,
    risk_measure,
    rpev_dro_cvar,
    sample_cvar,
    simulate_hedging_errors,
    wasserstein_worst_cvar,
    wasserstein_worst_cvar_sample,
    weight_integral,
    worst_case_quantile,
    worst_case_survival,
)
