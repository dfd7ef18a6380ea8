"""Gamma-Gompertz cohort mortality with a drifting log-slope random walk."""

from ._ggdrift import (
    ArgumentError,
    DiagnosticError,
    DomainError,
    SummaryError,
    adf_test,
    cohort_hazard,
    expected_deaths,
    fit_simulated,
    hpd_interval,
    individual_hazard,
    kpss_test,
    laplace_logpdf,
    mdd,
    mdd_percent,
    p_direction,
    p_map,
    p_two_sided,
    posterior_mode,
    simulate,
)

__all__ = [
    "ArgumentError",
    "DiagnosticError",
    "DomainError",
    "SummaryError",
    "adf_test",
    "cohort_hazard",
    "expected_deaths",
    "fit_simulated",
    "hpd_interval",
    "individual_hazard",
    "kpss_test",
    "laplace_logpdf",
    "mdd",
    "mdd_percent",
    "p_direction",
    "p_map",
    "p_two_sided",
    "posterior_mode",
    "simulate",
]
