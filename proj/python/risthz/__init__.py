"""RIS-aided THz link simulator: Python bindings to the C++ core."""

from ._core import (
    RunConfig,
    absorption_coefficient,
    load_config,
    one_element_sinr,
    optimize_trial,
    parse_config,
    run_oracle_checks,
    run_runtime,
    run_ser,
    run_throughput,
    sa_gap,
    stationary_values,
    transmittance,
)

__all__ = [
    "RunConfig",
    "absorption_coefficient",
    "load_config",
    "one_element_sinr",
    "optimize_trial",
    "parse_config",
    "run_oracle_checks",
    "run_runtime",
    "run_ser",
    "run_throughput",
    "sa_gap",
    "stationary_values",
    "transmittance",
]
