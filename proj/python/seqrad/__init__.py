"""Sequential complexity of finite function classes.

Thin wrapper over the compiled module: exact values at finite round counts,
the large-sample limit via a monotone grid scheme, the Gaussian baseline,
separation-based bounds, and policy simulation.
"""

from _seqrad import (
    SeqradError,
    brute_force_value,
    dp_value,
    heat_upper_bound,
    iid_value,
    pde_value,
    report_json,
    separation_value,
    simulate_constant,
)

__all__ = [
    "SeqradError",
    "brute_force_value",
    "dp_value",
    "heat_upper_bound",
    "iid_value",
    "pde_value",
    "report_json",
    "separation_value",
    "simulate_constant",
]

__version__ = "1.0.0"
