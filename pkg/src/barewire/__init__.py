"""Surface-wave channel model of a bare round conductor."""

__version__ = "0.1.0"

from barewire.capacity import CapacityReport, LinkBudget, awgn_capacity
from barewire.channel import (BandGrid, average_gain_db, fit_loglog, impulse_response,
                              rms_delay_spread, transfer_function)
from barewire.dispersion import (ConvergenceError, DispersionSolution, DispersionSweep, MediumParams,
                                 SolverOptions, residual, solve_dispersion, sweep)
from barewire.propagation import field_extension_radius, group_velocity, power_fraction
from barewire.stats import anderson_darling_normal, build_ensemble, linreg

__all__ = [
    "BandGrid", "CapacityReport", "ConvergenceError", "DispersionSolution", "DispersionSweep", "LinkBudget",
    "MediumParams", "SolverOptions", "anderson_darling_normal", "average_gain_db", "awgn_capacity",
    "build_ensemble", "field_extension_radius", "fit_loglog", "group_velocity",
    "impulse_response", "linreg", "power_fraction", "residual", "rms_delay_spread",
    "solve_dispersion", "sweep", "transfer_function",
]
