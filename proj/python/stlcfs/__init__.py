"""Trajectory planning with time-windowed reach goals among box obstacles."""

from ._core import (
    BoxObstacle,
    Goal,
    PlanResult,
    Scenario,
    Trajectory,
    load_scenario,
    plan,
    propagate,
    read_trajectory_csv,
    rho_exact,
    scenario_from_json,
    signed_distance,
    smooth_max,
    smooth_max_coeffs,
    verify,
    write_trajectory_csv,
)

__all__ = [
    "BoxObstacle",
    "Goal",
    "PlanResult",
    "Scenario",
    "Trajectory",
    "load_scenario",
    "plan",
    "propagate",
    "read_trajectory_csv",
    "rho_exact",
    "scenario_from_json",
    "signed_distance",
    "smooth_max",
    "smooth_max_coeffs",
    "verify",
    "write_trajectory_csv",
]
