"""Online scheduling of direct-link transfers under per-node degree
bounds, with exact-rational objectives and dual certificates."""

from .dualfit import (
    DualBoundsReport,
    DualFeasibilityReport,
    DualSolution,
    Trace,
    build_dual_general,
    build_dual_simple,
    build_trace,
    check_dual_bounds,
    verify_dual_feasibility,
)
from .engine import (
    Metrics,
    ScheduleViolation,
    SystemState,
    compute_metrics,
    kernel_available,
    simulate,
    verify_schedule,
)
from .generators import gen_lower_bound, gen_random
from .model import (
    InputError,
    Instance,
    Node,
    Rational,
    Request,
    Schedule,
    SlotAssignment,
    format_rational,
    instance_to_json,
    parse_instance,
    parse_rational,
    parse_schedule,
    schedule_to_json,
    validate_instance,
)
from .oracle import OracleSizeError, brute_force_opt, explicit_lb_opt_schedule
from .schedulers import POLICIES, hdf_step, release_greedy_step
from .transforms import stretch_schedule, unit_reduction

__version__ = "0.1.0"

__all__ = [
    "DualBoundsReport",
    "DualFeasibilityReport",
    "DualSolution",
    "InputError",
    "Instance",
    "Metrics",
    "Node",
    "OracleSizeError",
    "POLICIES",
    "Rational",
    "Request",
    "Schedule",
    "ScheduleViolation",
    "SlotAssignment",
    "SystemState",
    "Trace",
    "brute_force_opt",
    "build_dual_general",
    "build_dual_simple",
    "build_trace",
    "check_dual_bounds",
    "compute_metrics",
    "explicit_lb_opt_schedule",
    "format_rational",
    "gen_lower_bound",
    "gen_random",
    "hdf_step",
    "instance_to_json",
    "kernel_available",
    "parse_instance",
    "parse_rational",
    "parse_schedule",
    "release_greedy_step",
    "schedule_to_json",
    "simulate",
    "stretch_schedule",
    "unit_reduction",
    "validate_instance",
    "verify_dual_feasibility",
    "verify_schedule",
]
