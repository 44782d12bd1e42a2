"""Approximation algorithms for cycle-star hub network design."""

from .instance import (
    HubCycle,
    Instance,
    build_cycle_metric,
    evaluate_assignment,
    generate_instance,
    read_instance,
    shortest_path_edges,
    validate_instance,
    write_instance,
)
from .lrp import build_lrp, solve_lp, solve_lrp, split_objective
from .monge import is_monge, monge_order, path_metric, theta_coefficients, verify_sandwich
from .rounding import (
    breakpoints,
    dependent_rounding,
    derandomize_independent,
    expected_independent_cost,
    independent_rounding,
    pi_orders,
)
from .solvers import algorithm4, check_assumption1, combined, exact_bruteforce
from .transport import northwest_corner, nwcr_joint, plan_cost, solve_htp_exact

__version__ = "0.1.0"
