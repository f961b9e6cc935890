"""Lower bounds on unmeasured stabilizer terms via dual SDP certificates."""

from .certificate import (
    DualCertificate,
    SlackReport,
    certificate_from_json,
    dual_matrix,
    dual_objective,
    solve_dual,
    verify_dual_certificate,
)
from .edges import bound_edge, bound_unmeasured_edges
from .problem import SdpError, SdpProblem, build_lower_bound_problem, problem_from_json, support_reduce

__all__ = [
    "DualCertificate",
    "SdpError",
    "SdpProblem",
    "SlackReport",
    "bound_edge",
    "bound_unmeasured_edges",
    "build_lower_bound_problem",
    "certificate_from_json",
    "dual_matrix",
    "dual_objective",
    "problem_from_json",
    "solve_dual",
    "support_reduce",
    "verify_dual_certificate",
]
