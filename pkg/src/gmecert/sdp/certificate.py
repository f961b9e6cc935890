"""Dual certificates: solving, repairing and independently verifying them.

A certificate ``(z, y)`` is feasible for the dual

    beta = max z + sum_r c_r y_r
    s.t.   M = C - z E - sum_r y_r F_r >= 0,   y <= 0,

and by weak duality ``beta`` then lower-bounds the primal optimum. The
block structure of the problem turns ``M >= 0`` into
``y_a + y_b >= -1`` for each target pair plus a PSD condition on the d-block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from . import ipm
from .problem import SdpProblem

SOUND_TOL = 1e-9
REPAIR_MARGIN = 1e-12


@dataclass(frozen=True)
class DualCertificate:
    """Dual point with its recomputed slacks.

    ``matrix_slack`` is the largest eigenvalue of ``-M`` and ``scalar_slack``
    the worst sign or pair violation; both are <= 0 for a sound certificate.
    """

    z: float
    y: tuple[float, ...]
    beta: float
    matrix_slack: float
    scalar_slack: float
    primal_estimate: float | None = None
    iterations: int = 0
    converged: bool = True
    notes: tuple[str, ...] = ()

    @property
    def gap(self) -> float | None:
        """Estimated duality gap from the solver's primal iterate."""
        return None if self.primal_estimate is None else self.primal_estimate - self.beta

    def gradient(self, j: int) -> float:
        """``d beta / d b_j`` for constraint ``j`` (0-based): ``y_{2j-1} - y_{2j}``."""
        return self.y[2 * j] - self.y[2 * j + 1]

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": "gmecert.dual_certificate/1",
            "z": self.z,
            "y": list(self.y),
            "beta": self.beta,
            "matrix_slack": self.matrix_slack,
            "scalar_slack": self.scalar_slack,
            "primal_estimate": self.primal_estimate,
            "iterations": self.iterations,
            "converged": self.converged,
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def certificate_from_json(data: Mapping[str, Any]) -> DualCertificate:
    return DualCertificate(
        float(data["z"]), tuple(float(v) for v in data["y"]), float(data["beta"]),
        float(data.get("matrix_slack", 0.0)), float(data.get("scalar_slack", 0.0)),
        data.get("primal_estimate"), int(data.get("iterations", 0)),
        bool(data.get("converged", True)), tuple(data.get("notes", ())),
    )


def dual_matrix(problem: SdpProblem, z: float, y) -> np.ndarray:
    (E, _), = problem.eq
    m = problem.objective - z * E
    for (F, _), yr in zip(problem.ineq, y):
        m = m - yr * F
    return (m + m.conj().T) / 2


def dual_objective(problem: SdpProblem, z: float, y) -> float:
    (_, e), = problem.eq
    return float(z * e + sum(c * yr for (_, c), yr in zip(problem.ineq, y)))


@dataclass
class SlackReport:
    min_eigenvalue: float
    max_y: float
    min_pair_sum: float
    recomputed_beta: float
    claimed_beta: float
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> dict[str, Any]:
        return dict(self.__dict__)


def verify_dual_certificate(problem: SdpProblem, cert: DualCertificate,
                            tol: float = SOUND_TOL) -> tuple[bool, SlackReport]:
    """Recompute dual feasibility and objective from scratch."""
    y = np.asarray(cert.y, dtype=float)
    violations = []
    if y.shape != (len(problem.ineq),):
        return False, SlackReport(float("nan"), float("nan"), float("nan"), float("nan"),
                                  cert.beta, [f"y has length {y.size}, expected {len(problem.ineq)}"])
    lam = float(np.linalg.eigvalsh(dual_matrix(problem, cert.z, y)).min())
    max_y = float(y.max(initial=-np.inf))
    pairs = [y[a] + y[b] for a, b in problem.pair_rows()]
    min_pair = float(min(pairs)) if pairs else 0.0
    beta = dual_objective(problem, cert.z, y)
    if lam < -tol:
        violations.append(f"dual matrix has eigenvalue {lam:.3e}")
    if max_y > tol:
        violations.append(f"sign constraint violated: max y = {max_y:.3e}")
    if min_pair < -1 - tol:
        violations.append(f"pair constraint violated: min y_a + y_b = {min_pair:.6f}")
    if cert.beta > beta + tol * max(1.0, abs(beta)):
        violations.append(f"claimed beta {cert.beta} exceeds recomputed {beta}")
    if not np.isfinite(beta):
        violations.append("non-finite objective")
    return not violations, SlackReport(lam, max_y, min_pair, beta, cert.beta, violations)


def _standard_form(problem: SdpProblem):
    """Stack rows for the IPM, merging ``(F, c)``/``(-F, -c)`` pairs into equalities.

    Returns matrices, rhs, inequality mask and a map from stacked row to the
    problem's rows (``("eq", k)``, ``("ineq", r)`` or ``("pair", r1, r2)``).
    """
    mats, rhs, mask, rows = [], [], [], []
    used = set()
    ineq = problem.ineq
    for r in range(0, len(ineq) - 1):
        if r in used or r + 1 in used:
            continue
        (f1, c1), (f2, c2) = ineq[r], ineq[r + 1]
        if c1 == -c2 and np.array_equal(f1, -f2):
            mats.append(f1); rhs.append(c1); mask.append(False); rows.append(("pair", r, r + 1))
            used.update((r, r + 1))
    for r, (f, c) in enumerate(ineq):
        if r not in used:
            mats.append(f); rhs.append(c); mask.append(True); rows.append(("ineq", r))
    for k, (e, c) in enumerate(problem.eq):
        mats.append(e); rhs.append(c); mask.append(False); rows.append(("eq", k))
    return np.array(mats), np.array(rhs, dtype=float), np.array(mask), rows


def repair(problem: SdpProblem, z: float, y: np.ndarray) -> tuple[float, np.ndarray, list[str]]:
    """Project a near-feasible dual point onto the feasible set.

    Clips ``y`` to be non-positive, rescales target pairs whose sum drops
    below -1, then lowers ``z`` until the dual matrix is positive semidefinite.
    """
    notes = []
    y = np.minimum(np.asarray(y, dtype=float), 0.0)
    for a, b in problem.pair_rows():
        tot = y[a] + y[b]
        if tot < -1:
            y[a] /= -tot
            y[b] /= -tot
            notes.append(f"rescaled target pair ({a}, {b})")
    lam = float(np.linalg.eigvalsh(dual_matrix(problem, z, y)).min())
    if lam < REPAIR_MARGIN:
        shift = REPAIR_MARGIN - lam
        z -= shift
        notes.append(f"shifted z by {-shift:.3e}")
    return z, y, notes


def solve_dual(problem: SdpProblem, tol: float = 1e-10, max_iter: int = 150) -> DualCertificate:
    """Solve the dual with the in-repo IPM and return a repaired, sound certificate."""
    mats, rhs, mask, rows = _standard_form(problem)
    res = ipm.solve(problem.objective, mats, rhs, mask, tol=tol, max_iter=max_iter)
    y = np.zeros(len(problem.ineq))
    z = 0.0
    for val, row in zip(res.y, rows):
        if row[0] == "pair":
            # y_{+} - y_{-} = w with both entries non-positive
            y[row[1]] = min(val, 0.0)
            y[row[2]] = min(-val, 0.0)
        elif row[0] == "ineq":
            y[row[1]] = val
        else:
            z = float(val)
    z, y, notes = repair(problem, z, y)
    if not res.converged:
        notes.append(f"solver stopped after {res.iterations} iterations without meeting tolerance")
    beta = dual_objective(problem, z, y)
    lam = float(np.linalg.eigvalsh(dual_matrix(problem, z, y)).min())
    pairs = [y[a] + y[b] for a, b in problem.pair_rows()]
    scalar = max([float(y.max(initial=-np.inf))] + [-1 - p for p in pairs])
    return DualCertificate(
        z, tuple(float(v) for v in y), beta, -lam, scalar,
        res.primal_objective, res.iterations, res.converged, tuple(notes),
    )
