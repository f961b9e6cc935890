"""Linearized lower-bound SDP for absolute Pauli expectation values.

Given targets ``A_1..A_N`` and constraints ``(B_j, b_j, eps_j)`` the primal is

    min  Tr[(1_N (+) 0_d) X]
    s.t. Tr[(0 (+)  B_j) X] <=  b_j + eps_j
         Tr[(0 (+) -B_j) X] <= -b_j + eps_j
         Tr[(-|i><i| (+)  A_i) X] <= 0
         Tr[(-|i><i| (+) -A_i) X] <= 0
         Tr[(0 (+) 1_d) X] = 1,   X >= 0

over ``(N + d) x (N + d)`` Hermitian ``X``. The inequality rows are stored in
the order ``(B_1+, B_1-, ..., B_J+, B_J-, A_1+, A_1-, ..., A_N+, A_N-)`` so
that the dual multiplier of row ``r`` is ``y[r]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np

from ..pauli import PauliError, PauliString, to_dense

SDP_QUBIT_CAP = 8


class SdpError(ValueError):
    pass


def support_reduce(operators: Sequence[PauliString]) -> tuple[list[PauliString], tuple[int, ...]]:
    """Restrict every operator to the union of their supports.

    Returns the restricted operators and the kept qubits (1-based, ascending).
    An empty qubit tuple means every operator is a multiple of the identity.
    """
    if not operators:
        raise SdpError("support_reduce needs at least one operator")
    n = operators[0].n
    if any(p.n != n for p in operators):
        raise SdpError("operators act on different numbers of qubits")
    qubits = tuple(sorted({q for p in operators for q in p.support}))
    if not qubits:
        return list(operators), ()
    return [p.restrict(qubits) for p in operators], qubits


@dataclass(frozen=True)
class Constraint:
    op: PauliString
    value: float
    eps: float = 0.0


@dataclass
class SdpProblem:
    """Inequality-form SDP ``min <C,X> : <F_r,X> <= c_r, <E,X> = 1, X >= 0``."""

    n_targets: int
    d: int
    objective: np.ndarray
    ineq: list[tuple[np.ndarray, float]]
    eq: list[tuple[np.ndarray, float]]
    targets: tuple[PauliString, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    qubits: tuple[int, ...] = ()
    n_qubits: int = 0

    def __post_init__(self) -> None:
        dim = self.objective.shape[0]
        mats = [self.objective] + [f for f, _ in self.ineq] + [e for e, _ in self.eq]
        for m in mats:
            if m.shape != (dim, dim):
                raise SdpError(f"constraint matrix shape {m.shape} != ({dim}, {dim})")
            if not np.allclose(m, m.conj().T, atol=1e-12):
                raise SdpError("constraint matrices must be Hermitian")
        if dim != self.n_targets + self.d:
            raise SdpError("block dimension must equal N + d")

    @property
    def dim(self) -> int:
        return self.objective.shape[0]

    @property
    def n_constraints(self) -> int:
        return len(self.constraints)

    def pair_rows(self) -> list[tuple[int, int]]:
        """Row pairs ``(2(J+i)-1, 2(J+i))`` (0-based) belonging to the targets."""
        base = 2 * self.n_constraints
        return [(base + 2 * i, base + 2 * i + 1) for i in range(self.n_targets)]

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": "gmecert.sdp_problem/1",
            "n_qubits": self.n_qubits,
            "qubits": list(self.qubits),
            "targets": [str(t) for t in self.targets],
            "constraints": [
                {"op": str(c.op), "value": c.value, "eps": c.eps} for c in self.constraints
            ],
        }


def problem_from_json(data: Mapping[str, Any]) -> SdpProblem:
    """Rebuild a problem from :meth:`SdpProblem.to_json` (operators are already reduced)."""
    targets = [PauliString.from_str(s) for s in data["targets"]]
    cons = [
        Constraint(PauliString.from_str(c["op"]), float(c["value"]), float(c.get("eps", 0.0)))
        for c in data["constraints"]
    ]
    prob = build_lower_bound_problem(targets, [(c.op, c.value, c.eps) for c in cons], reduce=False)
    prob.qubits = tuple(data.get("qubits", prob.qubits))
    prob.n_qubits = int(data.get("n_qubits", prob.n_qubits))
    return prob


def _embed(n_targets: int, diag: Mapping[int, float], block: np.ndarray | None, d: int) -> np.ndarray:
    out = np.zeros((n_targets + d, n_targets + d), dtype=complex)
    for i, v in diag.items():
        out[i, i] = v
    if block is not None:
        out[n_targets:, n_targets:] = block
    return out


def build_lower_bound_problem(
    targets: Sequence[PauliString],
    constraints: Sequence[tuple[PauliString, float, float]],
    reduce: bool = True,
    qubit_cap: int = SDP_QUBIT_CAP,
) -> SdpProblem:
    """Linearized primal for ``min sum_i |Tr(A_i rho)|`` under Pauli constraints."""
    if not targets:
        raise SdpError("at least one target operator is required")
    cons = [Constraint(op, float(v), float(e)) for op, v, e in constraints]
    for c in cons:
        if c.eps < 0:
            raise SdpError(f"eps must be non-negative, got {c.eps}")
    ops = list(targets) + [c.op for c in cons]
    for p in ops:
        if not p.is_hermitian:
            raise SdpError(f"operator {p} is not Hermitian")
    n_full = ops[0].n
    if reduce:
        reduced, qubits = support_reduce(ops)
        if not qubits:
            raise SdpError("all operators are proportional to the identity; nothing to bound")
    else:
        if any(p.n != n_full for p in ops):
            raise SdpError("operators act on different numbers of qubits")
        reduced, qubits = ops, tuple(range(1, n_full + 1))
    if len(qubits) > qubit_cap:
        raise SdpError(f"reduced support has {len(qubits)} qubits, cap is {qubit_cap}")
    t_ops = reduced[: len(targets)]
    c_ops = reduced[len(targets):]
    cons = [Constraint(op, c.value, c.eps) for op, c in zip(c_ops, cons)]
    n_t = len(t_ops)
    d = 1 << len(qubits)
    try:
        dense_t = [to_dense(p) for p in t_ops]
        dense_c = [to_dense(c.op) for c in cons]
    except PauliError as exc:
        raise SdpError(str(exc)) from exc

    ineq: list[tuple[np.ndarray, float]] = []
    for c, m in zip(cons, dense_c):
        ineq.append((_embed(n_t, {}, m, d), c.value + c.eps))
        ineq.append((_embed(n_t, {}, -m, d), -c.value + c.eps))
    for i, m in enumerate(dense_t):
        ineq.append((_embed(n_t, {i: -1.0}, m, d), 0.0))
        ineq.append((_embed(n_t, {i: -1.0}, -m, d), 0.0))
    objective = _embed(n_t, {i: 1.0 for i in range(n_t)}, None, d)
    trace = _embed(n_t, {}, np.eye(d), d)
    return SdpProblem(
        n_t, d, objective, ineq, [(trace, 1.0)], tuple(t_ops), tuple(cons), qubits, n_full,
    )
