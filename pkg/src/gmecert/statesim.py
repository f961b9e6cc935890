"""Dense density-matrix simulation for desk-scale checks (at most 12 qubits).

Computational basis ordering follows ``numpy.kron``: qubit 1 is the most
significant bit of the basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .graph_core.graph import Graph
from .pauli import DENSE_CAP, SingleQubitClifford, expectation
from .records import MEASURED, MeasurementRecord, Term

TOL = 1e-10


class StateError(ValueError):
    pass


@dataclass(frozen=True)
class DensityMatrix:
    data: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.data, dtype=complex)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] & (d.shape[0] - 1):
            raise StateError(f"density matrix must be 2^n x 2^n, got shape {d.shape}")
        object.__setattr__(self, "data", d)

    @property
    def n(self) -> int:
        return self.data.shape[0].bit_length() - 1

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @classmethod
    def from_vector(cls, psi: np.ndarray) -> DensityMatrix:
        psi = np.asarray(psi, dtype=complex).ravel()
        return cls(np.outer(psi, psi.conj()))

    def check(self, tol: float = TOL) -> None:
        """Raise unless Hermitian, unit trace and positive semidefinite."""
        d = self.data
        if not np.allclose(d, d.conj().T, atol=tol):
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(d) - 1) > tol:
            raise StateError(f"trace {np.trace(d).real} != 1")
        lo = np.linalg.eigvalsh((d + d.conj().T) / 2).min()
        if lo < -tol:
            raise StateError(f"negative eigenvalue {lo}")

    def purity(self) -> float:
        return float(np.real(np.vdot(self.data, self.data)))

    def expect(self, op) -> float:
        return expectation(op, self.data)


def _check_cap(n: int, cap: int = DENSE_CAP) -> None:
    if n > cap:
        raise StateError(f"dense simulation capped at {cap} qubits, got {n}")


def graph_state_vector(graph: Graph) -> np.ndarray:
    """``prod CZ_ij |+>^n``: amplitude ``2^{-n/2} (-1)^{#edges with both bits set}``."""
    n = graph.n
    _check_cap(n)
    idx = np.arange(1 << n)
    bits = [(idx >> (n - q)) & 1 for q in range(1, n + 1)]
    sign = np.zeros(1 << n, dtype=np.int64)
    for i, j in graph.edges:
        sign ^= bits[i - 1] & bits[j - 1]
    return (1 - 2 * sign).astype(complex) / np.sqrt(1 << n)


def graph_state(graph: Graph) -> DensityMatrix:
    return DensityMatrix.from_vector(graph_state_vector(graph))


def maximally_mixed(n: int) -> DensityMatrix:
    _check_cap(n)
    return DensityMatrix(np.eye(1 << n, dtype=complex) / (1 << n))


def add_white_noise(rho: DensityMatrix, p: float) -> DensityMatrix:
    """``p * 1/2^n + (1 - p) * rho``."""
    if not 0 <= p <= 1:
        raise StateError(f"white-noise ratio must lie in [0, 1], got {p}")
    return DensityMatrix(p * np.eye(rho.dim) / rho.dim + (1 - p) * rho.data)


def apply_single_qubit(rho: DensityMatrix, ops: Sequence[np.ndarray], qubit: int) -> DensityMatrix:
    """``sum_k K rho K^dagger`` with every ``K`` acting on ``qubit`` (1-based)."""
    n = rho.n
    if not 1 <= qubit <= n:
        raise StateError(f"qubit {qubit} outside 1..{n}")
    t = rho.data.reshape([2] * (2 * n))
    out = np.zeros_like(t)
    a, b = qubit - 1, n + qubit - 1
    for k in ops:
        s = np.moveaxis(np.tensordot(k, t, axes=([1], [a])), 0, a)
        s = np.moveaxis(np.tensordot(s, k.conj(), axes=([b], [1])), -1, b)
        out += s
    return DensityMatrix(out.reshape(rho.dim, rho.dim))


def kraus_operators(kind: str, p: float) -> list[np.ndarray]:
    """Kraus sets for ``dephasing``, ``depolarizing`` and ``amplitude_damping``."""
    if not 0 <= p <= 1:
        raise StateError(f"channel parameter must lie in [0, 1], got {p}")
    i2 = np.eye(2, dtype=complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    if kind == "dephasing":
        # p = 1 removes all coherence: rho -> (rho + Z rho Z)/2
        return [np.sqrt(1 - p / 2) * i2, np.sqrt(p / 2) * z]
    if kind == "depolarizing":
        # p = 1 maps every input to the maximally mixed state
        return [np.sqrt(1 - 3 * p / 4) * i2] + [np.sqrt(p / 4) * m for m in (x, y, z)]
    if kind == "amplitude_damping":
        return [
            np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex),
            np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex),
        ]
    raise StateError(f"unknown channel kind {kind!r}")


def apply_local_channel(rho: DensityMatrix, channels: Iterable[Mapping[str, Any]]) -> DensityMatrix:
    """Apply per-qubit channels, e.g. ``[{"qubit": 1, "kind": "dephasing", "p": 0.1}]``."""
    out = rho
    for ch in channels:
        try:
            kind, p, q = str(ch["kind"]), float(ch["p"]), int(ch["qubit"])
        except (KeyError, TypeError, ValueError) as exc:
            raise StateError(f"malformed channel spec {ch!r}") from exc
        out = apply_single_qubit(out, kraus_operators(kind, p), q)
    out.check()
    return out


def dicke_vector(n: int, i: int) -> np.ndarray:
    _check_cap(n)
    if not 0 <= i <= n:
        raise StateError(f"Dicke excitation number must lie in 0..{n}, got {i}")
    idx = np.arange(1 << n)
    weights = np.array([int(v).bit_count() for v in idx])
    psi = (weights == i).astype(complex)
    return psi / np.sqrt(comb(n, i))


def dicke_state(n: int, i: int) -> DensityMatrix:
    return DensityMatrix.from_vector(dicke_vector(n, i))


@dataclass(frozen=True)
class LocalRotationSchedule:
    """Angles ``(a, b, c)`` per qubit for ``Rz(a) Ry(b) Rz(c)``, flattened."""

    angles: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
        if len(self.angles) % 3:
            raise StateError("rotation schedule needs three angles per qubit")
        for a in self.angles:
            if not -np.pi - 1e-12 <= a <= np.pi + 1e-12:
                raise StateError(f"angle {a} outside [-pi, pi]")

    @property
    def n(self) -> int:
        return len(self.angles) // 3

    def unitary(self, qubit: int) -> np.ndarray:
        a, b, c = self.angles[3 * (qubit - 1): 3 * qubit]
        return rz(a) @ ry(b) @ rz(c)


def rz(phi: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])


def ry(phi: float) -> np.ndarray:
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def apply_local_rotations(rho: DensityMatrix, schedule: LocalRotationSchedule) -> DensityMatrix:
    """``U rho U^dagger`` with ``U`` the tensor product of per-qubit rotations."""
    if schedule.n != rho.n:
        raise StateError(f"schedule covers {schedule.n} qubits, state has {rho.n}")
    out = rho
    for q in range(1, rho.n + 1):
        out = apply_single_qubit(out, [schedule.unitary(q)], q)
    return out


def apply_gates(rho: DensityMatrix, gates: Iterable[SingleQubitClifford]) -> DensityMatrix:
    """Evolve ``rho`` through the single-qubit gate circuit (first gate first)."""
    out = rho
    for g in gates:
        out = apply_single_qubit(out, [g.matrix], g.qubit)
    return out


def fidelity(rho: DensityMatrix, target: np.ndarray | DensityMatrix) -> float:
    """``<psi|rho|psi>`` for a pure target given as a vector or rank-one state."""
    if isinstance(target, DensityMatrix):
        if abs(target.purity() - 1) > 1e-8:
            raise StateError("fidelity target must be pure")
        if target.dim != rho.dim:
            raise StateError("dimension mismatch")
        return float(np.real(np.vdot(target.data, rho.data)))
    psi = np.asarray(target, dtype=complex).ravel()
    if psi.shape[0] != rho.dim:
        raise StateError("dimension mismatch")
    return float(np.real(psi.conj() @ rho.data @ psi))


def _sample(value: float, shots: int, rng: np.random.Generator) -> tuple[float, float]:
    prob = min(1.0, max(0.0, (1 + value) / 2))
    plus = rng.binomial(shots, prob)
    est = 2 * plus / shots - 1
    return est, float(np.sqrt(max(0.0, 1 - est * est) / shots))


def measure_record(
    rho: DensityMatrix,
    graph: Graph,
    gates: Sequence[SingleQubitClifford] = (),
    shots: int | None = None,
    seed: int | None = None,
    measure_edges: bool = True,
) -> MeasurementRecord:
    """Record every vertex (and, by default, edge) stabilizer of ``graph``.

    With ``gates`` the stabilizers are replaced by ``U^dagger S U`` for the
    circuit ``U``. With ``shots`` each term is estimated independently from
    that many +/-1 outcomes and the standard error is recorded as sigma.
    """
    if rho.n != graph.n:
        raise StateError(f"state has {rho.n} qubits, graph has {graph.n} vertices")
    rng = np.random.default_rng(seed)
    record = MeasurementRecord(graph, {}, {}, gates=tuple(gates))

    def term(op) -> Term:
        value = expectation(op, rho.data)
        if shots is None:
            return Term(float(np.clip(value, -1, 1)), 0.0, MEASURED)
        est, sig = _sample(value, shots, rng)
        return Term(est, sig, MEASURED)

    for v in range(1, graph.n + 1):
        record.vertex_terms[v] = term(record.vertex_operator(v))
    if measure_edges:
        for e in graph.edge_list:
            record.edge_terms[e] = term(record.edge_operator(e))
    return record


def white_noise_record(graph: Graph, p: float, measure_edges: bool = True) -> MeasurementRecord:
    """Exact record of the white-noise graph state without dense matrices:
    every stabilizer expectation equals ``1 - p``."""
    if not 0 <= p <= 1:
        raise StateError(f"white-noise ratio must lie in [0, 1], got {p}")
    vt = {v: Term(1 - p, 0.0) for v in range(1, graph.n + 1)}
    et = {e: Term(1 - p, 0.0) for e in graph.edge_list} if measure_edges else {}
    return MeasurementRecord(graph, vt, et)
