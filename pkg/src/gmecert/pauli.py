"""Pauli strings in binary symplectic form with exact phase tracking.

A :class:`PauliString` stores bit masks ``x`` and ``z`` (bit ``q-1`` is qubit
``q``) and a phase exponent ``p`` so that the operator is

    i**p * prod_q  i**(x_q z_q) X_q**x_q Z_q**z_q

i.e. a qubit with both bits set is ``Y = iXZ`` with phase +1. Dense
matrices use the usual Kronecker ordering with qubit 1 leftmost.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .graph_core.graph import Graph

DENSE_CAP = 12

_PHASE_TEXT = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_TEXT_RE = re.compile(r"^\s*([+-]?)(i?)([IXYZ]+)\s*$")


class PauliError(ValueError):
    pass


def _popcount(v: int) -> int:
    return v.bit_count()


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PauliError("PauliString needs n >= 1")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise PauliError("bit masks exceed n qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- construction -------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n, 0, 0, 0)

    @classmethod
    def from_ops(cls, n: int, ops: dict[int, str], phase: int = 0) -> PauliString:
        """Build from ``{qubit: "X"|"Y"|"Z"|"I"}`` with 1-based qubits."""
        x = z = 0
        for q, op in ops.items():
            if not 1 <= q <= n:
                raise PauliError(f"qubit {q} outside 1..{n}")
            bit = 1 << (q - 1)
            if op in ("X", "Y"):
                x |= bit
            if op in ("Z", "Y"):
                z |= bit
            if op not in "IXYZ":
                raise PauliError(f"unknown Pauli letter {op!r}")
        return cls(n, x, z, phase)

    @classmethod
    def from_str(cls, text: str) -> PauliString:
        """Parse ``"-XZIY"``; an optional sign and ``i`` may lead."""
        m = _TEXT_RE.match(text)
        if not m:
            raise PauliError(f"cannot parse Pauli string {text!r}")
        sign, imag, letters = m.groups()
        phase = (2 if sign == "-" else 0) + (1 if imag else 0)
        return cls.from_ops(len(letters), {q: c for q, c in enumerate(letters, start=1)}, phase)

    # -- views --------------------------------------------------------------

    def letter(self, q: int) -> str:
        bit = 1 << (q - 1)
        return "IXZY"[(1 if self.x & bit else 0) + (2 if self.z & bit else 0)]

    def letters(self) -> str:
        return "".join(self.letter(q) for q in range(1, self.n + 1))

    def __str__(self) -> str:
        return _PHASE_TEXT[self.phase] + self.letters()

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    @property
    def support(self) -> tuple[int, ...]:
        s = self.x | self.z
        return tuple(q for q in range(1, self.n + 1) if s >> (q - 1) & 1)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise PauliError(f"{self} is not Hermitian")
        return 1 if self.phase == 0 else -1

    # -- algebra ------------------------------------------------------------

    def __mul__(self, other: PauliString) -> PauliString:
        return mul(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, self.phase + 2)

    def restrict(self, qubits: Sequence[int]) -> PauliString:
        """Keep only ``qubits`` (1-based, in the given order)."""
        ops = {i: self.letter(q) for i, q in enumerate(qubits, start=1)}
        return PauliString.from_ops(len(qubits), ops, self.phase)


def _check_same_n(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise PauliError(f"size mismatch: {p.n} vs {q.n} qubits")


def mul(p: PauliString, q: PauliString) -> PauliString:
    """Exact operator product ``p @ q``."""
    _check_same_n(p, q)
    x, z = p.x ^ q.x, p.z ^ q.z
    # (i^{x1z1} X^x1 Z^z1)(i^{x2z2} X^x2 Z^z2) = i^{x1z1+x2z2} (-1)^{z1 x2} X^x Z^z,
    # then absorb X^x Z^z = i^{-xz} (i^{xz} X^x Z^z)
    e = (
        p.phase
        + q.phase
        + _popcount(p.x & p.z)
        + _popcount(q.x & q.z)
        + 2 * _popcount(p.z & q.x)
        - _popcount(x & z)
    )
    return PauliString(p.n, x, z, e)


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_same_n(p, q)
    return (_popcount(p.x & q.z) + _popcount(p.z & q.x)) % 2 == 0


# -- graph-state stabilizers ---------------------------------------------------


def vertex_stabilizer(graph: Graph, i: int) -> PauliString:
    """``X_i`` times ``Z`` on every neighbour of ``i``."""
    graph.check_vertex(i)
    z = 0
    for j in graph.neighbors[i]:
        z |= 1 << (j - 1)
    return PauliString(graph.n, 1 << (i - 1), z, 0)


def edge_stabilizer(graph: Graph, edge: tuple[int, int]) -> PauliString:
    i, j = edge
    if not graph.has_edge(i, j):
        raise PauliError(f"{edge} is not an edge of the graph")
    return mul(vertex_stabilizer(graph, i), vertex_stabilizer(graph, j))


# -- dense realisation ---------------------------------------------------------

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE_QUBIT = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}


def basis_masks(p: PauliString) -> tuple[int, int]:
    """``x`` and ``z`` masks re-indexed to computational-basis bit order
    (qubit 1 is the most significant bit)."""
    x = z = 0
    for q in range(1, p.n + 1):
        b = 1 << (p.n - q)
        if p.x >> (q - 1) & 1:
            x |= b
        if p.z >> (q - 1) & 1:
            z |= b
    return x, z


def column_action(p: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """``(rows, coeffs)`` with ``p |c> = coeffs[c] |rows[c]>``."""
    x, z = basis_masks(p)
    cols = np.arange(1 << p.n)
    parity = np.zeros(cols.shape, dtype=np.int64)
    zz = cols & z
    while np.any(zz):
        parity ^= zz & 1
        zz = zz >> 1
    coeff = (1j) ** ((p.phase + _popcount(p.x & p.z)) % 4) * (1 - 2 * parity)
    return cols ^ x, coeff.astype(complex)


def to_dense(p: PauliString, cap: int = DENSE_CAP) -> np.ndarray:
    if p.n > cap:
        raise PauliError(f"dense realisation capped at {cap} qubits, got {p.n}")
    rows, coeff = column_action(p)
    dim = 1 << p.n
    out = np.zeros((dim, dim), dtype=complex)
    out[rows, np.arange(dim)] = coeff
    return out


def expectation(p: PauliString, rho: np.ndarray) -> float:
    """``Tr(p rho)`` for Hermitian ``p``."""
    if not p.is_hermitian:
        raise PauliError(f"{p} is not Hermitian; its expectation is not real")
    rho = np.asarray(rho)
    if rho.shape != (1 << p.n, 1 << p.n):
        raise PauliError(f"density matrix shape {rho.shape} does not match {p.n} qubits")
    rows, coeff = column_action(p)
    # Tr(P rho) = sum_c P[rows[c], c] rho[c, rows[c]]
    cols = np.arange(1 << p.n)
    return float(np.real(np.sum(coeff * rho[cols, rows])))


# -- single-qubit Cliffords ----------------------------------------------------

_SQ = np.sqrt(0.5)
GATE_MATRICES: dict[str, np.ndarray] = {
    "I": _I2,
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQ,
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "SX": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    "SXdg": 0.5 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex),
    "X": _X,
    "Y": _Y,
    "Z": _Z,
    # exp(-i pi/4 X), exp(+i pi/4 X), exp(+i pi/4 Z), exp(-i pi/4 Z)
    "RXm": _SQ * (_I2 - 1j * _X),
    "RXp": _SQ * (_I2 + 1j * _X),
    "RZp": _SQ * (_I2 + 1j * _Z),
    "RZm": _SQ * (_I2 - 1j * _Z),
}


def _decompose_1q(m: np.ndarray) -> tuple[str, int]:
    """Write a 2x2 matrix that is ``i**e * P`` as ``(P, e)``."""
    for letter, pm in SINGLE_QUBIT.items():
        c = np.trace(pm @ m) / 2
        if abs(abs(c) - 1) < 1e-9 and np.allclose(m, c * pm, atol=1e-9):
            e = int(round(np.angle(c) / (np.pi / 2))) % 4
            return letter, e
    raise PauliError("matrix is not a phased Pauli; gate is not Clifford")


@lru_cache(maxsize=None)
def _conjugation_table(name: str) -> dict[str, tuple[str, int]]:
    u = GATE_MATRICES[name]
    return {
        letter: _decompose_1q(u.conj().T @ SINGLE_QUBIT[letter] @ u) for letter in ("X", "Z")
    }


@dataclass(frozen=True)
class SingleQubitClifford:
    """A catalogued single-qubit Clifford ``name`` acting on ``qubit`` (1-based)."""

    name: str
    qubit: int

    def __post_init__(self) -> None:
        if self.name not in GATE_MATRICES:
            raise PauliError(f"unknown gate {self.name!r}; catalog: {sorted(GATE_MATRICES)}")

    @property
    def matrix(self) -> np.ndarray:
        return GATE_MATRICES[self.name]

    def to_json(self) -> list:
        return [self.name, self.qubit]


def _conjugate_one(p: PauliString, g: SingleQubitClifford) -> PauliString:
    q = g.qubit
    if not 1 <= q <= p.n:
        raise PauliError(f"gate qubit {q} outside 1..{p.n}")
    letter = p.letter(q)
    if letter == "I":
        return p
    table = _conjugation_table(g.name)
    bit = 1 << (q - 1)
    rest = PauliString(p.n, p.x & ~bit, p.z & ~bit, p.phase)
    # Y = i X Z, so conj(Y) = i conj(X) conj(Z)
    if letter == "Y":
        (lx, ex), (lz, ez) = table["X"], table["Z"]
        img = mul(
            PauliString.from_ops(p.n, {q: lx}, ex + 1), PauliString.from_ops(p.n, {q: lz}, ez)
        )
    else:
        l, e = table[letter]
        img = PauliString.from_ops(p.n, {q: l}, e)
    return mul(rest, img)


def conjugate(p: PauliString, gates: Iterable[SingleQubitClifford]) -> PauliString:
    """``U^dagger p U`` for the circuit ``U = g_m ... g_1`` (``gates`` in circuit order)."""
    out = p
    for g in reversed(list(gates)):
        out = _conjugate_one(out, g)
    return out


def lc_gates(graph: Graph, v: int) -> list[SingleQubitClifford]:
    """Gates of the local-Clifford unitary taking ``|G>`` to ``|tau_v(G)>``:
    ``exp(-i pi/4 X_v)`` and ``exp(+i pi/4 Z_a)`` on every neighbour ``a``."""
    graph.check_vertex(v)
    return [SingleQubitClifford("RXm", v)] + [
        SingleQubitClifford("RZp", a) for a in sorted(graph.neighbors[v])
    ]


def gates_from_json(data: Iterable[Sequence]) -> list[SingleQubitClifford]:
    return [SingleQubitClifford(str(name), int(q)) for name, q in data]
