import numpy as np
import pytest

from gmecert.graph_core import chain, complete, local_complement, ring, star
from gmecert.pauli import (
    GATE_MATRICES,
    PauliError,
    PauliString,
    SingleQubitClifford,
    commutes,
    conjugate,
    edge_stabilizer,
    expectation,
    lc_gates,
    mul,
    to_dense,
    vertex_stabilizer,
)

from oracles import dense, random_density, stabilizer_dense

PHASES = {0: 1, 1: 1j, 2: -1, 3: -1j}


def _random_pauli(rng, n):
    letters = "".join(rng.choice(list("IXYZ"), size=n))
    phase = int(rng.integers(4))
    prefix = ["", "i", "-", "-i"][phase]
    return PauliString.from_str(prefix + letters), dense(letters, PHASES[phase])


def _gate_circuit_dense(gates, n):
    u = np.eye(1 << n, dtype=complex)
    for g in gates:
        ops = [np.eye(2)] * n
        ops[g.qubit - 1] = GATE_MATRICES[g.name]
        full = ops[0]
        for m in ops[1:]:
            full = np.kron(full, m)
        u = full @ u
    return u


def test_parse_and_print():
    p = PauliString.from_str("-iXZIY")
    assert str(p) == "-iXZIY"
    assert p.support == (1, 2, 4)
    assert p.weight == 3
    assert not p.is_hermitian
    assert str(PauliString.from_str("XX")) == "+XX"
    with pytest.raises(PauliError):
        PauliString.from_str("XQ")


def test_xz_is_minus_i_y():
    x, z = PauliString.from_str("X"), PauliString.from_str("Z")
    assert str(x * z) == "-iY"
    assert str(z * x) == "+iY"
    assert not commutes(x, z)


def test_chain2_stabilizers():
    g = chain(2)
    s1, s2 = vertex_stabilizer(g, 1), vertex_stabilizer(g, 2)
    assert str(s1) == "+XZ" and str(s2) == "+ZX"
    assert str(s1 * s2) == "+YY"
    assert str(edge_stabilizer(g, (1, 2))) == "+YY"
    assert str(edge_stabilizer(chain(3), (1, 2))) == "+YYZ"


def test_stabilizers_pairwise_commute():
    g = ring(5)
    stabs = [vertex_stabilizer(g, v) for v in range(1, 6)]
    assert all(commutes(a, b) for a in stabs for b in stabs)


def test_to_dense_matches_kron():
    np.testing.assert_allclose(to_dense(PauliString.from_str("XYZ")), dense("XYZ"), atol=0)
    np.testing.assert_allclose(to_dense(PauliString.from_str("-iIZ")), dense("IZ", -1j))


def test_dense_cap():
    with pytest.raises(PauliError):
        to_dense(PauliString.identity(13))


def test_expectation_rejects_non_hermitian_and_shape():
    rho = np.eye(4) / 4
    with pytest.raises(PauliError):
        expectation(PauliString.from_str("iXX"), rho)
    with pytest.raises(PauliError):
        expectation(PauliString.from_str("XXX"), rho)


def test_gate_catalog_entries_are_unitary():
    for name, m in GATE_MATRICES.items():
        np.testing.assert_allclose(m.conj().T @ m, np.eye(2), atol=1e-12, err_msg=name)
    with pytest.raises(PauliError):
        SingleQubitClifford("T", 1)


def test_hadamard_conjugation():
    p = PauliString.from_str("XZ")
    assert str(conjugate(p, [SingleQubitClifford("H", 1), SingleQubitClifford("H", 2)])) == "+ZX"


def test_pauli_dense_oracle_suite_1000_cases():
    rng = np.random.default_rng(4242)
    names = sorted(GATE_MATRICES)
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        (p, dp), (q, dq) = _random_pauli(rng, n), _random_pauli(rng, n)
        np.testing.assert_allclose(to_dense(p), dp, atol=1e-12)
        np.testing.assert_allclose(to_dense(mul(p, q)), dp @ dq, atol=1e-12)
        anti = dp @ dq + dq @ dp
        assert commutes(p, q) == (np.abs(anti).max() > 1e-12)
        gates = [
            SingleQubitClifford(names[int(rng.integers(len(names)))], int(rng.integers(1, n + 1)))
            for _ in range(int(rng.integers(0, 4)))
        ]
        u = _gate_circuit_dense(gates, n)
        np.testing.assert_allclose(to_dense(conjugate(p, gates)), u.conj().T @ dp @ u, atol=1e-12)
        if p.is_hermitian:
            rho = random_density(rng, 1 << n)
            assert abs(expectation(p, rho) - np.real(np.trace(dp @ rho))) < 1e-12


def test_graph_stabilizers_match_dense_oracle():
    for g in (chain(4), ring(4), star(4), complete(4)):
        for v in range(1, g.n + 1):
            np.testing.assert_allclose(
                to_dense(vertex_stabilizer(g, v)), stabilizer_dense(g.n, g.edge_list, v), atol=0
            )
        for a, b in g.edge_list:
            expected = stabilizer_dense(g.n, g.edge_list, a) @ stabilizer_dense(g.n, g.edge_list, b)
            np.testing.assert_allclose(to_dense(edge_stabilizer(g, (a, b))), expected, atol=0)


def test_lc_gates_map_stabilizer_groups():
    # U^dagger S_v(tau(G)) U must lie in the stabilizer group of G: check on dense vectors
    from oracles import graph_state_dense

    for g in (ring(5), star(4), chain(4)):
        for v in range(1, g.n + 1):
            h = local_complement(g, v)
            u = _gate_circuit_dense(lc_gates(g, v), g.n)
            psi = graph_state_dense(g.n, g.edge_list)
            phi = graph_state_dense(h.n, h.edge_list)
            assert abs(abs(np.vdot(phi, u @ psi)) - 1) < 1e-12
            for w in range(1, h.n + 1):
                op = to_dense(conjugate(vertex_stabilizer(h, w), lc_gates(g, v)))
                np.testing.assert_allclose(op @ psi, psi, atol=1e-12)


def test_restrict_keeps_letters_and_phase():
    p = PauliString.from_str("-IXIZ")
    r = p.restrict((2, 4))
    assert str(r) == "-XZ"
