"""Acceptance criteria 1-10.

Each test records a pass/fail line under its criterion number; the lines are
printed in the terminal summary by ``conftest.py``.
"""

import functools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

import test_criteria
import test_graph_core
import test_pauli
from conftest import ACCEPTANCE
from gmecert.criteria import (
    certify,
    optimal_gamma,
    propagate_uncertainty,
    white_noise_argmax,
    white_noise_threshold,
)
from gmecert.graph_core import chain, complete, cthulhu, lattice2d, ring, star
from gmecert.pauli import PauliString
from gmecert.records import SDP_BOUND
from gmecert.sdp import bound_edge, bound_unmeasured_edges, build_lower_bound_problem, solve_dual, verify_dual_certificate
from gmecert.statesim import (
    LocalRotationSchedule,
    add_white_noise,
    apply_local_rotations,
    dicke_state,
    measure_record,
    white_noise_record,
)

F = Fraction
DICKE_3_2 = [0, -0.53, -0.33, math.pi, -0.53, -0.33, 0, -0.53, -0.33]


def criterion(num: int, label: str):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                note = fn(*args, **kwargs)
            except BaseException as exc:
                msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
                ACCEPTANCE.setdefault(num, []).append((False, f"{label}: {msg}"))
                raise
            ACCEPTANCE.setdefault(num, []).append((True, label + (f" ({note})" if note else "")))
        return run
    return wrap


# -- 1-4: white-noise thresholds ----------------------------------------------------


@criterion(1, "chain n=3..10, k/(2n-1)")
def test_criterion_1_chain_thresholds():
    start = time.perf_counter()
    for n in range(3, 11):
        for k in range(2, n + 1):
            got = white_noise_threshold(chain(n), k)
            assert got == F(k, 2 * n - 1), f"chain({n}) k={k}: {got}"
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"took {elapsed:.1f}s"
    return f"{elapsed:.1f}s"


@criterion(2, "ring n=3..10, min(k+1,n)/(2n)")
def test_criterion_2_ring_thresholds():
    for n in range(3, 11):
        for k in range(2, n + 1):
            got = white_noise_threshold(ring(n), k)
            assert got == F(min(k + 1, n), 2 * n), f"ring({n}) k={k}: {got}"


def lattice_ny2(n_x: int, k: int) -> tuple[Fraction, Fraction]:
    """Reference closed-form threshold and its optimal gamma for n_y = 2."""
    if k == 2:
        return F(3, 5 * n_x - 2), F(1)
    if k == 3 or (n_x == 2 and k == 4):
        return F(1, n_x), F(0)
    if k == 4:
        return F(5, 5 * n_x - 2), F(1)
    return F(math.ceil(k / 2), 2 * n_x), F(0)


def lattice_ny3(n_x: int, k: int) -> tuple[Fraction, Fraction]:
    a = 1 if 3 <= k <= 3 * (n_x - 1) else 0
    interior = range(5, 3 * (n_x - 1) + 1)
    if k in (2, 3, 4) or (k in interior and k % 2 == 0):
        return F(k + a + 1, 8 * n_x - 3), F(1)
    return F(min(math.ceil(k / 2), 3 * n_x // 2), 3 * n_x), F(0)


# cases where the n_y = 2 closed form disagrees with the R formula it is derived from
LATTICE_CLOSED_FORM_MISMATCH = {(4, 6), (5, 6)}


@criterion(3, "lattice2d (2..5,2) and (3,3), value and gamma* branch")
def test_criterion_3_lattice_thresholds():
    checked = 0
    for n_x in range(2, 6):
        for k in range(2, 2 * n_x + 1):
            if (n_x, k) in LATTICE_CLOSED_FORM_MISMATCH:
                continue
            want, branch = lattice_ny2(n_x, k)
            got, gammas = white_noise_argmax(lattice2d(n_x, 2), k)
            assert got == want, f"lattice2d({n_x},2) k={k}: {got} != {want}"
            assert branch in gammas, f"lattice2d({n_x},2) k={k}: gamma* {gammas}"
            checked += 1
    for k in range(2, 10):
        want, branch = lattice_ny3(3, k)
        got, gammas = white_noise_argmax(lattice2d(3, 3), k)
        assert got == want, f"lattice2d(3,3) k={k}: {got} != {want}"
        assert branch in gammas, f"lattice2d(3,3) k={k}: gamma* {gammas}"
        checked += 1
    got, gammas = white_noise_argmax(lattice2d(3, 2), 3)
    assert got == F(1, 3) and gammas == [F(0)]
    return f"{checked} other cases match"


@pytest.mark.xfail(strict=True, reason="n_y=2 closed form gives ceil(k/2)/(2n_x) at gamma*=0, "
                   "but its own R formula at gamma=1 gives the larger 7/(5n_x-2)")
@pytest.mark.parametrize("n_x,k", sorted(LATTICE_CLOSED_FORM_MISMATCH))
def test_criterion_3_lattice_closed_form_mismatch(n_x, k):
    want, _ = lattice_ny2(n_x, k)

    @criterion(3, f"lattice2d({n_x},2) k={k} vs closed-form threshold")
    def check():
        got = white_noise_threshold(lattice2d(n_x, 2), k)
        assert got == want, f"computed {got}, closed form {want}"

    check()


def test_criterion_3_lattice_mismatch_is_the_r_formula_value():
    # the computed value is what the closed-form R itself implies
    for n_x, k in sorted(LATTICE_CLOSED_FORM_MISMATCH):
        n, e = 2 * n_x, 3 * n_x - 2
        r = lambda g: g * min(k + 1, 2 * n_x) + (1 - g) * min(math.ceil(k / 2), n_x)
        implied = max(F(r(g), n + g * e) for g in (F(0), F(1)))
        assert white_noise_threshold(lattice2d(n_x, 2), k) == implied == F(7, 5 * n_x - 2)


@criterion(4, "star k/(2n-1) and complete piecewise, n=3..8")
def test_criterion_4_star_and_complete():
    for n in range(3, 9):
        for k in range(2, n + 1):
            got, gammas = white_noise_argmax(star(n), k)
            assert got == F(k, 2 * n - 1) and F(1) in gammas, f"star({n}) k={k}: {got}"
            if k == 2 or (n == 3 and k == 3):
                want, branch = F(2, n + 1), F(1)
            else:
                want, branch = F(min(k - 1, n // 2), n), F(0)
            got, gammas = white_noise_argmax(complete(n), k)
            assert got == want and branch in gammas, f"complete({n}) k={k}: {got} {gammas}"


# -- 5-6: optimal gamma and Dicke ------------------------------------------------


@criterion(5, "cthulhu r=4, interior gamma*=1/2 only on (2/7, 6/19)")
def test_criterion_5_cthulhu():
    g = cthulhu(4)
    gamma, margin = optimal_gamma(g, 4, white_noise_record(g, 0.30))
    assert gamma == F(1, 2) and margin > 0, (gamma, margin)
    gamma, margin = optimal_gamma(g, 4, white_noise_record(g, 0.27))
    assert gamma == F(1) and margin > 0, (gamma, margin)
    # above 6/19 the interior point stays the maximiser but no longer certifies
    gamma, margin = optimal_gamma(g, 4, white_noise_record(g, 0.33))
    assert margin < 0, (gamma, margin)
    assert certify(g, white_noise_record(g, 0.33), k_values=[4]).results[0].margin < 0
    lo, hi = F(2, 7), F(6, 19)
    for p in (lo + F(1, 1000), hi - F(1, 1000)):
        assert optimal_gamma(g, 4, white_noise_record(g, float(p)))[0] == F(1, 2)


def _dicke_record(p: float):
    g = complete(3)
    rho = apply_local_rotations(dicke_state(3, 2), LocalRotationSchedule(DICKE_3_2))
    return g, measure_record(add_white_noise(rho, p), g)


def _dicke_gme(p: float) -> bool:
    g, rec = _dicke_record(p)
    return certify(g, rec, k_values=[2]).smallest_violated_k == 2


@criterion(6, "Dicke n=3 i=2 with tabulated angles, p_c = 0.315 +- 0.010")
def test_criterion_6_dicke():
    assert _dicke_gme(0.30)
    assert not _dicke_gme(0.33)
    lo, hi = 0.30, 0.33
    for _ in range(40):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if _dicke_gme(mid) else (lo, mid)
    assert abs(lo - 0.315) <= 0.010, lo
    return f"p_c = {lo:.4f}"


# -- 7-8: SDP ------------------------------------------------------------------------


def _chain2_cert(c1: float, c2: float):
    prob = build_lower_bound_problem(
        [PauliString.from_str("YY")],
        [(PauliString.from_str("XZ"), c1, 0.0), (PauliString.from_str("ZX"), c2, 0.0)],
    )
    return prob, solve_dual(prob)


@criterion(7, "SDP chain(2) oracle and ring(6) per-edge values")
def test_criterion_7_sdp_oracle():
    for c in (0.0, 0.3, 0.6, 0.9, 1.0):
        prob, cert = _chain2_cert(c, c)
        assert abs(cert.beta - max(0.0, 2 * c - 1)) <= 1e-6, (c, cert.beta)
        sound, report = verify_dual_certificate(prob, cert)
        assert sound, report.violations
        assert abs(cert.gap) <= 1e-6, (c, cert.gap)
    g = ring(6)
    for p in (0.0, 0.1, 0.24, 0.6):
        c = 1 - p
        rec = white_noise_record(g, p, measure_edges=False)
        for e in g.edge_list:
            term, _ = bound_edge(rec, e)
            assert abs(term.value - max(0.0, 2 * c - 1)) <= 1e-6, (p, e, term.value)


@criterion(8, "SDP-augmented certification parity on ring(6)")
def test_criterion_8_sdp_parity():
    g = ring(6)
    measured = certify(g, white_noise_record(g, 0.1)).smallest_violated_k
    augmented_rec = bound_unmeasured_edges(g, white_noise_record(g, 0.1, measure_edges=False))
    assert all(augmented_rec.edge_term(e).provenance == SDP_BOUND for e in g.edge_list)
    augmented = certify(g, augmented_rec).smallest_violated_k
    assert measured == augmented == 2, (measured, augmented)
    measured = certify(g, white_noise_record(g, 0.24), all_k=True).smallest_violated_k
    augmented = certify(g, bound_unmeasured_edges(g, white_noise_record(g, 0.24, measure_edges=False)),
                        all_k=True).smallest_violated_k
    assert measured is not None
    assert augmented is None or augmented >= measured, (measured, augmented)
    return f"p=0.24: measured k={measured}, augmented k={augmented}"


# -- 9: property suites ----------------------------------------------------------------


@criterion(9, "(a) matching vs brute force, 1000 cases")
def test_criterion_9a_matching():
    test_graph_core.test_matching_property_suite_1000_cases()


@criterion(9, "(b) partition counts vs stirling2, 1000 cases")
def test_criterion_9b_partitions():
    test_graph_core.test_partition_property_suite_1000_cases()
    for n in range(1, 9):
        test_graph_core.test_partition_counts_all_k(n)


@criterion(9, "(c) Pauli ops vs dense oracle, 1000 cases")
def test_criterion_9c_pauli():
    test_pauli.test_pauli_dense_oracle_suite_1000_cases()


@criterion(9, "(d) k-separable and fixed-partition soundness, 1000 mixtures each")
def test_criterion_9d_soundness():
    test_criteria.test_ksep_bound_soundness_1000_separable_mixtures()
    test_criteria.test_fixed_partition_soundness_1000_mixtures()


@criterion(9, "(e) anticommutativity and product bounds, 1000 cases")
def test_criterion_9e_anticommuting():
    test_criteria.test_anticommutativity_and_product_bounds_1000_cases()


# -- 10: error propagation ----------------------------------------------------------


@criterion(10, "sigma_W closed forms and SDP gradients vs finite differences")
def test_criterion_10_error_propagation():
    rng = np.random.default_rng(10)
    g = ring(5)
    for _ in range(20):
        rec = white_noise_record(g, float(rng.uniform(0, 0.9)))
        sv = {v: float(rng.uniform(0.001, 0.05)) for v in rec.vertex_terms}
        se = {e: float(rng.uniform(0.001, 0.05)) for e in rec.edge_terms}
        for v, s in sv.items():
            rec.vertex_terms[v].sigma = s
        for e, s in se.items():
            rec.edge_terms[e].sigma = s
        for gamma in (0.0, 0.25, 0.5, 1.0):
            hand = math.sqrt(sum(s * s for s in sv.values()) + gamma ** 2 * sum(s * s for s in se.values()))
            assert abs(propagate_uncertainty(rec, gamma) - hand) <= 1e-12
    delta = 1e-4
    for c in (0.6, 0.9):
        _, cert = _chain2_cert(c, c)
        for j in (0, 1):
            up, dn = [c, c], [c, c]
            up[j] += delta
            dn[j] -= delta
            fd = (_chain2_cert(*up)[1].beta - _chain2_cert(*dn)[1].beta) / (2 * delta)
            assert abs(cert.gradient(j) - fd) <= 1e-2, (c, j, cert.gradient(j), fd)
