"""Attach certified lower bounds to edge terms that were not measured."""

from __future__ import annotations

import copy

from ..graph_core.graph import Edge, Graph
from ..records import ABSENT, MEASURED, SDP_BOUND, MeasurementRecord, RecordError, Term
from .certificate import DualCertificate, solve_dual, verify_dual_certificate
from .problem import SDP_QUBIT_CAP, SdpError, build_lower_bound_problem


def bound_edge(record: MeasurementRecord, e: Edge, eps: float | None = None,
               qubit_cap: int = SDP_QUBIT_CAP) -> tuple[Term, DualCertificate]:
    """Lower-bound ``|<S_i S_j>|`` from the measured ``<S_i>`` and ``<S_j>``.

    ``eps`` overrides the per-constraint tolerance; by default each
    constraint uses its term's sigma (0 when unknown).
    """
    i, j = e
    cons = []
    for v in (i, j):
        t = record.vertex_terms.get(v)
        if t is None or t.provenance != MEASURED:
            raise RecordError(f"vertex term {v} must be measured to bound edge {e}")
        tol = eps if eps is not None else (t.sigma or 0.0)
        cons.append((record.vertex_operator(v), t.value, tol))
    problem = build_lower_bound_problem([record.edge_operator(e)], cons, qubit_cap=qubit_cap)
    cert = solve_dual(problem)
    sound, report = verify_dual_certificate(problem, cert)
    if not sound:
        raise SdpError(f"certificate for edge {e} failed verification: {report.violations}")
    value = min(1.0, max(0.0, cert.beta))
    grad = {i: cert.gradient(0), j: cert.gradient(1)} if cert.beta > 0 else None
    return Term(value, None, SDP_BOUND, grad), cert


def bound_unmeasured_edges(graph: Graph, record: MeasurementRecord, eps: float | None = None,
                           qubit_cap: int = SDP_QUBIT_CAP) -> MeasurementRecord:
    """Return a copy of ``record`` with every absent edge term SDP-bounded.

    Measured edge terms are kept. Edges whose reduced support exceeds
    ``qubit_cap`` stay absent and a note is added to the record.
    """
    if record.graph != graph:
        raise RecordError("record graph differs from the requested graph")
    out = copy.deepcopy(record)
    for e in graph.edge_list:
        if out.edge_term(e).provenance != ABSENT:
            continue
        try:
            term, _ = bound_edge(record, e, eps, qubit_cap)
        except SdpError as exc:
            out.notes.append(f"edge {list(e)} left absent: {exc}")
            continue
        out.edge_terms[e] = term
    return out
