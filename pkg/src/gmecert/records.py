"""Measurement records: stabilizer expectation values with uncertainties.

Each term carries a provenance:

``measured``
    an estimated expectation value in [-1, 1];
``sdp_lower_bound``
    a certified lower bound in [0, 1] on the *absolute* expectation value,
    optionally with its gradient with respect to the measured vertex terms;
``absent``
    no information; contributes zero to the witness.

An optional covariance matrix is indexed by :meth:`MeasurementRecord.measured_labels`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Union

import numpy as np

from .graph_core.graph import Edge, Graph, graph_from_json
from .pauli import PauliString, SingleQubitClifford, conjugate, edge_stabilizer, gates_from_json, vertex_stabilizer

SCHEMA = "gmecert.record/1"
MEASURED = "measured"
SDP_BOUND = "sdp_lower_bound"
ABSENT = "absent"
PROVENANCES = (MEASURED, SDP_BOUND, ABSENT)

Label = Union[int, Edge]


class RecordError(ValueError):
    pass


@dataclass
class Term:
    value: float
    sigma: float | None = None
    provenance: str = MEASURED
    gradient: dict[int, float] | None = None

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise RecordError(f"unknown provenance {self.provenance!r}")
        self.value = float(self.value)
        if self.sigma is not None:
            self.sigma = float(self.sigma)
            if self.sigma < 0:
                raise RecordError("sigma must be non-negative")
        tol = 1e-9
        if self.provenance == MEASURED and not -1 - tol <= self.value <= 1 + tol:
            raise RecordError(f"measured value {self.value} outside [-1, 1]")
        if self.provenance == SDP_BOUND and not -tol <= self.value <= 1 + tol:
            raise RecordError(f"SDP bound {self.value} outside [0, 1]")

    @property
    def magnitude(self) -> float:
        """Contribution to the witness: ``|value|``, the bound itself, or 0."""
        if self.provenance == ABSENT:
            return 0.0
        if self.provenance == SDP_BOUND:
            return max(0.0, self.value)
        return abs(self.value)


@dataclass
class MeasurementRecord:
    graph: Graph
    vertex_terms: dict[int, Term]
    edge_terms: dict[Edge, Term] = field(default_factory=dict)
    covariance: np.ndarray | None = None
    gates: tuple[SingleQubitClifford, ...] = ()
    notes: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        for v in self.vertex_terms:
            self.graph.check_vertex(v)
        normalized = {}
        for (i, j), t in self.edge_terms.items():
            e = (i, j) if i < j else (j, i)
            if e not in self.graph.edges:
                raise RecordError(f"edge term {e} is not an edge of the graph")
            normalized[e] = t
        self.edge_terms = normalized
        self.gates = tuple(self.gates)
        if self.covariance is not None:
            self.covariance = np.asarray(self.covariance, dtype=float)
            self._check_covariance()

    # -- structure ----------------------------------------------------------

    def edge_term(self, e: Edge) -> Term:
        return self.edge_terms.get(e, Term(0.0, provenance=ABSENT))

    def measured_labels(self) -> list[Label]:
        labels: list[Label] = [
            v for v in range(1, self.graph.n + 1)
            if v in self.vertex_terms and self.vertex_terms[v].provenance == MEASURED
        ]
        labels += [e for e in self.graph.edge_list if self.edge_term(e).provenance == MEASURED]
        return labels

    def term(self, label: Label) -> Term:
        return self.vertex_terms[label] if isinstance(label, int) else self.edge_term(label)

    def _check_covariance(self) -> None:
        c = self.covariance
        m = len(self.measured_labels())
        if c.shape != (m, m):
            raise RecordError(f"covariance shape {c.shape} does not match {m} measured terms")
        if not np.allclose(c, c.T, atol=1e-12):
            raise RecordError("covariance is not symmetric")
        if m and np.linalg.eigvalsh(c).min() < -1e-10:
            raise RecordError("covariance is not positive semidefinite")
        for idx, label in enumerate(self.measured_labels()):
            s = self.term(label).sigma
            if s is not None and abs(c[idx, idx] - s * s) > 1e-9 * max(1.0, s * s):
                raise RecordError(f"covariance diagonal for {label} disagrees with sigma^2")

    def covariance_matrix(self) -> np.ndarray:
        """Explicit covariance, or the diagonal implied by the sigmas."""
        if self.covariance is not None:
            return self.covariance
        sig = []
        for label in self.measured_labels():
            s = self.term(label).sigma
            if s is None:
                raise RecordError(f"no covariance and no sigma for term {label}")
            sig.append(s)
        return np.diag(np.square(sig))

    def has_uncertainty(self) -> bool:
        if self.covariance is not None:
            return True
        return all(self.term(lb).sigma is not None for lb in self.measured_labels())

    # -- operators ----------------------------------------------------------

    def vertex_operator(self, v: int) -> PauliString:
        return conjugate(vertex_stabilizer(self.graph, v), self.gates)

    def edge_operator(self, e: Edge) -> PauliString:
        return conjugate(edge_stabilizer(self.graph, e), self.gates)

    def provenance_summary(self) -> dict[str, int]:
        out = {p: 0 for p in PROVENANCES}
        for t in self.vertex_terms.values():
            out[t.provenance] += 1
        for e in self.graph.edge_list:
            out[self.edge_term(e).provenance] += 1
        return out

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        def term_json(t: Term) -> dict[str, Any]:
            d: dict[str, Any] = {"value": t.value, "sigma": t.sigma, "provenance": t.provenance}
            if t.gradient:
                d["gradient"] = {str(k): v for k, v in sorted(t.gradient.items())}
            return d

        out: dict[str, Any] = {
            "schema": SCHEMA,
            "graph": self.graph.to_json(),
            "vertex_terms": [
                {"v": v, **term_json(self.vertex_terms[v])} for v in sorted(self.vertex_terms)
            ],
            "edge_terms": [
                {"e": list(e), **term_json(self.edge_terms[e])}
                for e in self.graph.edge_list
                if e in self.edge_terms
            ],
        }
        if self.covariance is not None:
            out["covariance"] = self.covariance.tolist()
        if self.gates:
            out["gates"] = [g.to_json() for g in self.gates]
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def record_from_json(data: Mapping[str, Any], graph: Graph | None = None) -> MeasurementRecord:
    """Parse the record JSON; ``graph`` overrides the embedded one if given."""
    try:
        g = graph if graph is not None else graph_from_json(data["graph"])
        vt = {
            int(d["v"]): Term(d["value"], d.get("sigma"), d.get("provenance", MEASURED))
            for d in data["vertex_terms"]
        }
        et = {}
        for d in data.get("edge_terms", []):
            i, j = (int(x) for x in d["e"])
            grad = d.get("gradient")
            et[(i, j)] = Term(
                d.get("value", 0.0),
                d.get("sigma"),
                d.get("provenance", MEASURED),
                {int(k): float(v) for k, v in grad.items()} if grad else None,
            )
        cov = data.get("covariance")
        gates = gates_from_json(data.get("gates", []))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, RecordError):
            raise
        raise RecordError(f"malformed record JSON: {exc!r}") from exc
    return MeasurementRecord(
        g, vt, et, None if cov is None else np.asarray(cov, float), tuple(gates),
        list(data.get("notes", [])),
    )
