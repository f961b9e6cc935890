"""Graph-state witness, k-separability bounds, optimal gamma and noise thresholds.

The witness of a record at weight ``gamma`` is

    W(gamma) = sum_i |<S_i>| + gamma * sum_{(i,j) in E} |<S_i S_j>|

and a k-separable state satisfies ``W(gamma) <= n + gamma*|E| - R(gamma)``
with ``R`` the reduction term of :mod:`gmecert.graph_core.reduction` (tight)
or ``1 + gamma*(k - 1)`` (loose). Bounds are exact rationals; witness values
are floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Literal, Sequence

import numpy as np

from .graph_core.graph import Graph
from .graph_core.partitions import PartitionLabeling
from .graph_core.reduction import (
    GammaLike,
    check_gamma,
    collect_profile,
    fixed_partition_stats,
)
from .records import MEASURED, SDP_BOUND, Label, MeasurementRecord, RecordError

BoundKind = Literal["tight", "loose"]
REPORT_SCHEMA = "gmecert.report/1"
ZERO_TOL = 1e-6
TIE_TOL = 1e-12


def _check_kind(kind: str) -> None:
    if kind not in ("tight", "loose"):
        raise ValueError(f"bound kind must be 'tight' or 'loose', got {kind!r}")


def _check_k(graph: Graph, k: int) -> None:
    if not 2 <= k <= graph.n:
        raise ValueError(f"k must satisfy 2 <= k <= n={graph.n}, got {k}")


# -- witness ----------------------------------------------------------------


def witness_value(record: MeasurementRecord, gamma: GammaLike) -> float:
    g = float(check_gamma(gamma))
    graph = record.graph
    missing = [v for v in range(1, graph.n + 1) if v not in record.vertex_terms]
    if missing:
        raise RecordError(f"missing vertex terms {missing}")
    vertex = sum(record.vertex_terms[v].magnitude for v in range(1, graph.n + 1))
    edge = sum(record.edge_term(e).magnitude for e in graph.edge_list)
    return vertex + g * edge


# -- bounds -----------------------------------------------------------------


def loose_reduction(k: int, gamma: GammaLike) -> Fraction:
    return 1 + check_gamma(gamma) * (k - 1)


def reduction(graph: Graph, k: int, gamma: GammaLike, kind: BoundKind = "tight",
              cap: int | None = None) -> Fraction:
    _check_kind(kind)
    _check_k(graph, k)
    if kind == "loose":
        return loose_reduction(k, gamma)
    return collect_profile(graph, k, cap).reduction(gamma)


def ksep_bound(graph: Graph, k: int, gamma: GammaLike, kind: BoundKind = "tight",
               cap: int | None = None) -> Fraction:
    """Largest witness value any k-separable state can reach."""
    g = check_gamma(gamma)
    return graph.n + g * graph.num_edges - reduction(graph, k, g, kind, cap)


def fixed_partition_bound(graph: Graph, labeling: PartitionLabeling | Sequence[int],
                          gamma: GammaLike) -> Fraction:
    """Bound for states separable with respect to one given partition."""
    labels = labeling.labels if isinstance(labeling, PartitionLabeling) else labeling
    k, nv, mcm = fixed_partition_stats(graph, labels)
    if k < 2:
        raise ValueError("a fixed partition needs at least two blocks")
    g = check_gamma(gamma)
    return graph.n + g * (graph.num_edges - nv) - (1 - g) * mcm


def candidate_gammas(graph: Graph, k: int, kind: BoundKind = "tight",
                     cap: int | None = None) -> list[Fraction]:
    """Gamma values where the optimum of any affine-minus-R objective can sit."""
    _check_kind(kind)
    _check_k(graph, k)
    if kind == "loose":
        return [Fraction(0), Fraction(1)]
    return collect_profile(graph, k, cap).candidate_gammas()


# -- uncertainty ------------------------------------------------------------


def witness_gradient(record: MeasurementRecord, gamma: GammaLike) -> tuple[list[Label], np.ndarray, list[Label]]:
    """Derivative of the witness with respect to every measured term.

    Returns ``(labels, gradient, flagged)``; ``flagged`` lists measured terms
    whose magnitude is below the zero tolerance and therefore received the
    conservative derivative 1 instead of a sign.
    """
    g = float(check_gamma(gamma))
    labels = record.measured_labels()
    index = {lb: i for i, lb in enumerate(labels)}
    grad = np.zeros(len(labels))
    flagged: list[Label] = []
    for lb in labels:
        value = record.term(lb).value
        weight = 1.0 if isinstance(lb, int) else g
        if abs(value) < ZERO_TOL:
            flagged.append(lb)
            sign = 1.0
        else:
            sign = math.copysign(1.0, value)
        grad[index[lb]] += weight * sign
    for e in record.graph.edge_list:
        t = record.edge_term(e)
        if t.provenance != SDP_BOUND or t.value <= 0 or not t.gradient:
            continue
        for v, d in t.gradient.items():
            if v in index:
                grad[index[v]] += g * d
    return labels, grad, flagged


def uncertainty_details(record: MeasurementRecord, gamma: GammaLike) -> tuple[float, list[Label]]:
    _, grad, flagged = witness_gradient(record, gamma)
    cov = record.covariance_matrix()
    var = float(grad @ cov @ grad)
    return math.sqrt(max(var, 0.0)), flagged


def propagate_uncertainty(record: MeasurementRecord, gamma: GammaLike) -> float:
    """First-order standard deviation of the witness, ``sqrt(g^T C g)``."""
    return uncertainty_details(record, gamma)[0]


# -- optimal gamma and certification ----------------------------------------


@dataclass
class KResult:
    k: int
    gamma: Fraction
    witness: float
    bound: Fraction
    margin: float
    sigma: float | None = None
    margin_in_sigmas: float | None = None

    @property
    def violated(self) -> bool:
        return self.margin > 0

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "gamma": str(self.gamma),
            "witness": self.witness,
            "bound": str(self.bound),
            "bound_float": float(self.bound),
            "margin": self.margin,
            "sigma": self.sigma,
            "margin_in_sigmas": self.margin_in_sigmas,
            "violated": self.violated,
        }


def _evaluate(record: MeasurementRecord, k: int, gamma: Fraction, kind: BoundKind,
              cap: int | None) -> KResult:
    w = witness_value(record, gamma)
    b = ksep_bound(record.graph, k, gamma, kind, cap)
    return KResult(k, gamma, w, b, w - float(b))


def optimal_gamma(graph: Graph, k: int, record: MeasurementRecord, kind: BoundKind = "tight",
                  cap: int | None = None) -> tuple[Fraction, float]:
    """``(gamma*, margin)`` maximising witness minus bound; ties go to larger gamma."""
    res = _optimal(graph, k, record, kind, cap)
    return res.gamma, res.margin


def _optimal(graph: Graph, k: int, record: MeasurementRecord, kind: BoundKind,
             cap: int | None) -> KResult:
    if record.graph != graph:
        raise RecordError("record graph differs from the requested graph")
    best: KResult | None = None
    for g in candidate_gammas(graph, k, kind, cap):
        r = _evaluate(record, k, g, kind, cap)
        if best is None or r.margin >= best.margin - TIE_TOL:
            best = r
    assert best is not None
    return best


def _attach_sigma(record: MeasurementRecord, res: KResult, flags: set) -> None:
    if not record.has_uncertainty():
        return
    sigma, flagged = uncertainty_details(record, res.gamma)
    flags.update(flagged)
    res.sigma = sigma
    if sigma > 0:
        res.margin_in_sigmas = res.margin / sigma


@dataclass
class CertificationReport:
    n: int
    bound_kind: str
    results: list[KResult]
    smallest_violated_k: int | None
    provenance: dict[str, int]
    fixed_gamma: Fraction | None = None
    fixed_results: list[KResult] = field(default_factory=list)
    zero_flags: list[Label] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    bound_table: list[dict[str, Any]] = field(default_factory=list)

    @property
    def gme(self) -> bool:
        return self.smallest_violated_k == 2

    @property
    def status(self) -> str:
        return "certified" if self.smallest_violated_k is not None else "inconclusive"

    def result(self, k: int) -> KResult:
        for r in self.results:
            if r.k == k:
                return r
        raise KeyError(k)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": REPORT_SCHEMA,
            "n": self.n,
            "bound_kind": self.bound_kind,
            "status": self.status,
            "certified_k": self.smallest_violated_k,
            "smallest_violated_k": self.smallest_violated_k,
            "gme": self.gme,
            "results": [r.to_json() for r in self.results],
            "provenance": dict(self.provenance),
            "zero_magnitude_terms": [lb if isinstance(lb, int) else list(lb) for lb in self.zero_flags],
            "notes": list(self.notes),
            "bound_table": self.bound_table,
        }
        if self.fixed_gamma is not None:
            out["fixed_gamma"] = str(self.fixed_gamma)
            out["fixed_gamma_results"] = [r.to_json() for r in self.fixed_results]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def certify(
    graph: Graph,
    record: MeasurementRecord,
    kind: BoundKind = "tight",
    k_values: Iterable[int] | None = None,
    all_k: bool = False,
    fixed_gamma: GammaLike | None = None,
    cap: int | None = None,
) -> CertificationReport:
    """Scan k ascending and report the smallest k whose optimal margin is positive.

    By default the scan stops at the first violation; ``all_k`` evaluates
    every k. The witness-independent bound table always covers every k.
    With ``fixed_gamma`` the margins at that gamma are reported
    alongside the optimised ones and the certified k is taken from them.
    """
    _check_kind(kind)
    ks = sorted(set(k_values)) if k_values is not None else list(range(2, graph.n + 1))
    for k in ks:
        _check_k(graph, k)
    fg = None if fixed_gamma is None else check_gamma(fixed_gamma)
    results: list[KResult] = []
    fixed: list[KResult] = []
    flags: set = set()
    smallest: int | None = None
    for k in ks:
        res = _optimal(graph, k, record, kind, cap)
        _attach_sigma(record, res, flags)
        results.append(res)
        hit = res.violated
        if fg is not None:
            fr = _evaluate(record, k, fg, kind, cap)
            _attach_sigma(record, fr, flags)
            fixed.append(fr)
            hit = fr.violated
        if hit and smallest is None:
            smallest = k
            if not all_k:
                break
    notes = []
    if flags:
        notes.append("terms with magnitude below 1e-6 used derivative 1 in uncertainty propagation")
    return CertificationReport(
        graph.n, kind, results, smallest, record.provenance_summary(), fg, fixed,
        sorted(flags, key=lambda lb: (not isinstance(lb, int), lb)), notes,
        bound_table(graph, ks, kind, cap),
    )


def bound_table(graph: Graph, k_values: Iterable[int], kind: BoundKind = "tight",
                cap: int | None = None) -> list[dict[str, Any]]:
    """Bound at every candidate gamma for each k; independent of any record."""
    rows = []
    for k in k_values:
        gammas = candidate_gammas(graph, k, kind, cap)
        rows.append({
            "k": k,
            "bounds": [
                {"gamma": str(g), "bound": str(b), "bound_float": float(b)}
                for g, b in ((g, ksep_bound(graph, k, g, kind, cap)) for g in gammas)
            ],
        })
    return rows


# -- white-noise thresholds -------------------------------------------------


def white_noise_argmax(graph: Graph, k: int, kind: BoundKind = "tight",
                       cap: int | None = None) -> tuple[Fraction, list[Fraction]]:
    """Threshold and every candidate gamma attaining it."""
    values = {
        g: reduction(graph, k, g, kind, cap) / (graph.n + g * graph.num_edges)
        for g in candidate_gammas(graph, k, kind, cap)
    }
    best = max(values.values())
    return best, [g for g, v in values.items() if v == best]


def white_noise_threshold(graph: Graph, k: int, kind: BoundKind = "tight",
                          cap: int | None = None) -> Fraction:
    """Largest white-noise ratio below which ``rho_G(p)`` violates k-separability."""
    return white_noise_argmax(graph, k, kind, cap)[0]
