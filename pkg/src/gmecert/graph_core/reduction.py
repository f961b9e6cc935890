"""Cut subgraphs of k-partitions and the bound-reduction term.

For a k-partition the cut subgraph keeps the edges whose endpoints carry
different labels. Each cut contributes the pair ``(|V_cut|, |M_cut|)``
(vertex count, maximum-matching size) and the reduction term is

    R(gamma) = min over k-partitions of gamma*|V_cut| + (1 - gamma)*|M_cut|.

All gamma arithmetic is done with :class:`fractions.Fraction`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from numbers import Rational
from typing import Iterable, Sequence, Union

from .graph import Edge, Graph
from .matching import matching_from_edges
from .partitions import PartitionError, check_restricted_growth, iter_k_partitions, stirling2

GammaLike = Union[int, float, str, Fraction]

DEFAULT_ENUMERATION_CAP = 10**7
ENUM_CAP_ENV = "GMECERT_ENUM_CAP"


class EnumerationCapExceeded(RuntimeError):
    """The number of k-partitions exceeds the configured cap; use the loose bound."""


def enumeration_cap() -> int:
    raw = os.environ.get(ENUM_CAP_ENV)
    return int(raw) if raw else DEFAULT_ENUMERATION_CAP


def as_fraction(gamma: GammaLike) -> Fraction:
    """Exact rational for ``gamma``; floats go through their shortest repr."""
    if isinstance(gamma, Fraction):
        return gamma
    if isinstance(gamma, Rational):
        return Fraction(int(gamma.numerator), int(gamma.denominator))
    if isinstance(gamma, float):
        return Fraction(repr(gamma))
    return Fraction(gamma)


def check_gamma(gamma: GammaLike) -> Fraction:
    g = as_fraction(gamma)
    if not 0 <= g <= 1:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    return g


@dataclass(frozen=True)
class CutSubgraph:
    vertices: frozenset[int]
    edges: frozenset[Edge]

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def matching_size(self) -> int:
        return len(matching_from_edges(self.edges))


def cut_subgraph(graph: Graph, labels: Sequence[int]) -> CutSubgraph:
    """Edges whose endpoints carry different labels, isolated vertices dropped."""
    if len(labels) != graph.n:
        raise PartitionError(f"labeling length {len(labels)} != n={graph.n}")
    cut = frozenset((i, j) for i, j in graph.edges if labels[i - 1] != labels[j - 1])
    return CutSubgraph(frozenset(v for e in cut for v in e), cut)


def _check_k(graph: Graph, k: int) -> None:
    if not 2 <= k <= graph.n:
        raise ValueError(f"k must satisfy 2 <= k <= n={graph.n}, got {k}")


def _check_cap(graph: Graph, k: int, cap: int | None) -> None:
    cap = enumeration_cap() if cap is None else cap
    count = stirling2(graph.n, k)
    if count > cap:
        raise EnumerationCapExceeded(
            f"{count} partitions of n={graph.n} into k={k} blocks exceed the cap {cap}; "
            "use the loose bound instead"
        )


def _iter_cut_stats(graph: Graph, k: int) -> Iterable[tuple[int, int]]:
    """Yield ``(|V_cut|, |M_cut|)`` for every k-partition.

    Cut statistics depend only on the set of cut edges, so results are
    memoised per edge bitmask; the number of distinct masks is at most
    ``2**|E|`` and usually far below the partition count.
    """
    ends = [(i - 1, j - 1) for i, j in graph.edge_list]
    memo: dict[int, tuple[int, int]] = {}
    for a in iter_k_partitions(graph.n, k):
        mask = 0
        bit = 1
        for u, v in ends:
            if a[u] != a[v]:
                mask |= bit
            bit <<= 1
        stats = memo.get(mask)
        if stats is None:
            cut = [graph.edge_list[t] for t in range(len(ends)) if mask >> t & 1]
            verts = {x for e in cut for x in e}
            stats = (len(verts), len(matching_from_edges(cut)))
            memo[mask] = stats
        yield stats


def reduction_term(graph: Graph, k: int, gamma: GammaLike, cap: int | None = None) -> Fraction:
    """Minimum of ``gamma*|V_cut| + (1-gamma)*|M_cut|`` over all k-partitions.

    This walks every partition directly; :func:`collect_profile` is the
    reusable variant when several gamma values are needed.
    """
    _check_k(graph, k)
    g = check_gamma(gamma)
    _check_cap(graph, k, cap)
    best: Fraction | None = None
    for v, m in _iter_cut_stats(graph, k):
        x = g * v + (1 - g) * m
        if best is None or x < best:
            best = x
    assert best is not None
    return best


@dataclass(frozen=True)
class ParetoCutProfile:
    """Non-dominated ``(|V_cut|, |M_cut|)`` pairs over all k-partitions."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> ParetoCutProfile:
        return cls(tuple(pareto_front(pairs)))

    def reduction(self, gamma: GammaLike) -> Fraction:
        g = check_gamma(gamma)
        return min(g * v + (1 - g) * m for v, m in self.pairs)

    def breakpoints(self) -> list[Fraction]:
        """Interior gamma values where the minimising pair changes."""
        out = set()
        for (v1, m1), (v2, m2) in combinations(self.pairs, 2):
            # gamma*v1 + (1-gamma)*m1 == gamma*v2 + (1-gamma)*m2
            slope = (v1 - m1) - (v2 - m2)
            if slope == 0:
                continue
            g = Fraction(m2 - m1, slope)
            if 0 < g < 1 and self.reduction(g) == g * v1 + (1 - g) * m1:
                out.add(g)
        return sorted(out)

    def candidate_gammas(self) -> list[Fraction]:
        return sorted({Fraction(0), Fraction(1), *self.breakpoints()})


def pareto_front(pairs: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Drop every pair that is coordinatewise >= some other distinct pair."""
    front: list[tuple[int, int]] = []
    for v, m in sorted(set(pairs)):
        # sorted by v ascending; a pair survives iff its m beats all smaller-v pairs
        if not front or m < front[-1][1]:
            front.append((v, m))
    return front


@lru_cache(maxsize=256)
def _profile_cached(graph: Graph, k: int) -> ParetoCutProfile:
    return ParetoCutProfile.from_pairs(_iter_cut_stats(graph, k))


def collect_profile(graph: Graph, k: int, cap: int | None = None) -> ParetoCutProfile:
    """Enumerate all k-partitions once and keep the Pareto frontier."""
    _check_k(graph, k)
    _check_cap(graph, k, cap)
    return _profile_cached(graph, k)


def fixed_partition_stats(graph: Graph, labels: Sequence[int]) -> tuple[int, int, int]:
    """``(k, |V_cut|, |M_cut|)`` for one explicit partition."""
    labels = tuple(int(a) for a in labels)
    if len(labels) != graph.n:
        raise PartitionError(f"labeling length {len(labels)} != n={graph.n}")
    k = len(set(labels))
    check_restricted_growth(canonical_labels(labels), k)
    cut = cut_subgraph(graph, labels)
    return k, cut.num_vertices, cut.matching_size()


def canonical_labels(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel blocks in order of first appearance (restricted-growth form)."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(a, len(seen)) for a in labels)
