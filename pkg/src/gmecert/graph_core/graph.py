"""Simple undirected graphs on vertices ``1..n`` and the graph families used
throughout the package.

Vertices are 1-based everywhere in the public API. Internally, code that
needs array indexing subtracts one at the point of use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping

Edge = tuple[int, int]


class GraphError(ValueError):
    """Raised for malformed graphs or invalid family parameters."""


def _normalize_edge(i: int, j: int) -> Edge:
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph.

    Attributes:
        n: number of vertices, labelled ``1..n``.
        edges: frozenset of ``(i, j)`` pairs with ``i < j``.
    """

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError(f"graph needs at least one vertex, got n={self.n}")
        normalized = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            a, b = _normalize_edge(i, j)
            if a < 1 or b > self.n:
                raise GraphError(f"edge {e} has an endpoint outside 1..{self.n}")
            normalized.add((a, b))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> Graph:
        return cls(n, frozenset(tuple(e) for e in edges))  # type: ignore[misc]

    @cached_property
    def edge_list(self) -> tuple[Edge, ...]:
        """Edges in lexicographic order; the canonical order for edge terms."""
        return tuple(sorted(self.edges))

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return {v: frozenset(s) for v, s in adj.items()}

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return _normalize_edge(i, j) in self.edges

    def check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise GraphError(f"vertex {v} out of range 1..{self.n}")

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "edges": [list(e) for e in self.edge_list]}

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edge_list)})"


def local_complement(graph: Graph, v: int) -> Graph:
    """Toggle every vertex pair inside the neighbourhood of ``v``."""
    graph.check_vertex(v)
    edges = set(graph.edges)
    for a, b in itertools.combinations(sorted(graph.neighbors[v]), 2):
        edges ^= {(a, b)}
    return Graph(graph.n, frozenset(edges))


# --------------------------------------------------------------------------
# families


def chain(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(1, n)))


def ring(n: int) -> Graph:
    if n < 3:
        raise GraphError("ring needs n >= 3")
    return Graph(n, frozenset([(i, i + 1) for i in range(1, n)] + [(1, n)]))


def star(n: int) -> Graph:
    """Star with vertex 1 at the centre."""
    return Graph(n, frozenset((1, j) for j in range(2, n + 1)))


def complete(n: int) -> Graph:
    return Graph(n, frozenset(itertools.combinations(range(1, n + 1), 2)))


def lattice2d(n_x: int, n_y: int) -> Graph:
    """Rectangular grid; vertex ``(x, y)`` (0-based) is labelled ``y*n_x + x + 1``."""
    if n_x < 1 or n_y < 1:
        raise GraphError("lattice2d needs n_x, n_y >= 1")
    edges = set()
    for y in range(n_y):
        for x in range(n_x):
            v = y * n_x + x + 1
            if x + 1 < n_x:
                edges.add((v, v + 1))
            if y + 1 < n_y:
                edges.add((v, v + n_x))
    return Graph(n_x * n_y, frozenset(edges))


def tree(degree: int, depth: int) -> Graph:
    """Tree whose root has ``degree`` children and every other internal
    vertex has ``degree - 1`` children, so all internal vertices have
    degree ``degree``. Vertices are numbered breadth first from the root.
    """
    if degree < 1 or depth < 0:
        raise GraphError("tree needs degree >= 1 and depth >= 0")
    edges = []
    level = [1]
    count = 1
    for d in range(depth):
        children_per = degree if d == 0 else degree - 1
        nxt = []
        for parent in level:
            for _ in range(children_per):
                count += 1
                edges.append((parent, count))
                nxt.append(count)
        level = nxt
    return Graph(count, frozenset(edges))


def cthulhu(r: int) -> Graph:
    """Complete graph on ``r - 1`` vertices (the head) plus a hub of degree
    ``r`` joined to two adjacent head vertices and ``r - 2`` pendant leaves.

    Labelling: head ``1..r-1``, hub ``r``, leaves ``r+1..2(r-1)``. The hub
    touches head vertices ``r-2`` and ``r-1``.
    """
    if r < 3:
        raise GraphError("cthulhu needs r >= 3")
    n = 2 * (r - 1)
    hub = r
    edges = set(itertools.combinations(range(1, r), 2))
    edges.add((r - 2, hub))
    edges.add((r - 1, hub))
    for leaf in range(r + 1, n + 1):
        edges.add((hub, leaf))
    return Graph(n, frozenset(edges))


_FAMILIES = {
    "chain": (chain, ("n",)),
    "path": (chain, ("n",)),
    "ring": (ring, ("n",)),
    "star": (star, ("n",)),
    "complete": (complete, ("n",)),
    "lattice2d": (lattice2d, ("n_x", "n_y")),
    "tree": (tree, ("degree", "depth")),
    "cthulhu": (cthulhu, ("r",)),
}


def make_family(name: str, **params: int) -> Graph:
    """Build a named graph family, e.g. ``make_family("ring", n=6)``."""
    try:
        builder, keys = _FAMILIES[name]
    except KeyError:
        raise GraphError(f"unknown graph family {name!r}; known: {sorted(_FAMILIES)}") from None
    missing = [k for k in keys if k not in params]
    extra = [k for k in params if k not in keys]
    if missing or extra:
        raise GraphError(f"{name} takes parameters {keys}, got {sorted(params)}")
    values = {k: int(params[k]) for k in keys}
    for k, v in values.items():
        if k == "depth":
            if v < 0:
                raise GraphError("depth must be >= 0")
        elif v < 1:
            raise GraphError(f"parameter {k} must be positive, got {v}")
    return builder(**values)


def graph_from_json(data: Mapping[str, Any]) -> Graph:
    """Parse ``{"n": .., "edges": [[i, j], ..]}`` or ``{"family": .., "params": {..}}``."""
    if "family" in data:
        return make_family(str(data["family"]), **dict(data.get("params", {})))
    try:
        n = int(data["n"])
        edges = [tuple(e) for e in data.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from exc
    for e in edges:
        if len(e) != 2:
            raise GraphError(f"edge {list(e)} is not a pair")
    return Graph.from_edges(n, edges)
