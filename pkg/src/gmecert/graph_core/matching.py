"""Maximum-cardinality matching on general graphs (Edmonds' blossom algorithm)."""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .graph import Edge, Graph


def _blossom(num: int, adj: list[list[int]]) -> list[int]:
    """Return ``match`` with ``match[v]`` the partner of ``v`` or ``-1``.

    Standard O(V^3) formulation: grow alternating trees by BFS from each
    free vertex, contracting odd cycles by relabelling their base.
    """
    match = [-1] * num
    parent = [-1] * num
    base = list(range(num))

    def lca(a: int, b: int) -> int:
        seen = [False] * num
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
        while base[v] != b:
            in_blossom[base[v]] = in_blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_path(root: int) -> int:
        used = [False] * num
        for i in range(num):
            parent[i] = -1
            base[i] = i
        used[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    in_blossom = [False] * num
                    mark_path(v, cur, to, in_blossom)
                    mark_path(to, cur, v, in_blossom)
                    for i in range(num):
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to
                    used[match[to]] = True
                    queue.append(match[to])
        return -1

    # greedy warm start; the augmenting search fixes any suboptimal choice
    for v in range(num):
        if match[v] == -1:
            for to in adj[v]:
                if match[to] == -1:
                    match[v], match[to] = to, v
                    break

    for v in range(num):
        if match[v] != -1:
            continue
        end = find_path(v)
        while end != -1:
            pv = parent[end]
            ppv = match[pv]
            match[end] = pv
            match[pv] = end
            end = ppv
    return match


def matching_from_edges(edges: Iterable[Edge]) -> set[Edge]:
    """Maximum-cardinality matching of the graph spanned by ``edges``."""
    edges = list(edges)
    verts = sorted({v for e in edges for v in e})
    index = {v: i for i, v in enumerate(verts)}
    adj: list[list[int]] = [[] for _ in verts]
    for a, b in edges:
        adj[index[a]].append(index[b])
        adj[index[b]].append(index[a])
    match = _blossom(len(verts), adj)
    out = set()
    for i, j in enumerate(match):
        if j > i:
            a, b = verts[i], verts[j]
            out.add((a, b) if a < b else (b, a))
    return out


def max_cardinality_matching(graph: Graph) -> set[Edge]:
    return matching_from_edges(graph.edges)
