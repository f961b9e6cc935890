"""Restricted-growth enumeration of set partitions into exactly ``k`` blocks.

A partition of ``n`` items is stored as a label string ``a`` with
``a[0] == 0`` and ``a[j+1] <= 1 + max(a[:j+1])``; items share a block iff they
share a label. The stepping routine is Stamatelatos & Efraimidis'
Algorithm Y, which jumps directly between strings that use exactly ``k``
labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Iterator, Sequence


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class PartitionLabeling:
    labels: tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(int(a) for a in self.labels))
        check_restricted_growth(self.labels, self.k)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def num_blocks(self) -> int:
        return len(set(self.labels))

    def blocks(self) -> list[list[int]]:
        """Blocks as lists of 1-based vertices, ordered by label."""
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for v, a in enumerate(self.labels, start=1):
            out[a].append(v)
        return out


def check_restricted_growth(labels: Sequence[int], k: int) -> None:
    if not labels:
        raise PartitionError("empty labeling")
    if labels[0] != 0:
        raise PartitionError(f"labeling must start with 0, got {list(labels)}")
    top = 0
    for a in labels[1:]:
        if a < 0 or a > top + 1:
            raise PartitionError(f"labeling {list(labels)} violates restricted growth")
        top = max(top, a)
    if top > k - 1:
        raise PartitionError(f"labeling {list(labels)} uses more than k={k} labels")


def _step(a: list[int], k: int) -> bool:
    """Advance ``a`` in place to the next k-partition; return the end flag.

    Indices here are 0-based; the comments give the 1-based positions of
    the original formulation.
    """
    n = len(a)
    b = [0] * n
    for i in range(1, n):
        b[i] = max(a[i - 1], b[i - 1])
    c = n - 1
    end = False
    while a[c] == k - 1 or a[c] > b[c]:
        c -= 1
        if c == 0:
            end = True
    if not end:
        a[c] += 1
        for j in range(c + 1, n):
            a[j] = 0
            b[j] = max(a[j - 1], b[j - 1])
    if max(a[n - 1], b[n - 1]) != k - 1:
        for r in range(1, k):
            pos = n - r
            if k - r > b[pos]:
                a[pos] = k - r
            else:
                break
    return end


def next_k_partition(state: PartitionLabeling, n: int, k: int) -> tuple[PartitionLabeling, bool]:
    """One step of the enumeration: the next k-partition after ``state``.

    Starting from the all-zero labeling and feeding each output back in
    visits every k-partition exactly once; outputs carrying ``end=True``
    are not new partitions.
    """
    if len(state.labels) != n:
        raise PartitionError(f"labeling length {len(state.labels)} != n={n}")
    if not 1 <= k <= n:
        raise PartitionError(f"need 1 <= k <= n, got k={k}, n={n}")
    check_restricted_growth(state.labels, k)
    if k == 1:
        return PartitionLabeling((0,) * n, 1), True
    a = list(state.labels)
    end = _step(a, k)
    return PartitionLabeling(tuple(a), k), end


def iter_k_partitions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Yield every k-partition of ``n`` items as a restricted-growth tuple."""
    if not 1 <= k <= n:
        raise PartitionError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k == 1:
        yield (0,) * n
        return
    a = [0] * n
    while True:
        if _step(a, k):
            return
        yield tuple(a)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind from the alternating sum."""
    if k < 0 or n < 0:
        raise ValueError("n and k must be non-negative")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    total = sum((-1) ** (k - j) * comb(k, j) * j**n for j in range(k + 1))
    return total // factorial(k)
