"""Exact maximum clique via branch and bound on vertex bitsets.

Candidate sets are Python ints used as bitmasks, so set intersection is
a single AND.  The bound is a greedy coloring of the candidate set:
a clique can take at most one vertex per color class, so a branch whose
clique size plus color count cannot beat the incumbent is cut.  The
independence number is the clique number of the complement.
"""

from __future__ import annotations

from typing import Iterator

__all__ = ["iter_bits", "max_clique_size"]


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _color_order(candidates: int, adj: list[int]) -> tuple[list[int], list[int]]:
    # Greedy partition of the candidates into independent color classes;
    # vertices come back in nondecreasing color, each paired with the
    # number of classes used so far (an upper bound on any clique that
    # ends at that vertex).
    order: list[int] = []
    bounds: list[int] = []
    color = 0
    remaining = candidates
    while remaining:
        color += 1
        available = remaining
        while available:
            v = (available & -available).bit_length() - 1
            order.append(v)
            bounds.append(color)
            remaining &= ~(1 << v)
            available &= ~(1 << v)
            available &= ~adj[v]
    return order, bounds


def max_clique_size(adj: list[int], n: int) -> int:
    """Size of a maximum clique; ``adj[v]`` is the neighbor bitmask of v."""
    if n == 0:
        return 0
    best = 1

    def expand(candidates: int, size: int) -> None:
        nonlocal best
        order, bounds = _color_order(candidates, adj)
        for i in range(len(order) - 1, -1, -1):
            if size + bounds[i] <= best:
                return
            v = order[i]
            rest = candidates & adj[v]
            if rest:
                expand(rest, size + 1)
            elif size + 1 > best:
                best = size + 1
            candidates &= ~(1 << v)

    expand((1 << n) - 1, 0)
    return best
