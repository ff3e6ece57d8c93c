"""Node-level and pair-level structural properties.

Node properties are length-n vectors (degree, closeness, betweenness);
pair properties are symmetric n-by-n matrices with a validity mask
(shortest-path distance, same-component indicator).  Everything here is
equivariant: relabeling the graph permutes the outputs identically.

``betweenness_by_enumeration`` is an intentionally naive reference
(explicit enumeration of all shortest paths per pair) kept separate from
the Brandes fast path so the two can be compared in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ShapeError
from .graphs import Graph, all_pairs_distances, bfs_distances, neighbor_lists

__all__ = [
    "NodePropertyVector",
    "PairPropertyMatrix",
    "node_degrees",
    "closeness_centrality",
    "betweenness_centrality",
    "betweenness_by_enumeration",
    "shortest_path_matrix",
    "pair_connectivity",
    "node_property_registry",
    "pair_property_registry",
    "compute_node_properties",
    "compute_pair_properties",
    "write_node_properties_csv",
    "write_pair_matrix",
]


@dataclass(frozen=True)
class NodePropertyVector:
    """A named per-node real vector."""

    name: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ShapeError(f"{self.name}: node values must be 1-d, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ShapeError(f"{self.name}: node values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class PairPropertyMatrix:
    """A named symmetric per-pair matrix; ``mask`` is True where defined."""

    name: str
    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        mask = np.asarray(self.mask, dtype=bool)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ShapeError(f"{self.name}: pair values must be square, got {values.shape}")
        if mask.shape != values.shape:
            raise ShapeError(f"{self.name}: mask shape {mask.shape} != values {values.shape}")
        if not np.array_equal(values, values.T) or not np.array_equal(mask, mask.T):
            raise ShapeError(f"{self.name}: pair matrix must be symmetric")
        values.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)


def node_degrees(g: Graph) -> NodePropertyVector:
    degs = np.zeros(g.n)
    for u, v in g.edges:
        degs[u] += 1
        degs[v] += 1
    return NodePropertyVector("degree", degs)


def closeness_centrality(g: Graph) -> NodePropertyVector | None:
    """(n-1) / sum of distances per node; None when disconnected."""
    dist = all_pairs_distances(g)
    if (dist < 0).any():
        return None
    if g.n == 1:
        return NodePropertyVector("closeness", np.zeros(1))
    return NodePropertyVector("closeness", (g.n - 1) / dist.sum(axis=1))


def betweenness_centrality(g: Graph) -> NodePropertyVector:
    """Unnormalized shortest-path betweenness (Brandes' accumulation).

    Each unordered pair contributes once, hence the final halving of the
    directed accumulation.
    """
    n = g.n
    adj = neighbor_lists(g)
    bc = np.zeros(n)
    for s in range(n):
        sigma = [0.0] * n
        sigma[s] = 1.0
        dist = [-1] * n
        dist[s] = 0
        preds: list[list[int]] = [[] for _ in range(n)]
        order: list[int] = [s]
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            for w in adj[v]:
                if dist[w] == -1:
                    dist[w] = dist[v] + 1
                    order.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return NodePropertyVector("betweenness", bc / 2.0)


def betweenness_by_enumeration(g: Graph) -> NodePropertyVector:
    """Reference betweenness: enumerate every shortest path of every pair."""
    n = g.n
    adj = neighbor_lists(g)
    bc = np.zeros(n)
    for s in range(n):
        dist = bfs_distances(adj, s)
        for t in range(s + 1, n):
            if dist[t] <= 0:
                continue
            paths: list[tuple[int, ...]] = []

            def walk(v: int, trail: tuple[int, ...]) -> None:
                if v == s:
                    paths.append(trail)
                    return
                for u in adj[v]:
                    if dist[u] == dist[v] - 1:
                        walk(u, (u, *trail))

            walk(t, (t,))
            for trail in paths:
                for v in trail[1:-1]:
                    bc[v] += 1.0 / len(paths)
    return NodePropertyVector("betweenness", bc)


def shortest_path_matrix(g: Graph) -> PairPropertyMatrix:
    """BFS distance per pair; unreachable pairs are masked (value 0)."""
    dist = all_pairs_distances(g)
    mask = dist >= 0
    values = np.where(mask, dist, 0).astype(float)
    return PairPropertyMatrix("shortest_path", values, mask)


def pair_connectivity(g: Graph) -> PairPropertyMatrix:
    """1.0 when two nodes share a component (diagonal included), else 0."""
    dist = all_pairs_distances(g)
    values = (dist >= 0).astype(float)
    return PairPropertyMatrix("connectivity", values, np.ones_like(dist, dtype=bool))


def node_property_registry() -> list[tuple[str, Callable[[Graph], NodePropertyVector | None]]]:
    return [
        ("degree", node_degrees),
        ("closeness", closeness_centrality),
        ("betweenness", betweenness_centrality),
    ]


def pair_property_registry() -> list[tuple[str, Callable[[Graph], PairPropertyMatrix]]]:
    return [
        ("shortest_path", shortest_path_matrix),
        ("connectivity", pair_connectivity),
    ]


def compute_node_properties(
    g: Graph,
    registry: Sequence[tuple[str, Callable[[Graph], NodePropertyVector | None]]] | None = None,
) -> dict[str, NodePropertyVector | None]:
    """Every registered node property; None marks an inapplicable one."""
    if registry is None:
        registry = node_property_registry()
    return {name: fn(g) for name, fn in registry}


def compute_pair_properties(
    g: Graph,
    registry: Sequence[tuple[str, Callable[[Graph], PairPropertyMatrix]]] | None = None,
) -> dict[str, PairPropertyMatrix]:
    if registry is None:
        registry = pair_property_registry()
    return {name: fn(g) for name, fn in registry}


def write_node_properties_csv(path: str, g: Graph, vectors: Sequence[NodePropertyVector]) -> None:
    """One row per node; empty cells where a property is inapplicable."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(["node", *(vec.name for vec in vectors)]) + "\n")
        for i in range(g.n):
            cells = [str(i)] + [repr(float(vec.values[i])) for vec in vectors]
            fh.write(",".join(cells) + "\n")


def write_pair_matrix(path: str, matrix: PairPropertyMatrix) -> None:
    """Row-major text dump, one matrix row per line, masked entries as nan."""
    values = np.where(matrix.mask, matrix.values, np.nan)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {matrix.name} {values.shape[0]}x{values.shape[1]}\n")
        for row in values:
            fh.write(" ".join(repr(float(x)) for x in row) + "\n")
