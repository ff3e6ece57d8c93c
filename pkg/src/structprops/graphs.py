"""Graph data model, validation, and corpus file IO.

Graphs are simple and undirected: no self-loops, no duplicate edges, no
weights.  Node indices are 0-based and contiguous.  Inputs that violate
this (directed pairs, out-of-range endpoints) are rejected rather than
coerced.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import CorpusParseError, GraphValidationError

__all__ = [
    "Graph",
    "Corpus",
    "adjacency_matrix",
    "degree_matrix",
    "neighbor_lists",
    "adjacency_bitsets",
    "relabel",
    "complement",
    "connected_component_labels",
    "bfs_distances",
    "all_pairs_distances",
    "load_corpus",
    "save_corpus",
]


def _normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    ``edges`` holds unordered pairs normalized to ``u < v``.  ``features``
    is an optional ``(n, d)`` float matrix and ``label`` an optional
    integer class; both are carried through IO untouched.  ``meta`` stores
    provenance (e.g. mixup parents) and is not part of graph identity.
    """

    id: str
    domain: str
    n: int
    edges: frozenset[tuple[int, int]]
    features: np.ndarray | None = None
    label: int | None = None
    meta: Mapping[str, object] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise GraphValidationError(f"graph {self.id!r}: node count must be >= 1, got {self.n}")
        for u, v in self.edges:
            if u == v:
                raise GraphValidationError(f"graph {self.id!r}: self-loop at node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphValidationError(
                    f"graph {self.id!r}: edge ({u}, {v}) outside node range [0, {self.n})"
                )
            if u > v:
                raise GraphValidationError(f"graph {self.id!r}: edge ({u}, {v}) not normalized")
        if self.features is not None:
            feats = np.asarray(self.features, dtype=float)
            if feats.ndim != 2 or feats.shape[0] != self.n:
                raise GraphValidationError(
                    f"graph {self.id!r}: feature matrix must have {self.n} rows, "
                    f"got shape {feats.shape}"
                )
            feats.setflags(write=False)
            object.__setattr__(self, "features", feats)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Sequence[int]],
        n: int,
        *,
        id: str = "g",
        domain: str = "default",
        features=None,
        label: int | None = None,
        meta: Mapping[str, object] | None = None,
    ) -> "Graph":
        """Build a graph from an iterable of (u, v) pairs, normalizing order."""
        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphValidationError(f"graph {id!r}: self-loop at node {u}")
            normalized.add(_normalize_edge(u, v))
        return cls(
            id=id,
            domain=domain,
            n=int(n),
            edges=frozenset(normalized),
            features=features,
            label=label,
            meta=meta,
        )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _normalize_edge(u, v) in self.edges


def adjacency_matrix(g: Graph, dtype=float) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n), dtype=dtype)
    for u, v in g.edges:
        a[u, v] = 1
        a[v, u] = 1
    return a


def degree_matrix(a: np.ndarray) -> np.ndarray:
    """Diagonal matrix of row sums of an adjacency matrix."""
    a = np.asarray(a)
    return np.diag(a.sum(axis=1))


def neighbor_lists(g: Graph) -> list[list[int]]:
    """Sorted adjacency lists, one per node."""
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    for row in adj:
        row.sort()
    return adj


def adjacency_bitsets(g: Graph) -> list[int]:
    """Neighborhood of each node as an int bitmask (bit j set iff j adjacent)."""
    bits = [0] * g.n
    for u, v in g.edges:
        bits[u] |= 1 << v
        bits[v] |= 1 << u
    return bits


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Apply a node permutation: node i of the input becomes ``perm[i]``."""
    perm = list(perm)
    if sorted(perm) != list(range(g.n)):
        raise GraphValidationError(f"not a permutation of 0..{g.n - 1}: {perm}")
    edges = [(perm[u], perm[v]) for u, v in g.edges]
    feats = None
    if g.features is not None:
        feats = np.empty_like(g.features)
        feats[list(perm), :] = g.features
    return Graph.from_edges(
        edges, g.n, id=g.id, domain=g.domain, features=feats, label=g.label, meta=g.meta
    )


def complement(g: Graph) -> Graph:
    """Complement graph on the same nodes."""
    edges = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if (u, v) not in g.edges
    ]
    return Graph.from_edges(edges, g.n, id=f"{g.id}~", domain=g.domain)


def connected_component_labels(g: Graph) -> list[int]:
    """Component index per node, numbered in order of first appearance."""
    adj = neighbor_lists(g)
    labels = [-1] * g.n
    current = 0
    for start in range(g.n):
        if labels[start] != -1:
            continue
        labels[start] = current
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if labels[w] == -1:
                    labels[w] = current
                    queue.append(w)
        current += 1
    return labels


def bfs_distances(adj: Sequence[Sequence[int]], source: int) -> list[int]:
    """Hop counts from ``source``; -1 marks unreachable nodes."""
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] == -1:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def all_pairs_distances(g: Graph) -> np.ndarray:
    """Integer (n, n) hop-count matrix, -1 where no path exists."""
    adj = neighbor_lists(g)
    out = np.empty((g.n, g.n), dtype=np.int64)
    for source in range(g.n):
        out[source] = bfs_distances(adj, source)
    return out


@dataclass(frozen=True)
class Corpus:
    """Ordered collection of graphs partitioned by domain tag."""

    graphs: tuple[Graph, ...]
    domains: Mapping[str, tuple[int, ...]] = field(init=False)

    def __post_init__(self):
        seen: set[str] = set()
        blocks: dict[str, list[int]] = {}
        for i, g in enumerate(self.graphs):
            if g.id in seen:
                raise GraphValidationError(f"duplicate graph id {g.id!r}")
            seen.add(g.id)
            blocks.setdefault(g.domain, []).append(i)
        object.__setattr__(
            self, "domains", {d: tuple(ix) for d, ix in blocks.items()}
        )

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[Graph]:
        return iter(self.graphs)

    def __getitem__(self, i: int) -> Graph:
        return self.graphs[i]

    @classmethod
    def from_graphs(cls, graphs: Iterable[Graph]) -> "Corpus":
        return cls(graphs=tuple(graphs))

    def domain_of(self, i: int) -> str:
        return self.graphs[i].domain

    def extend(self, extra: Iterable[Graph]) -> "Corpus":
        return Corpus.from_graphs(self.graphs + tuple(extra))


def _graph_from_record(record: dict, line: int | None = None) -> Graph:
    try:
        n = int(record["n"])
        edges = record.get("edges", [])
        return Graph.from_edges(
            edges,
            n,
            id=str(record.get("id", f"g{line}")),
            domain=str(record.get("domain", "default")),
            features=record.get("features"),
            label=None if record.get("label") is None else int(record["label"]),
            meta=record.get("meta"),
        )
    except GraphValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusParseError(f"bad graph record: {exc}", line=line) from exc


def _load_jsonl(path: str) -> Corpus:
    graphs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
            if not isinstance(record, dict):
                raise CorpusParseError("record is not a JSON object", line=lineno)
            graphs.append(_graph_from_record(record, line=lineno))
    return Corpus.from_graphs(graphs)


def _load_edge_list_dir(path: str) -> Corpus:
    graphs = []
    for domain in sorted(os.listdir(path)):
        subdir = os.path.join(path, domain)
        if not os.path.isdir(subdir):
            continue
        for fname in sorted(os.listdir(subdir)):
            fpath = os.path.join(subdir, fname)
            if not os.path.isfile(fpath):
                continue
            edges = []
            max_node = -1
            with open(fpath, "r", encoding="utf-8") as fh:
                for lineno, raw in enumerate(fh, start=1):
                    raw = raw.strip()
                    if not raw or raw.startswith("#"):
                        continue
                    parts = raw.split()
                    if len(parts) != 2:
                        raise CorpusParseError(
                            f"{fpath}: expected 'u v' pair, got {raw!r}", line=lineno
                        )
                    try:
                        u, v = int(parts[0]), int(parts[1])
                    except ValueError as exc:
                        raise CorpusParseError(
                            f"{fpath}: non-integer endpoint in {raw!r}", line=lineno
                        ) from exc
                    edges.append((u, v))
                    max_node = max(max_node, u, v)
            name = os.path.splitext(fname)[0]
            graphs.append(
                Graph.from_edges(edges, max_node + 1, id=name, domain=domain)
            )
    return Corpus.from_graphs(graphs)


def load_corpus(path: str, format: str = "jsonl") -> Corpus:
    """Load a corpus from ``path``.

    ``format`` is ``"jsonl"`` (one graph object per line) or
    ``"edge-list-dir"`` (one whitespace-separated edge per line per file,
    domain taken from the subdirectory name).
    """
    if format == "jsonl":
        return _load_jsonl(path)
    if format == "edge-list-dir":
        return _load_edge_list_dir(path)
    raise ValueError(f"unknown corpus format {format!r}")


def graph_to_record(g: Graph) -> dict:
    record: dict = {"id": g.id, "domain": g.domain, "n": g.n, "edges": g.sorted_edges()}
    if g.features is not None:
        record["features"] = np.asarray(g.features).tolist()
    if g.label is not None:
        record["label"] = g.label
    if g.meta:
        record["meta"] = dict(g.meta)
    return record


def save_corpus(corpus: Corpus, path: str) -> None:
    """Write a corpus in the JSONL format accepted by ``load_corpus``."""
    with open(path, "w", encoding="utf-8") as fh:
        for g in corpus:
            fh.write(json.dumps(graph_to_record(g), sort_keys=True))
            fh.write("\n")
