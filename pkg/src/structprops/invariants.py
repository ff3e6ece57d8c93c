"""Whole-graph structural invariants: registry, batch evaluation, scaling.

Each property is exposed both as a plain function and through a
``PropertyDescriptor`` registry entry that records its applicability
rule, value kind, and the largest graph its exact algorithm accepts.
``compute_all`` never aborts a batch: inapplicable properties are
masked, oversize or failing ones are masked with a warning.

Properties whose exact computation is NP-hard (independence, clique,
fractional chromatic, strength) are served by the branch-and-bound and
LP machinery in :mod:`cliques` and :mod:`fracchrom` and guarded by size
limits; everything else is polynomial.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .cliques import iter_bits, max_clique_size
from .errors import GraphSizeError
from .fracchrom import fractional_chromatic_number as _fractional_chromatic_exact
from .graphs import (
    Graph,
    adjacency_bitsets,
    adjacency_matrix,
    all_pairs_distances,
    connected_component_labels,
    neighbor_lists,
)
from .spectral import fiedler_value
from .theta import lovasz_theta

__all__ = [
    "PropertyDescriptor",
    "PropertyVector",
    "NormalizationStats",
    "INDEPENDENCE_SIZE_LIMIT",
    "CHROMATIC_SIZE_LIMIT",
    "STRENGTH_SIZE_LIMIT",
    "node_count",
    "edge_count",
    "connected_components",
    "diameter",
    "girth",
    "independence_number",
    "clique_number",
    "lovasz_number",
    "fractional_chromatic_number",
    "wiener_index",
    "hyper_wiener_index",
    "parry_sullivan",
    "splittance",
    "strength",
    "default_registry",
    "compute_all",
    "fit_normalizer",
    "apply_normalizer",
    "property_matrix",
    "write_properties_csv",
    "save_stats",
    "load_stats",
    "save_stats",
    "load_stats",
]

INDEPENDENCE_SIZE_LIMIT = 40
CHROMATIC_SIZE_LIMIT = 20
STRENGTH_SIZE_LIMIT = 12


# ---------------------------------------------------------------------------
# individual invariants

def node_count(g: Graph) -> int:
    return g.n


def edge_count(g: Graph) -> int:
    return g.num_edges


def connected_components(g: Graph) -> int:
    labels = connected_component_labels(g)
    return max(labels) + 1


def _is_connected(g: Graph) -> bool:
    return connected_components(g) == 1


def diameter(g: Graph) -> int | None:
    """Max shortest-path length; None when disconnected."""
    if not _is_connected(g):
        return None
    dist = all_pairs_distances(g)
    return int(dist.max())


def girth(g: Graph) -> int | None:
    """Length of the shortest cycle; None for forests.

    BFS from every node; a non-tree edge (u, w) closes a walk of length
    dist[u] + dist[w] + 1 through the root, never shorter than the girth,
    and a root on a shortest cycle attains it.
    """
    n = g.n
    if g.num_edges == n - connected_components(g):
        return None
    adj = neighbor_lists(g)
    best: int | None = None
    for source in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[source] = 0
        queue = [source]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if best is not None and 2 * dist[u] >= best:
                continue
            for w in adj[u]:
                if dist[w] == -1:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    candidate = dist[u] + dist[w] + 1
                    if best is None or candidate < best:
                        best = candidate
    return best


def independence_number(g: Graph, size_limit: int = INDEPENDENCE_SIZE_LIMIT) -> int:
    """alpha(G): clique number of the complement."""
    if g.n > size_limit:
        raise GraphSizeError(
            f"independence_number is exact only up to n={size_limit}, got n={g.n}"
        )
    full = (1 << g.n) - 1
    adj = adjacency_bitsets(g)
    co_adj = [(full & ~adj[v]) & ~(1 << v) for v in range(g.n)]
    return max_clique_size(co_adj, g.n)


def clique_number(g: Graph, size_limit: int = INDEPENDENCE_SIZE_LIMIT) -> int:
    if g.n > size_limit:
        raise GraphSizeError(
            f"clique_number is exact only up to n={size_limit}, got n={g.n}"
        )
    return max_clique_size(adjacency_bitsets(g), g.n)


def lovasz_number(g: Graph, tol: float = 1e-4) -> float:
    return lovasz_theta(g, tol=tol).value


def wiener_index(g: Graph) -> int | None:
    """Sum of shortest-path lengths over unordered pairs; None if disconnected."""
    if not _is_connected(g):
        return None
    dist = all_pairs_distances(g)
    return int(np.triu(dist).sum())


def hyper_wiener_index(g: Graph) -> float | None:
    if not _is_connected(g):
        return None
    dist = all_pairs_distances(g)
    upper = np.triu(dist)
    return float((upper.sum() + (upper * upper).sum()) / 2.0)


def parry_sullivan(g: Graph) -> float:
    """det(I - A)."""
    a = adjacency_matrix(g)
    return float(np.linalg.det(np.eye(g.n) - a))


def splittance(g: Graph) -> int:
    """Minimum edge edits to a split graph (Hammer-Simeone degree formula)."""
    degs = sorted((len(nbrs) for nbrs in neighbor_lists(g)), reverse=True)
    m = max(i for i in range(1, g.n + 1) if degs[i - 1] >= i - 1)
    head = sum(degs[:m])
    tail = sum(degs[m:])
    return (m * (m - 1) - head + tail) // 2


def _internal_edge_count(mask: int, adj: list[int]) -> int:
    return sum((adj[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def _connected_subsets_with(adj: list[int], allowed: int, pivot: int):
    """Connected subsets of ``allowed`` containing ``pivot``, each once."""
    out: list[int] = []

    def grow(current: int, frontier: int, banned: int) -> None:
        out.append(current)
        while frontier:
            bit = frontier & -frontier
            frontier ^= bit
            v = bit.bit_length() - 1
            grown = current | bit
            extra = adj[v] & allowed & ~grown & ~banned
            grow(grown, (frontier | extra) & ~banned, banned)
            banned |= bit

    start = 1 << pivot
    grow(start, adj[pivot] & allowed & ~start, 0)
    return out


def fractional_chromatic_number(g: Graph, size_limit: int = CHROMATIC_SIZE_LIMIT):
    """chi_f(G) as an exact Fraction; LP column generation under the hood."""
    if g.n > size_limit:
        raise GraphSizeError(
            f"fractional_chromatic_number is exact only up to n={size_limit}, got n={g.n}"
        )
    return _fractional_chromatic_exact(g)


def strength(g: Graph, size_limit: int = STRENGTH_SIZE_LIMIT) -> Fraction | None:
    """min over partitions P (|P| >= 2) of crossing(P)/(|P|-1); None if disconnected.

    Only partitions into connected parts are enumerated: splitting a
    disconnected part adds parts without adding crossing edges, so some
    optimal partition has all parts connected.  Parts are carved off in
    order of their smallest node, with a bound that takes the remaining
    edges as internal and the remaining nodes as singletons.
    """
    if g.n > size_limit:
        raise GraphSizeError(
            f"strength enumeration is exact only up to n={size_limit}, got n={g.n}"
        )
    if g.n < 2 or not _is_connected(g):
        return None
    adj = adjacency_bitsets(g)
    m = g.num_edges
    best = Fraction(m, g.n - 1)

    def descend(remaining: int, parts: int, internal: int) -> None:
        nonlocal best
        if not remaining:
            if parts >= 2:
                ratio = Fraction(m - internal, parts - 1)
                if ratio < best:
                    best = ratio
            return
        loose = _internal_edge_count(remaining, adj)
        bound = Fraction(m - internal - loose, parts + remaining.bit_count() - 1)
        if bound >= best:
            return
        pivot = (remaining & -remaining).bit_length() - 1
        for part in _connected_subsets_with(adj, remaining, pivot):
            descend(remaining & ~part, parts + 1, internal + _internal_edge_count(part, adj))

    descend((1 << g.n) - 1, 0, 0)
    return best


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class PropertyDescriptor:
    """One registered invariant: how to compute it and when it applies."""

    name: str
    kind: str  # "integer" | "rational" | "real"
    applicability: str  # "any" | "connected" | "contains a cycle" | "n >= 2" | "connected, n >= 2"
    compute: Callable[[Graph], object]
    size_limit: int | None = None  # max n for the exact fast path, None = unlimited

    def inapplicability_reason(self, g: Graph) -> str | None:
        rule = self.applicability
        if rule == "any":
            return None
        if "n >= 2" in rule and g.n < 2:
            return "fewer than 2 nodes"
        if "connected" in rule and not _is_connected(g):
            return "disconnected"
        if rule == "contains a cycle" and g.num_edges == g.n - connected_components(g):
            return "acyclic"
        return None


@dataclass(frozen=True)
class PropertyVector:
    """Values plus a mask: every registered name appears in exactly one.

    ``mask`` maps each property name to "ok" or to the reason it carries
    no value ("disconnected", "size limit", ...).
    """

    values: Mapping[str, float]
    mask: Mapping[str, str]
    normalized: bool = False
    stats_fingerprint: str | None = None

    def applicable(self, name: str) -> bool:
        return self.mask.get(name) == "ok"

    def get(self, name: str) -> float | None:
        return self.values.get(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.mask)


def default_registry() -> list[PropertyDescriptor]:
    """The fifteen default invariants, in canonical order."""
    d = PropertyDescriptor
    return [
        d("node_count", "integer", "any", node_count),
        d("edge_count", "integer", "any", edge_count),
        d("connected_components", "integer", "any", connected_components),
        d("diameter", "integer", "connected", diameter),
        d("girth", "integer", "contains a cycle", girth),
        d("independence_number", "integer", "any", independence_number,
          size_limit=INDEPENDENCE_SIZE_LIMIT),
        d("clique_number", "integer", "any", clique_number,
          size_limit=INDEPENDENCE_SIZE_LIMIT),
        d("lovasz_number", "real", "any", lovasz_number),
        d("fractional_chromatic_number", "rational", "any", fractional_chromatic_number,
          size_limit=CHROMATIC_SIZE_LIMIT),
        d("wiener_index", "integer", "connected", wiener_index),
        d("hyper_wiener_index", "real", "connected", hyper_wiener_index),
        d("parry_sullivan", "real", "any", parry_sullivan),
        d("splittance", "integer", "any", splittance),
        d("strength", "rational", "connected, n >= 2", strength,
          size_limit=STRENGTH_SIZE_LIMIT),
        d("fiedler_value", "real", "n >= 2", fiedler_value),
    ]


def compute_all(g: Graph, registry: Sequence[PropertyDescriptor] | None = None) -> PropertyVector:
    """Evaluate every registered property, masking instead of raising."""
    if registry is None:
        registry = default_registry()
    values: dict[str, float] = {}
    mask: dict[str, str] = {}
    for desc in registry:
        reason = desc.inapplicability_reason(g)
        if reason is not None:
            mask[desc.name] = reason
            continue
        if desc.size_limit is not None and g.n > desc.size_limit:
            mask[desc.name] = f"size limit (n={g.n} > {desc.size_limit})"
            warnings.warn(
                f"graph {g.id!r}: skipping {desc.name}, n={g.n} exceeds "
                f"exact limit {desc.size_limit}",
                stacklevel=2,
            )
            continue
        try:
            value = desc.compute(g)
        except Exception as exc:  # mask, never abort the batch
            mask[desc.name] = f"error: {exc}"
            warnings.warn(
                f"graph {g.id!r}: {desc.name} failed ({exc})", stacklevel=2
            )
            continue
        if value is None:
            mask[desc.name] = "inapplicable"
            continue
        values[desc.name] = float(value)
        mask[desc.name] = "ok"
    return PropertyVector(values=values, mask=mask)


# ---------------------------------------------------------------------------
# normalization

@dataclass(frozen=True)
class NormalizationStats:
    """Per-property location/scale fit on a corpus, for z-scoring.

    ``fingerprint`` hashes the contributing values, identifying the
    fitting corpus.  Properties with zero variance or fewer than two
    contributing graphs are listed in ``dropped`` and carry no stats.
    """

    names: tuple[str, ...]
    means: Mapping[str, float]
    stds: Mapping[str, float]
    dropped: Mapping[str, str] = field(default_factory=dict)
    fingerprint: str = ""

    def denormalize(self, name: str, z: float) -> float:
        return z * self.stds[name] + self.means[name]


def _values_fingerprint(columns: Mapping[str, list[float]], count: int) -> str:
    h = hashlib.sha256()
    h.update(f"graphs={count}".encode())
    for name in sorted(columns):
        h.update(f";{name}:".encode())
        h.update(",".join(repr(x) for x in columns[name]).encode())
    return h.hexdigest()


def fit_normalizer(vectors: Sequence[PropertyVector]) -> NormalizationStats:
    """Population mean/std per property over the applicable entries."""
    if not vectors:
        raise ValueError("cannot fit normalization statistics on an empty corpus")
    names: list[str] = []
    for vec in vectors:
        for name in vec.names:
            if name not in names:
                names.append(name)
    columns = {
        name: [vec.values[name] for vec in vectors if vec.applicable(name)]
        for name in names
    }
    means: dict[str, float] = {}
    stds: dict[str, float] = {}
    dropped: dict[str, str] = {}
    retained: list[str] = []
    for name in names:
        xs = columns[name]
        if len(xs) < 2:
            dropped[name] = f"only {len(xs)} contributing graph(s)"
            warnings.warn(f"dropping {name}: {dropped[name]}", stacklevel=2)
            continue
        mean = float(np.mean(xs))
        std = float(np.std(xs))
        if std <= 1e-12 * max(1.0, abs(mean)):
            dropped[name] = "zero variance"
            warnings.warn(f"dropping {name}: constant over the corpus", stacklevel=2)
            continue
        means[name] = mean
        stds[name] = std
        retained.append(name)
    return NormalizationStats(
        names=tuple(retained),
        means=means,
        stds=stds,
        dropped=dropped,
        fingerprint=_values_fingerprint(columns, len(vectors)),
    )


def apply_normalizer(p: PropertyVector, stats: NormalizationStats) -> PropertyVector:
    """z-score the applicable entries of ``p`` under ``stats``.

    Dropped properties are masked.  A vector that is already normalized
    (same or different stats) triggers a warning but is processed anyway.
    """
    if p.normalized:
        if p.stats_fingerprint != stats.fingerprint:
            warnings.warn(
                "normalizing a vector that was produced by different "
                "normalization stats (fingerprint mismatch); proceeding",
                stacklevel=2,
            )
        else:
            warnings.warn("vector is already normalized; proceeding", stacklevel=2)
    values: dict[str, float] = {}
    mask: dict[str, str] = {}
    for name in p.names:
        if name in stats.dropped:
            mask[name] = f"dropped: {stats.dropped[name]}"
            continue
        if name not in stats.names:
            mask[name] = "no normalization stats"
            continue
        if not p.applicable(name):
            mask[name] = p.mask[name]
            continue
        values[name] = (p.values[name] - stats.means[name]) / stats.stds[name]
        mask[name] = "ok"
    return PropertyVector(
        values=values, mask=mask, normalized=True, stats_fingerprint=stats.fingerprint
    )


def property_matrix(
    vectors: Sequence[PropertyVector], names: Sequence[str]
) -> np.ndarray:
    """(len(vectors), len(names)) float matrix with NaN at masked entries."""
    out = np.full((len(vectors), len(names)), np.nan)
    for i, vec in enumerate(vectors):
        for j, name in enumerate(names):
            if vec.applicable(name):
                out[i, j] = vec.values[name]
    return out


# ---------------------------------------------------------------------------
# file output

def write_properties_csv(
    path: str,
    ids: Sequence[str],
    vectors: Sequence[PropertyVector],
    names: Sequence[str],
) -> None:
    """One row per graph, one column per property, empty cell = masked."""
    if len(ids) != len(vectors):
        raise ValueError(f"{len(ids)} ids for {len(vectors)} vectors")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(["id", *names]) + "\n")
        for gid, vec in zip(ids, vectors):
            cells = [gid]
            for name in names:
                cells.append(repr(vec.values[name]) if vec.applicable(name) else "")
            fh.write(",".join(cells) + "\n")


def save_stats(stats: NormalizationStats, path: str) -> None:
    """JSON map property -> {mean, std}; bookkeeping under underscore keys."""
    doc: dict[str, object] = {
        name: {"mean": stats.means[name], "std": stats.stds[name]}
        for name in stats.names
    }
    doc["_names"] = list(stats.names)
    doc["_dropped"] = dict(stats.dropped)
    doc["_fingerprint"] = stats.fingerprint
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_stats(path: str) -> NormalizationStats:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    dropped = doc.pop("_dropped", {})
    fingerprint = doc.pop("_fingerprint", "")
    names = tuple(doc.pop("_names", sorted(doc)))
    return NormalizationStats(
        names=names,
        means={name: float(doc[name]["mean"]) for name in names},
        stds={name: float(doc[name]["std"]) for name in names},
        dropped=dropped,
        fingerprint=fingerprint,
    )
