"""Cross-domain mixup augmentation and synthetic corpus construction.

Mixing adjacency matrices from unrelated domains yields graphs whose
class labels would be meaningless but whose structural invariants remain
perfectly well defined, so augmented graphs get fresh recomputed
property targets, never interpolated ones.  Node correspondence is by
index after zero-padding; no matching step.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .generators import child_rng, generate
from .graphs import Corpus, Graph, adjacency_matrix

__all__ = [
    "MixupSpec",
    "FamilySpec",
    "mixup",
    "build_synthetic_corpus",
    "augment_corpus",
    "default_training_corpus",
]


@dataclass(frozen=True)
class MixupSpec:
    """Convex-combination weight plus the rule turning weights into edges.

    ``threshold`` keeps pairs with combined weight >= 0.5 (deterministic);
    ``bernoulli`` samples each unordered pair once with that weight as the
    edge probability, seeded.
    """

    lam: float
    resolution: str = "threshold"
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"mixup lambda must be in [0, 1], got {self.lam}")
        if self.resolution not in ("threshold", "bernoulli"):
            raise ValueError(f"unknown resolution mode {self.resolution!r}")


def mixup(g1: Graph, g2: Graph, spec: MixupSpec, *, id: str | None = None) -> Graph:
    """Blend two adjacency matrices into a new simple graph.

    Both inputs are zero-padded to n = max(n1, n2), then
    W = lam * A1 + (1 - lam) * A2 is resolved to 0/1 edges per
    ``spec.resolution``.
    lam = 1 reproduces padded g1 exactly and lam = 0 padded g2.
    """
    n = max(g1.n, g2.n)
    w = np.zeros((n, n))
    w[: g1.n, : g1.n] = spec.lam * adjacency_matrix(g1)
    w[: g2.n, : g2.n] += (1.0 - spec.lam) * adjacency_matrix(g2)

    edges = []
    if spec.resolution == "threshold":
        for u in range(n):
            for v in range(u + 1, n):
                if w[u, v] >= 0.5:
                    edges.append((u, v))
    else:
        rng = child_rng(spec.seed, 0)
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < w[u, v]:
                    edges.append((u, v))
    return Graph.from_edges(
        edges,
        n,
        id=id if id is not None else f"mixup({g1.id},{g2.id})",
        domain=f"mixup({g1.domain},{g2.domain})",
        meta={"parents": [g1.id, g2.id], "lambda": spec.lam},
    )


@dataclass(frozen=True)
class FamilySpec:
    """One generator family's contribution to a synthetic corpus."""

    model: str  # "erdos-renyi" | "barabasi-albert" | "watts-strogatz"
    count: int
    n_range: tuple[int, int]
    seed: int = 0
    params: dict | None = None  # model parameters, e.g. {"p": 0.3}
    domain: str | None = None

    def __post_init__(self):
        if self.count < 0:
            raise ValueError(f"count must be nonnegative, got {self.count}")
        lo, hi = self.n_range
        if not 1 <= lo <= hi:
            raise ValueError(f"bad size range {self.n_range}")


def build_synthetic_corpus(specs: Sequence[FamilySpec]) -> Corpus:
    """Deterministic corpus with one domain block per generator family.

    Graph i of a family draws its size and edges from
    ``child_rng(family seed, i)``, so corpora are reproducible and
    order-independent within a family.
    """
    short = {"erdos-renyi": "er", "barabasi-albert": "ba", "watts-strogatz": "ws"}
    graphs: list[Graph] = []
    for spec in specs:
        domain = spec.domain or short.get(spec.model, spec.model)
        lo, hi = spec.n_range
        for i in range(spec.count):
            rng = child_rng(spec.seed, i)
            n = int(rng.integers(lo, hi + 1))
            graphs.append(generate(
                spec.model, seed=rng, id=f"{domain}-{i:04d}", domain=domain,
                n=n, **(spec.params or {}),
            ))
    return Corpus.from_graphs(graphs)


def augment_corpus(corpus: Corpus, pairs: int, spec: MixupSpec, seed: int = 0) -> Corpus:
    """Extend a corpus with mixups of uniformly sampled cross-domain pairs.

    Requires at least two domains: the point of the augmentation is to
    blend structure across domain boundaries.
    """
    domains = [d for d in corpus.domains if corpus.domains[d]]
    if len(domains) < 2:
        raise ValueError(
            f"cross-domain augmentation needs >= 2 domains, corpus has {len(domains)}"
        )
    new_graphs: list[Graph] = []
    for j in range(pairs):
        rng = child_rng(seed, j)
        d1, d2 = (domains[int(k)] for k in rng.choice(len(domains), size=2, replace=False))
        g1 = corpus[corpus.domains[d1][int(rng.integers(len(corpus.domains[d1])))]]
        g2 = corpus[corpus.domains[d2][int(rng.integers(len(corpus.domains[d2])))]]
        pair_spec = spec
        if spec.resolution == "bernoulli":
            pair_spec = replace(spec, seed=int(rng.integers(2**31)))
        new_graphs.append(mixup(g1, g2, pair_spec, id=f"mixup-{j:04d}({g1.id},{g2.id})"))
    return corpus.extend(new_graphs)


def default_training_corpus(
    count: int = 2000, n_range: tuple[int, int] = (8, 24), seed: int = 0
) -> Corpus:
    """Three-family synthetic corpus used by the training defaults.

    Near-equal thirds of ER(p=0.3), BA(m=3), WS(k=4, beta=0.2); every
    graph's size is drawn uniformly from ``n_range``.
    """
    base = count // 3
    counts = [base + (1 if r < count % 3 else 0) for r in range(3)]
    return build_synthetic_corpus([
        FamilySpec("erdos-renyi", counts[0], n_range, seed=seed,
                   params={"p": 0.3}, domain="er"),
        FamilySpec("barabasi-albert", counts[1], n_range, seed=seed + 1,
                   params={"m_attach": 3}, domain="ba"),
        FamilySpec("watts-strogatz", counts[2], n_range, seed=seed + 2,
                   params={"k": 4, "beta": 0.2}, domain="ws"),
    ])
