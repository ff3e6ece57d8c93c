"""Seeded random graph generators.

All generators draw from ``numpy.random.Generator`` seeded with PCG64, so
identical (model, parameters, seed) inputs produce identical graphs on any
platform.  Child seeds for per-graph work are derived through
``SeedSequence(seed, spawn_key=(index,))`` which keeps corpus generation
order-independent and safely parallelizable.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph

__all__ = ["erdos_renyi", "barabasi_albert", "watts_strogatz", "generate", "child_rng"]


def child_rng(seed: int, index: int) -> np.random.Generator:
    """Deterministic per-item generator derived from a corpus-level seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def erdos_renyi(n: int, p: float, seed=0, *, id: str = None, domain: str = "er") -> Graph:
    """G(n, p): each of the n(n-1)/2 pairs is an edge independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    rng = _rng(seed)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v))
    return Graph.from_edges(edges, n, id=id or f"er-{n}-{seed}", domain=domain)


def barabasi_albert(n: int, m_attach: int, seed=0, *, id: str = None, domain: str = "ba") -> Graph:
    """Preferential attachment: each new node attaches to ``m_attach`` distinct targets.

    Starts from ``m_attach`` isolated nodes; the first arrival connects to
    all of them, later arrivals sample targets proportionally to degree.
    """
    if not 1 <= m_attach < n:
        raise ValueError(f"need 1 <= m_attach < n, got m_attach={m_attach}, n={n}")
    rng = _rng(seed)
    edges = []
    # Pool of endpoints, one entry per incident edge end: sampling uniformly
    # from it realizes degree-proportional attachment.
    repeated: list[int] = []
    targets = list(range(m_attach))
    source = m_attach
    while source < n:
        for t in targets:
            edges.append((t, source))
        repeated.extend(targets)
        repeated.extend([source] * len(targets))
        targets = []
        seen = set()
        while len(targets) < m_attach:
            pick = repeated[rng.integers(0, len(repeated))]
            if pick not in seen:
                seen.add(pick)
                targets.append(pick)
        source += 1
    return Graph.from_edges(edges, n, id=id or f"ba-{n}-{seed}", domain=domain)


def watts_strogatz(n: int, k: int, beta: float, seed=0, *, id: str = None, domain: str = "ws") -> Graph:
    """Ring lattice with k neighbors per node, each edge rewired with probability beta."""
    if k % 2 != 0 or not 0 < k < n:
        raise ValueError(f"k must be even with 0 < k < n, got k={k}, n={n}")
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"beta must be in [0, 1], got {beta}")
    rng = _rng(seed)
    edge_set = set()
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            edge_set.add((u, v) if u < v else (v, u))
    for u in range(n):
        for j in range(1, k // 2 + 1):
            v = (u + j) % n
            e = (u, v) if u < v else (v, u)
            if e not in edge_set:
                continue
            if rng.random() < beta:
                # Rewire u's far endpoint to a uniform non-neighbor of u.
                candidates = [
                    w
                    for w in range(n)
                    if w != u and ((u, w) if u < w else (w, u)) not in edge_set
                ]
                if not candidates:
                    continue
                w = candidates[rng.integers(0, len(candidates))]
                edge_set.remove(e)
                edge_set.add((u, w) if u < w else (w, u))
    return Graph.from_edges(edge_set, n, id=id or f"ws-{n}-{seed}", domain=domain)


def generate(model: str, seed: int = 0, *, id: str = None, domain: str = None, **params) -> Graph:
    """Dispatch on model name: ``erdos-renyi``, ``barabasi-albert``, ``watts-strogatz``."""
    if model == "erdos-renyi":
        return erdos_renyi(
            params["n"], params["p"], seed, id=id, domain=domain or "er"
        )
    if model == "barabasi-albert":
        return barabasi_albert(
            params["n"], params["m_attach"], seed, id=id, domain=domain or "ba"
        )
    if model == "watts-strogatz":
        return watts_strogatz(
            params["n"], params["k"], params["beta"], seed, id=id, domain=domain or "ws"
        )
    raise ValueError(f"unknown generator model {model!r}")
