"""WL-subtree kernel and cross-domain structural similarity analysis.

The pipeline mirrors a kernel-PCA view of a mixed-domain corpus: a
Weisfeiler-Lehman subtree kernel matrix over degree-initialized labels,
an embedding Z = U S^(1/2) of that matrix, mean-centered cosine
similarities between embedding rows, and per-domain block statistics.
Structurally close domains light up off-diagonal blocks even though no
node features are involved.
"""

from __future__ import annotations

import json
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import NumericError, ShapeError
from .graphs import Corpus, Graph, neighbor_lists
from .spectral import eigh as spectral_eigh

__all__ = [
    "SimilarityReport",
    "wl_kernel",
    "kernel_matrix",
    "kernel_embedding",
    "similarity_matrix",
    "block_statistics",
    "domain_similarity_report",
    "write_similarity_csv",
    "write_block_summary_json",
    "write_similarity_heatmap",
]

# Eigenvalues of a kernel matrix this far below zero (relative to the
# spectral norm) cannot be rounding noise; the matrix was not a Gram
# matrix and embedding it would silently fabricate geometry.
_SEVERE_NEGATIVITY = 1e-4


def _wl_histogram_rounds(graphs: Sequence[Graph], h: int) -> list[list[Counter]]:
    """Per-round label histograms under one shared injective relabeling.

    Round 0 compresses degrees; round r >= 1 compresses
    (own label, sorted multiset of neighbor labels).  The table is shared
    across all graphs so equal subtrees get equal ids everywhere, and ids
    never collide across rounds.
    """
    if h < 0:
        raise ValueError(f"iteration count must be >= 0, got {h}")
    adjacency = [neighbor_lists(g) for g in graphs]
    table: dict = {}

    def compress(key) -> int:
        if key not in table:
            table[key] = len(table)
        return table[key]

    labels = [[compress(("init", len(neigh))) for neigh in adj] for adj in adjacency]
    rounds = [[Counter(lab) for lab in labels]]
    for _ in range(h):
        labels = [
            [
                compress((lab[v], tuple(sorted(lab[u] for u in adj[v]))))
                for v in range(len(lab))
            ]
            for lab, adj in zip(labels, adjacency)
        ]
        rounds.append([Counter(lab) for lab in labels])
    return rounds


def _histogram_dot(a: Counter, b: Counter) -> int:
    if len(b) < len(a):
        a, b = b, a
    return sum(count * b[label] for label, count in a.items() if label in b)


def wl_kernel(g1: Graph, g2: Graph, h: int = 3) -> float:
    """WL subtree kernel: summed histogram dot products over rounds 0..h."""
    rounds = _wl_histogram_rounds([g1, g2], h)
    return float(sum(_histogram_dot(r[0], r[1]) for r in rounds))


def kernel_matrix(corpus: Corpus | Sequence[Graph], h: int = 3) -> np.ndarray:
    """Pairwise WL kernel values over a corpus.

    One corpus-wide refinement run; entry (i, j) equals
    ``wl_kernel(g_i, g_j, h)`` because injective relabeling preserves
    histogram dot products regardless of which other graphs share the
    label table.  The result is a sum of Gram matrices, hence PSD.
    """
    graphs = list(corpus)
    if not graphs:
        raise ValueError("kernel matrix needs a nonempty corpus")
    k = np.zeros((len(graphs), len(graphs)))
    for round_hists in _wl_histogram_rounds(graphs, h):
        labels = sorted({lab for hist in round_hists for lab in hist})
        index = {lab: j for j, lab in enumerate(labels)}
        x = np.zeros((len(graphs), len(labels)))
        for i, hist in enumerate(round_hists):
            for lab, count in hist.items():
                x[i, index[lab]] = count
        k += x @ x.T
    return k


def kernel_embedding(k: np.ndarray, energy: float | None = None) -> np.ndarray:
    """Rows of Z = U S^(1/2) so that Z Z^T reconstructs the kernel matrix.

    With ``energy=None`` every eigenpair is kept and the reconstruction
    holds to ~1e-6 relative max error.  ``energy=q`` keeps the smallest
    prefix of descending eigenvalues covering fraction q of the trace.
    Slightly negative eigenvalues (rounding noise) are clipped to zero, with
    a warning beyond -1e-8 * ||K|| and an error beyond -1e-4 * ||K||.
    """
    k = np.asarray(k, dtype=float)
    if k.ndim != 2 or k.shape[0] != k.shape[1]:
        raise ShapeError(f"kernel matrix must be square, got shape {k.shape}")
    if not np.allclose(k, k.T, rtol=0.0, atol=1e-9 * max(1.0, float(np.abs(k).max()))):
        raise ShapeError("kernel matrix must be symmetric")
    # deterministic sign convention keeps row-reordered corpora giving
    # row-permuted embeddings, which the similarity summary relies on
    decomposition = spectral_eigh((k + k.T) / 2.0)
    eigenvalues, u = decomposition.eigenvalues, decomposition.eigenvectors
    norm = max(float(np.abs(eigenvalues).max()), np.finfo(float).tiny)
    smallest = float(eigenvalues.min())
    if smallest < -_SEVERE_NEGATIVITY * norm:
        raise NumericError(
            f"kernel matrix is far from PSD: min eigenvalue {smallest:.3e} "
            f"vs spectral norm {norm:.3e}"
        )
    if smallest < -1e-8 * norm:
        warnings.warn(
            f"clipping negative kernel eigenvalues (min {smallest:.3e})", stacklevel=2
        )
    clipped = np.clip(eigenvalues, 0.0, None)

    order = np.argsort(clipped)[::-1]
    clipped = clipped[order]
    u = u[:, order]
    if energy is not None:
        if not 0.0 < energy <= 1.0:
            raise ValueError(f"energy fraction must be in (0, 1], got {energy}")
        total = float(clipped.sum())
        if total > 0.0:
            rank = int(np.searchsorted(np.cumsum(clipped), energy * total) + 1)
            clipped = clipped[:rank]
            u = u[:, :rank]
    return u * np.sqrt(clipped)


def similarity_matrix(rows: np.ndarray) -> np.ndarray:
    """Pairwise Pearson correlations between embedding rows.

    Each row is normalized to zero mean (its own mean subtracted), then
    every pair gets cos(a, b).  Centering columns instead would force the
    centered rows to sum to zero, pushing the cross-domain mean below
    zero by construction; row centering keeps the shared structural
    component that cross-domain blocks are supposed to reveal.  Rows that
    are constant (zero norm after centering) yield NaN entries.
    """
    z = np.asarray(rows, dtype=float)
    if z.ndim != 2 or z.shape[0] < 2:
        raise ShapeError(f"similarity needs a 2-d matrix with >= 2 rows, got {z.shape}")
    if not z.any():
        raise NumericError("embedding matrix is identically zero")
    centered = z - z.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(centered, axis=1)
    defined = norms > 1e-12 * max(float(norms.max()), 1e-300)
    unit = np.zeros_like(centered)
    unit[defined] = centered[defined] / norms[defined, None]
    sim = np.clip(unit @ unit.T, -1.0, 1.0)
    sim[~defined, :] = np.nan
    sim[:, ~defined] = np.nan
    return sim


@dataclass(frozen=True)
class SimilarityReport:
    """Similarity matrix plus its decomposition into domain blocks."""

    ids: tuple[str, ...]
    similarity: np.ndarray
    domains: tuple[str, ...]
    partition: Mapping[str, tuple[int, ...]]
    block_means: np.ndarray  # (M, M) aligned with ``domains``
    mean_in_domain: float
    mean_cross_domain: float
    separation_ratio: float


def block_statistics(
    sim: np.ndarray, partition: Mapping[str, Sequence[int]]
) -> tuple[np.ndarray, dict[str, float]]:
    """Per-domain-block means and the in/cross summary.

    Diagonal blocks exclude self-pairs; the separation ratio is
    mean cross-domain / mean in-domain.  A single-domain partition leaves
    the cross mean (and ratio) NaN.
    """
    n = sim.shape[0]
    covered = sorted(i for block in partition.values() for i in block)
    if covered != list(range(n)):
        raise ValueError("domain partition must cover every row exactly once")
    domains = list(partition)
    m = len(domains)
    means = np.full((m, m), np.nan)
    in_values: list[np.ndarray] = []
    cross_values: list[np.ndarray] = []
    for a, da in enumerate(domains):
        for b, db in enumerate(domains):
            rows, cols = list(partition[da]), list(partition[db])
            block = sim[np.ix_(rows, cols)].astype(float)
            if a == b:
                block = block.copy()
                np.fill_diagonal(block, np.nan)
            vals = block[np.isfinite(block)]
            if vals.size:
                means[a, b] = float(vals.mean())
            (in_values if a == b else cross_values).append(vals)
    pooled_in = np.concatenate(in_values) if in_values else np.empty(0)
    pooled_cross = np.concatenate(cross_values) if cross_values else np.empty(0)
    mean_in = float(pooled_in.mean()) if pooled_in.size else float("nan")
    mean_cross = float(pooled_cross.mean()) if pooled_cross.size else float("nan")
    ratio = mean_cross / mean_in if np.isfinite(mean_in) and mean_in != 0 else float("nan")
    summary = {
        "mean_in_domain": mean_in,
        "mean_cross_domain": mean_cross,
        "separation_ratio": ratio,
    }
    return means, summary


def domain_similarity_report(
    corpus: Corpus, h: int = 3, energy: float | None = 0.99
) -> SimilarityReport:
    """Full pipeline: kernel -> embedding -> centered cosine -> block stats."""
    k = kernel_matrix(corpus, h)
    z = kernel_embedding(k, energy=energy)
    sim = similarity_matrix(z)
    partition = {d: tuple(ix) for d, ix in corpus.domains.items()}
    means, summary = block_statistics(sim, partition)
    return SimilarityReport(
        ids=tuple(g.id for g in corpus),
        similarity=sim,
        domains=tuple(partition),
        partition=partition,
        block_means=means,
        mean_in_domain=summary["mean_in_domain"],
        mean_cross_domain=summary["mean_cross_domain"],
        separation_ratio=summary["separation_ratio"],
    )


def write_similarity_csv(path: str, report: SimilarityReport) -> None:
    """id-labeled square matrix; NaN (masked) entries stay empty."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("id," + ",".join(report.ids) + "\n")
        for gid, row in zip(report.ids, report.similarity):
            cells = ["" if not np.isfinite(v) else repr(float(v)) for v in row]
            fh.write(gid + "," + ",".join(cells) + "\n")


def write_block_summary_json(path: str, report: SimilarityReport) -> None:
    def scrub(x: float):
        return None if not np.isfinite(x) else x

    doc = {
        "domains": list(report.domains),
        "counts": {d: len(report.partition[d]) for d in report.domains},
        "block_means": [[scrub(v) for v in row] for row in report.block_means],
        "mean_in_domain": scrub(report.mean_in_domain),
        "mean_cross_domain": scrub(report.mean_cross_domain),
        "separation_ratio": scrub(report.separation_ratio),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_similarity_heatmap(path: str, report: SimilarityReport) -> None:
    """Standalone vector-graphics heatmap with domain boundary lines."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 5))
    image = ax.imshow(report.similarity, vmin=-1.0, vmax=1.0, cmap="RdBu_r")
    fig.colorbar(image, ax=ax, label="centered cosine similarity")
    boundaries = np.cumsum([len(report.partition[d]) for d in report.domains])[:-1]
    for b in boundaries:
        ax.axhline(b - 0.5, color="black", linewidth=0.6)
        ax.axvline(b - 0.5, color="black", linewidth=0.6)
    centers = []
    start = 0
    for d in report.domains:
        size = len(report.partition[d])
        centers.append(start + size / 2 - 0.5)
        start += size
    ax.set_xticks(centers, report.domains)
    ax.set_yticks(centers, report.domains)
    ax.set_title("in-domain vs cross-domain structural similarity")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
