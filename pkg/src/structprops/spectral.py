"""Laplacian spectra and the reversible spectral positional encoding.

The encoding of a graph with Laplacian L = U diag(lam) U^T is
B = U diag(lam)^(1/2).  In full-rank mode B B^T = L exactly, so the
adjacency matrix can be recovered from B; truncated mode keeps only the
columns of largest eigenvalue and gives up that guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericError, ShapeError
from .graphs import Graph, adjacency_matrix

__all__ = [
    "laplacian",
    "eigh",
    "SpectralDecomposition",
    "PositionalEncoding",
    "positional_encoding",
    "reconstruct_adjacency",
    "fiedler_value",
    "write_encodings",
    "read_encodings",
]

_SYM_TOL = 1e-10


def laplacian(a: np.ndarray) -> np.ndarray:
    """Combinatorial Laplacian L = D - A."""
    a = np.asarray(a, dtype=float)
    return np.diag(a.sum(axis=1)) - a


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh(matrix: np.ndarray) -> SpectralDecomposition:
    """Full symmetric eigendecomposition with a deterministic sign convention.

    Each eigenvector is flipped so its largest-magnitude entry (lowest
    index on ties) is positive.  Raises ``ShapeError`` for non-symmetric
    input.  Repeated eigenvalues leave the spanning rotation ambiguous;
    callers that need reproducibility across relabelings should compare
    invariant quantities (B B^T), not raw columns.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    if not np.allclose(m, m.T, atol=_SYM_TOL, rtol=0):
        raise ShapeError("matrix is not symmetric")
    values, vectors = np.linalg.eigh(m)
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        pivot = int(np.argmax(np.abs(col)))
        if col[pivot] < 0:
            vectors[:, k] = -col
    return SpectralDecomposition(eigenvalues=values, eigenvectors=vectors)


@dataclass(frozen=True)
class PositionalEncoding:
    """Per-node spectral coordinates B plus the metadata needed to invert them."""

    b: np.ndarray
    mode: str  # "full" or "truncated"
    eigenvalues: np.ndarray

    @property
    def width(self) -> int:
        return self.b.shape[1]


def positional_encoding(g: Graph, mode: str = "full", width: int | None = None) -> PositionalEncoding:
    """Spectral coordinates B = U diag(lam)^(1/2) of the graph Laplacian.

    ``mode="full"`` keeps all n columns (reversible).  ``mode="truncated"``
    keeps the ``width`` columns of largest eigenvalue, zero-padding on the
    right when the graph has fewer than ``width`` nodes.
    """
    lap = laplacian(adjacency_matrix(g))
    decomp = eigh(lap)
    values = decomp.eigenvalues
    if values[0] < -1e-8:
        raise NumericError(f"Laplacian produced negative eigenvalue {values[0]}")
    clipped = np.clip(values, 0.0, None)
    b = decomp.eigenvectors * np.sqrt(clipped)
    if mode == "full":
        return PositionalEncoding(b=b, mode="full", eigenvalues=values)
    if mode == "truncated":
        if width is None or width < 1:
            raise ValueError("truncated mode requires width >= 1")
        # Columns come out of eigh ascending; keep the top-eigenvalue ones.
        order = np.arange(g.n - 1, -1, -1)[: min(width, g.n)]
        kept = b[:, order]
        kept_values = values[order]
        if g.n < width:
            kept = np.hstack([kept, np.zeros((g.n, width - g.n))])
            kept_values = np.concatenate([kept_values, np.zeros(width - g.n)])
        return PositionalEncoding(b=kept, mode="truncated", eigenvalues=kept_values)
    raise ValueError(f"unknown positional encoding mode {mode!r}")


def reconstruct_adjacency(encoding: PositionalEncoding, tol: float = 1e-6) -> np.ndarray:
    """Recover the 0/1 adjacency matrix from a full-rank encoding.

    L_hat = B B^T, then A = diag(L_hat) - L_hat rounded to integers.
    Truncated encodings are rejected: dropping columns breaks the
    reconstruction guarantee.
    """
    if encoding.mode != "full":
        raise ValueError("adjacency reconstruction requires a full-rank encoding")
    l_hat = encoding.b @ encoding.b.T
    a_hat = np.diag(np.diag(l_hat)) - l_hat
    rounded = np.rint(a_hat)
    deviation = float(np.max(np.abs(a_hat - rounded))) if a_hat.size else 0.0
    if deviation > tol:
        raise NumericError(f"reconstruction deviates {deviation:.3e} from integers (tol {tol})")
    return np.clip(rounded, 0.0, 1.0).astype(int)


def fiedler_value(g: Graph) -> float | None:
    """Second-smallest Laplacian eigenvalue; ``None`` for single-node graphs."""
    if g.n < 2:
        return None
    decomp = eigh(laplacian(adjacency_matrix(g)))
    return float(decomp.eigenvalues[1])


def write_encodings(path: str, items: Sequence[tuple[str, PositionalEncoding]]) -> None:
    """Text dump of B matrices keyed by graph id.

    Each block is a header ``# id=<id> n=<n> r=<r> mode=<mode>`` followed
    by n space-separated rows of r coordinates (full float repr, so the
    dump round-trips bit-exactly through ``read_encodings``).
    """
    with open(path, "w", encoding="utf-8") as fh:
        for graph_id, enc in items:
            n, r = enc.b.shape
            fh.write(f"# id={graph_id} n={n} r={r} mode={enc.mode}\n")
            for row in enc.b:
                fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def read_encodings(path: str) -> dict[str, np.ndarray]:
    """Inverse of ``write_encodings``; returns id -> (n, r) B matrix."""
    out: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        header: dict[str, str] | None = None
        rows: list[list[float]] = []

        def flush():
            if header is not None:
                b = np.array(rows, dtype=float).reshape(int(header["n"]), int(header["r"]))
                out[header["id"]] = b

        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                flush()
                header = dict(part.split("=", 1) for part in line[1:].split())
                rows = []
            else:
                rows.append([float(x) for x in line.split()])
        flush()
    return out
