"""Independent reference implementations for every registered invariant.

Each oracle is deliberately slower and structurally different from the
fast path in :mod:`invariants`: exhaustive subset or partition
enumeration where the fast path branches and bounds, Floyd-Warshall
where it runs BFS, an interior-point SDP where it runs a first-order
method, exact fraction-free elimination where it uses floating LU.
They exist so the two routes can be compared on small graphs; sizes are
capped accordingly (``ORACLE_SIZE_LIMITS``).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .cliques import iter_bits
from .errors import GraphSizeError, NumericError
from .graphs import Graph, adjacency_bitsets, adjacency_matrix
from .spectral import laplacian

__all__ = ["ORACLE_SIZE_LIMITS", "oracle_compute", "oracle_names"]

ORACLE_SIZE_LIMITS: dict[str, int | None] = {
    "node_count": None,
    "edge_count": None,
    "connected_components": 100,
    "diameter": 100,
    "girth": 16,
    "independence_number": 20,
    "clique_number": 20,
    "lovasz_number": 30,
    "fractional_chromatic_number": 16,
    "wiener_index": 100,
    "hyper_wiener_index": 100,
    "parry_sullivan": 50,
    "splittance": 16,
    "strength": 10,
    "fiedler_value": 30,
}


def _floyd_warshall(g: Graph) -> np.ndarray:
    dist = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u, v in g.edges:
        dist[u, v] = dist[v, u] = 1.0
    for k in range(g.n):
        dist = np.minimum(dist, dist[:, k, None] + dist[None, k, :])
    return dist


def _oracle_components(g: Graph) -> int:
    reach = adjacency_matrix(g, dtype=bool) | np.eye(g.n, dtype=bool)
    for k in range(g.n):
        reach |= reach[:, k, None] & reach[None, k, :]
    return len({tuple(row) for row in reach})


def _oracle_diameter(g: Graph) -> int | None:
    dist = _floyd_warshall(g)
    top = dist.max()
    return None if np.isinf(top) else int(top)


def _oracle_wiener(g: Graph) -> int | None:
    dist = _floyd_warshall(g)
    if np.isinf(dist).any():
        return None
    return int(dist.sum() / 2)


def _oracle_hyper_wiener(g: Graph) -> float | None:
    dist = _floyd_warshall(g)
    if np.isinf(dist).any():
        return None
    return float((dist.sum() + (dist * dist).sum()) / 4.0)


def _subset_connected(mask: int, adj: list[int]) -> bool:
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        grown = seen
        for v in iter_bits(frontier):
            grown |= adj[v] & mask
        frontier = grown & ~seen
        seen = grown
    return seen == mask


def _oracle_girth(g: Graph) -> int | None:
    """Shortest cycle by induced-subgraph search.

    A shortest cycle has no chord, so it appears as a vertex subset
    whose induced subgraph is 2-regular and connected.
    """
    adj = adjacency_bitsets(g)
    best: int | None = None
    for mask in range(1, 1 << g.n):
        size = mask.bit_count()
        if size < 3 or (best is not None and size >= best):
            continue
        if all((adj[v] & mask).bit_count() == 2 for v in iter_bits(mask)):
            if _subset_connected(mask, adj):
                best = size
    return best


def _oracle_independence(g: Graph) -> int:
    adj = adjacency_bitsets(g)
    best = 0
    for mask in range(1 << g.n):
        if mask.bit_count() > best and all(
            not (adj[v] & mask) for v in iter_bits(mask)
        ):
            best = mask.bit_count()
    return best


def _oracle_clique(g: Graph) -> int:
    adj = adjacency_bitsets(g)
    best = 0
    for mask in range(1 << g.n):
        if mask.bit_count() > best and all(
            mask & ~(adj[v] | (1 << v)) == 0 for v in iter_bits(mask)
        ):
            best = mask.bit_count()
    return best


def _oracle_lovasz(g: Graph) -> float:
    """Interior-point solution of the dual SDP min{t : tI + Σ y_e E_e ⪰ J}."""
    from cvxopt import matrix, solvers

    n = g.n
    edges = g.sorted_edges()
    m = len(edges)
    # One semidefinite block: J - t·I - Σ y_e E_e ⪯ 0.
    gcols = np.zeros((n * n, 1 + m))
    gcols[:: n + 1, 0] = -1.0
    for k, (u, v) in enumerate(edges):
        gcols[u * n + v, 1 + k] = -1.0
        gcols[v * n + u, 1 + k] = -1.0
    c = matrix([1.0] + [0.0] * m)
    hs = [matrix(-np.ones((n, n)))]
    gs = [matrix(gcols)]
    saved = dict(solvers.options)
    solvers.options.update(
        {"show_progress": False, "abstol": 1e-9, "reltol": 1e-9, "maxiters": 200}
    )
    try:
        sol = solvers.sdp(c, Gs=gs, hs=hs)
    finally:
        solvers.options.clear()
        solvers.options.update(saved)
    if sol["status"] != "optimal":
        raise NumericError(f"reference SDP ended with status {sol['status']!r}")
    return float(sol["x"][0])


def _all_independent_sets(adj: list[int], n: int) -> list[int]:
    return [
        mask
        for mask in range(1, 1 << n)
        if all(not (adj[v] & mask) for v in iter_bits(mask))
    ]


def _oracle_fractional_chromatic(g: Graph) -> float:
    from scipy.optimize import linprog

    adj = adjacency_bitsets(g)
    sets = _all_independent_sets(adj, g.n)
    cover = np.zeros((g.n, len(sets)))
    for j, mask in enumerate(sets):
        for v in iter_bits(mask):
            cover[v, j] = 1.0
    res = linprog(
        c=np.ones(len(sets)),
        A_ub=-cover,
        b_ub=-np.ones(g.n),
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        raise NumericError(f"reference covering LP failed: {res.message}")
    return float(res.fun)


def _char_poly_coefficients(mat: list[list[int]]) -> list[int]:
    """Integer coefficients of det(λI - M), highest power first (Faddeev-LeVerrier)."""
    n = len(mat)
    coeffs = [1]
    work = [row[:] for row in mat]  # M_1 = M
    for k in range(1, n + 1):
        trace = sum(work[i][i] for i in range(n))
        c = -trace // k
        if c * k != -trace:
            raise NumericError("characteristic polynomial recurrence left a remainder")
        coeffs.append(c)
        if k == n:
            break
        for i in range(n):
            work[i][i] += c
        work = [
            [sum(mat[i][t] * work[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
    return coeffs


def _poly_deriv(p: list[Fraction]) -> list[Fraction]:
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    while len(a) >= len(b) and any(a):
        if a[0] == 0:
            a.pop(0)
            continue
        factor = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= factor * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _square_free_part(coeffs: list[int]) -> list[float]:
    """p / gcd(p, p'), so every root of the result is simple."""
    p = [Fraction(c) for c in coeffs]
    a, b = p, _poly_deriv(p)
    while b:
        a, b = b, _poly_mod(a, b)
    gcd = [c / a[0] for c in a]  # monic
    q: list[Fraction] = []
    rem = p[:]
    for _ in range(len(p) - len(gcd) + 1):
        factor = rem[0]
        q.append(factor)
        for i in range(len(gcd)):
            rem[i] -= factor * gcd[i]
        rem.pop(0)
    return [float(c) for c in q]


def _oracle_fiedler(g: Graph) -> float | None:
    # Exact integer characteristic polynomial, then roots of its square-free
    # part: repeated Laplacian eigenvalues (which np.roots resolves poorly)
    # become simple roots, and a Newton polish is well conditioned.
    if g.n < 2:
        return None
    if _oracle_components(g) > 1:
        return 0.0
    lap = laplacian(adjacency_matrix(g)).astype(np.int64)
    coeffs = _char_poly_coefficients([[int(x) for x in row] for row in lap])
    q = _square_free_part(coeffs)
    roots = np.roots(q)
    real = sorted(float(r.real) for r in roots if abs(r.imag) < 1e-8)
    candidates = [r for r in real if r > 1e-8]
    value = candidates[0]
    dq = [c * (len(q) - 1 - i) for i, c in enumerate(q[:-1])]
    for _ in range(6):
        fx = np.polyval(q, value)
        dx = np.polyval(dq, value)
        if dx == 0:
            break
        value -= fx / dx
    return float(value)


def _bareiss_determinant(mat: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    n = len(mat)
    a = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _oracle_parry_sullivan(g: Graph) -> float:
    a = adjacency_matrix(g, dtype=np.int64)
    mat = (np.eye(g.n, dtype=np.int64) - a).tolist()
    return float(_bareiss_determinant([[int(x) for x in row] for row in mat]))


def _oracle_splittance(g: Graph) -> int:
    """Minimum edits over all clique/independent bipartitions of V."""
    adj = adjacency_bitsets(g)
    n = g.n
    full = (1 << n) - 1
    best = None
    for clique_mask in range(1 << n):
        size = clique_mask.bit_count()
        inside = sum((adj[v] & clique_mask).bit_count() for v in iter_bits(clique_mask)) // 2
        missing = size * (size - 1) // 2 - inside
        rest = full & ~clique_mask
        extra = sum((adj[v] & rest).bit_count() for v in iter_bits(rest)) // 2
        edits = missing + extra
        if best is None or edits < best:
            best = edits
    return best


def _oracle_strength(g: Graph) -> Fraction | None:
    """Plain enumeration of every vertex partition (restricted growth)."""
    n = g.n
    if n < 2 or _oracle_components(g) > 1:
        return None
    adj = adjacency_bitsets(g)
    best: Fraction | None = None
    blocks: list[int] = []

    def assign(i: int, crossing: int) -> None:
        nonlocal best
        if i == n:
            if len(blocks) >= 2:
                ratio = Fraction(crossing, len(blocks) - 1)
                if best is None or ratio < best:
                    best = ratio
            return
        earlier = adj[i] & ((1 << i) - 1)
        degree = earlier.bit_count()
        bit = 1 << i
        for b in range(len(blocks)):
            added = degree - (earlier & blocks[b]).bit_count()
            blocks[b] |= bit
            assign(i + 1, crossing + added)
            blocks[b] &= ~bit
        blocks.append(bit)
        assign(i + 1, crossing + degree)
        blocks.pop()

    assign(0, 0)
    return best


_ORACLES = {
    "node_count": lambda g: g.n,
    "edge_count": lambda g: g.num_edges,
    "connected_components": _oracle_components,
    "diameter": _oracle_diameter,
    "girth": _oracle_girth,
    "independence_number": _oracle_independence,
    "clique_number": _oracle_clique,
    "lovasz_number": _oracle_lovasz,
    "fractional_chromatic_number": _oracle_fractional_chromatic,
    "wiener_index": _oracle_wiener,
    "hyper_wiener_index": _oracle_hyper_wiener,
    "parry_sullivan": _oracle_parry_sullivan,
    "splittance": _oracle_splittance,
    "strength": _oracle_strength,
    "fiedler_value": _oracle_fiedler,
}


def oracle_names() -> tuple[str, ...]:
    return tuple(_ORACLES)


def oracle_compute(name: str, g: Graph):
    """Reference value of property ``name`` on ``g``, or None if inapplicable.

    Raises ``KeyError`` for unknown names and ``GraphSizeError`` above the
    oracle's own exhaustive-search limit.
    """
    if name not in _ORACLES:
        raise KeyError(f"no oracle for property {name!r}")
    limit = ORACLE_SIZE_LIMITS[name]
    if limit is not None and g.n > limit:
        raise GraphSizeError(
            f"oracle for {name} is exhaustive only up to n={limit}, got n={g.n}"
        )
    return _ORACLES[name](g)
