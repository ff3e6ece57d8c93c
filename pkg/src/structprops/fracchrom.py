"""Fractional chromatic number by exact rational linear programming.

chi_f(G) is the optimum of the covering LP  min sum_S x_S  subject to
sum_{S contains v} x_S >= 1  over independent sets S.  We solve the
equivalent packing dual  max sum_v y_v  subject to  y(S) <= 1  for every
maximal independent set, whose all-ones right-hand side gives the slack
basis a feasible start (no phase 1).  Arithmetic is Fraction throughout,
with Bland's rule against cycling, so results are exact rationals.

Small graphs enumerate every maximal independent set up front.  Larger
ones start from singleton sets and generate violated sets on demand via
an exact max-weight independent set search (column generation on the
covering side, row generation here).
"""

from __future__ import annotations

from fractions import Fraction

from .cliques import iter_bits
from .errors import NumericError
from .graphs import Graph, adjacency_bitsets

__all__ = [
    "maximal_independent_sets",
    "max_weight_independent_set",
    "fractional_chromatic_number",
]

ENUMERATION_LIMIT = 12


def maximal_independent_sets(adj: list[int], n: int) -> list[int]:
    """All maximal independent sets as bitmasks (Bron-Kerbosch, pivoting)."""
    full = (1 << n) - 1
    nonadj = [(full & ~adj[v]) & ~(1 << v) for v in range(n)]
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = max(iter_bits(p | x), key=lambda w: (p & nonadj[w]).bit_count())
        for v in iter_bits(p & ~nonadj[pivot]):
            bit = 1 << v
            expand(r | bit, p & nonadj[v], x & nonadj[v])
            p &= ~bit
            x |= bit

    expand(0, full, 0)
    return out


def max_weight_independent_set(
    adj: list[int], n: int, weights: list[Fraction]
) -> tuple[Fraction, int]:
    """Exact max-weight independent set: (weight, member bitmask)."""
    order = sorted(range(n), key=lambda v: weights[v], reverse=True)
    best_weight = Fraction(0)
    best_mask = 0

    def expand(candidates: int, weight: Fraction, mask: int) -> None:
        nonlocal best_weight, best_mask
        if weight > best_weight:
            best_weight, best_mask = weight, mask
        while candidates:
            slack = weight + sum(weights[v] for v in iter_bits(candidates))
            if slack <= best_weight:
                return
            v = next(u for u in order if candidates >> u & 1)
            bit = 1 << v
            candidates &= ~bit
            expand(candidates & ~adj[v], weight + weights[v], mask | bit)

    expand((1 << n) - 1, Fraction(0), 0)
    return best_weight, best_mask


def _packing_lp(sets: list[int], n: int) -> tuple[Fraction, list[Fraction]]:
    """max 1'y s.t. y(S) <= 1 per set, y >= 0.  Returns (value, y)."""
    m = len(sets)
    one = Fraction(1)
    zero = Fraction(0)
    rows = []
    for i, mask in enumerate(sets):
        row = [zero] * (n + m + 1)
        for v in iter_bits(mask):
            row[v] = one
        row[n + i] = one
        row[-1] = one
        rows.append(row)
    obj = [one] * n + [zero] * (m + 1)
    basis = list(range(n, n + m))

    while True:
        enter = next((j for j in range(n + m) if obj[j] > 0), None)
        if enter is None:
            break
        leave = None
        ratio = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                r = rows[i][-1] / a
                if ratio is None or r < ratio or (r == ratio and basis[i] < basis[leave]):
                    ratio, leave = r, i
        if leave is None:
            raise NumericError("packing LP unbounded: some vertex lies in no set")
        pivot = rows[leave][enter]
        rows[leave] = [x / pivot for x in rows[leave]]
        prow = rows[leave]
        for i in range(m):
            f = rows[i][enter]
            if i != leave and f != 0:
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        f = obj[enter]
        if f != 0:
            obj = [a - f * b for a, b in zip(obj, prow)]
        basis[leave] = enter

    y = [zero] * n
    for i, b in enumerate(basis):
        if b < n:
            y[b] = rows[i][-1]
    return -obj[-1], y


def fractional_chromatic_number(g: Graph, enumeration_limit: int = ENUMERATION_LIMIT) -> Fraction:
    """Exact chi_f(G) as a Fraction."""
    n = g.n
    adj = adjacency_bitsets(g)
    if g.num_edges == 0:
        return Fraction(1)
    if n <= enumeration_limit:
        value, _ = _packing_lp(maximal_independent_sets(adj, n), n)
        return value

    sets = [1 << v for v in range(n)]
    known = set(sets)
    while True:
        value, y = _packing_lp(sets, n)
        weight, mask = max_weight_independent_set(adj, n, y)
        if weight <= 1:
            return value
        if mask in known:
            raise NumericError("set generation stalled on a duplicate column")
        sets.append(mask)
        known.add(mask)
