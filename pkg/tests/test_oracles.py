"""Fast invariants against independent brute-force oracles on random graphs."""

import warnings

import numpy as np
import pytest

from structprops import ORACLE_SIZE_LIMITS, compute_all, default_registry, oracle_compute, oracle_names
from structprops.generators import erdos_renyi


def _tolerance(name):
    return 1e-3 if name == "lovasz_number" else 1e-6


def _random_graphs(count, n_low, n_high, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_low, n_high + 1))
        p = float(rng.choice([0.2, 0.5, 0.8]))
        out.append(erdos_renyi(n, p, seed=int(rng.integers(2**31))))
    return out


def test_oracle_names_cover_registry():
    assert set(oracle_names()) == {d.name for d in default_registry()}


@pytest.mark.parametrize("name", sorted(ORACLE_SIZE_LIMITS))
def test_fast_matches_oracle(name):
    registry = [d for d in default_registry() if d.name == name]
    limit = ORACLE_SIZE_LIMITS[name] or 12
    graphs = _random_graphs(30, 3, min(limit, 12), seed=hash(name) % 2**31)
    checked = 0
    for g in graphs:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vec = compute_all(g, registry)
        slow = oracle_compute(name, g)
        if not vec.applicable(name):
            assert slow is None
            continue
        fast = vec.values[name]
        if slow is None:
            continue
        assert fast == pytest.approx(slow, abs=_tolerance(name)), (name, g.edges)
        checked += 1
    assert checked >= 10


def test_oracle_rejects_unknown_property():
    g = erdos_renyi(5, 0.5, seed=0)
    with pytest.raises(KeyError):
        oracle_compute("chromatic_polynomial", g)


def test_oracle_integer_kinds_exact():
    # integer-valued oracles must agree exactly, not within tolerance
    for g in _random_graphs(15, 3, 9, seed=123):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vec = compute_all(g)
        for name in ("edge_count", "girth", "independence_number",
                     "clique_number", "splittance", "wiener_index"):
            slow = oracle_compute(name, g)
            if not vec.applicable(name):
                assert slow is None
                continue
            if slow is None:
                continue
            assert float(vec.values[name]) == float(slow), name
