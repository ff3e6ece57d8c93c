"""Graph invariants: frozen values, size limits, masking, and the
invariance/bound properties that define them."""

import math
import warnings

import numpy as np
import pytest

from structprops import (
    Graph,
    GraphSizeError,
    compute_all,
    default_registry,
    relabel,
)
from structprops.invariants import (
    CHROMATIC_SIZE_LIMIT,
    INDEPENDENCE_SIZE_LIMIT,
    STRENGTH_SIZE_LIMIT,
    clique_number,
    connected_components,
    diameter,
    edge_count,
    fit_normalizer,
    apply_normalizer,
    girth,
    hyper_wiener_index,
    independence_number,
    lovasz_number,
    node_count,
    parry_sullivan,
    property_matrix,
    splittance,
    strength,
    wiener_index,
)
from structprops.generators import erdos_renyi, generate
from structprops.graphs import complement


def path(n):
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], n)


def cycle(n):
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)], n)


def complete(n):
    return Graph.from_edges([(u, v) for u in range(n) for v in range(u + 1, n)], n)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Graph.from_edges(outer + inner + spokes, 10)


# --- frozen single-property values (each verified by an independent oracle
# --- computation before being written down here)

def test_counts():
    g = path(4)
    assert node_count(g) == 4
    assert edge_count(g) == 3


def test_connected_components():
    assert connected_components(path(5)) == 1
    assert connected_components(Graph.from_edges([], 4)) == 4
    assert connected_components(Graph.from_edges([(0, 1), (2, 3)], 5)) == 3


def test_diameter():
    assert diameter(path(5)) == 4
    assert diameter(complete(6)) == 1
    assert diameter(Graph.from_edges([], 1)) == 0
    assert diameter(Graph.from_edges([(0, 1), (2, 3)], 4)) is None


def test_girth():
    assert girth(cycle(5)) == 5
    assert girth(complete(4)) == 3
    assert girth(path(6)) is None  # forest
    assert girth(petersen()) == 5


def test_independence_number():
    assert independence_number(cycle(5)) == 2
    assert independence_number(complete(5)) == 1
    assert independence_number(path(4)) == 2
    assert independence_number(petersen()) == 4


def test_clique_number():
    assert clique_number(complete(6)) == 6
    assert clique_number(cycle(5)) == 2
    assert clique_number(petersen()) == 2


def test_lovasz_number_known_values():
    # theta(C5) = sqrt(5) (Lovasz umbrella); theta(K_n) = 1; theta(empty_n) = n
    assert abs(lovasz_number(cycle(5)) - math.sqrt(5)) <= 1e-3
    assert abs(lovasz_number(complete(5)) - 1.0) <= 1e-3
    assert abs(lovasz_number(Graph.from_edges([], 6)) - 6.0) <= 1e-3
    assert abs(lovasz_number(petersen()) - 4.0) <= 1e-3


def test_fractional_chromatic_known_values():
    from structprops.invariants import fractional_chromatic_number

    # chi_f(C5) = 5/2, chi_f(K_n) = n, chi_f(bipartite) = 2, Kneser/Petersen also 5/2
    assert abs(fractional_chromatic_number(cycle(5)) - 2.5) <= 1e-6
    assert abs(fractional_chromatic_number(complete(4)) - 4.0) <= 1e-6
    assert abs(fractional_chromatic_number(path(5)) - 2.0) <= 1e-6
    assert abs(fractional_chromatic_number(petersen()) - 2.5) <= 1e-6


def test_wiener_index():
    # K_n: all distances 1 -> n(n-1)/2
    assert wiener_index(complete(7)) == 21
    # P4 distances: 1+2+3+1+2+1 = 10
    assert wiener_index(path(4)) == 10
    assert wiener_index(Graph.from_edges([(0, 1)], 2)) == 1
    assert wiener_index(Graph.from_edges([(0, 1), (2, 3)], 4)) is None


def test_hyper_wiener_index():
    # HW = 1/2 sum(d + d^2); P4: W=10, sum d^2 = 1+4+9+1+4+1 = 20 -> (10+20)/2 = 15
    assert hyper_wiener_index(path(4)) == 15.0
    assert hyper_wiener_index(complete(5)) == 10.0  # equals W when diameter 1


def test_parry_sullivan():
    # det(I - A): empty -> 1, K2 -> 0, K3 -> -4 (cofactor expansion)
    assert parry_sullivan(Graph.from_edges([], 3)) == pytest.approx(1.0)
    assert parry_sullivan(complete(2)) == pytest.approx(0.0)
    assert parry_sullivan(complete(3)) == pytest.approx(-4.0)


def test_splittance():
    # split graphs have splittance 0; C4 -> 1; C5 -> 2 (Hammer-Simeone and
    # exhaustive edge-edit search agree)
    split_graph = Graph.from_edges([(0, 1), (0, 2), (1, 2), (2, 3)], 4)
    assert splittance(split_graph) == 0
    assert splittance(complete(5)) == 0
    assert splittance(cycle(4)) == 1
    assert splittance(cycle(5)) == 2


def test_splittance_complement_invariance():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(4, 12))
        g = erdos_renyi(n, float(rng.uniform(0.2, 0.8)), seed=int(rng.integers(2**31)))
        assert splittance(g) == splittance(complement(g))


def test_strength():
    # trees -> 1; C4 -> 4/3; K_n -> n/2
    assert strength(path(5)) == pytest.approx(1.0)
    assert strength(cycle(4)) == pytest.approx(4 / 3)
    assert strength(complete(6)) == pytest.approx(3.0)
    assert strength(Graph.from_edges([(0, 1), (2, 3)], 4)) is None  # disconnected


def test_fiedler_value():
    from structprops.invariants import default_registry

    vec = compute_all(path(2))
    assert vec.values["fiedler_value"] == pytest.approx(2.0)  # L(K2) eigenvalues 0, 2
    # C4 Laplacian eigenvalues: 0, 2, 2, 4
    assert compute_all(cycle(4)).values["fiedler_value"] == pytest.approx(2.0)


# --- size limits

def test_size_limits_raise():
    big = erdos_renyi(INDEPENDENCE_SIZE_LIMIT + 1, 0.5, seed=1)
    with pytest.raises(GraphSizeError):
        independence_number(big)
    with pytest.raises(GraphSizeError):
        clique_number(big)
    big_chrom = erdos_renyi(CHROMATIC_SIZE_LIMIT + 1, 0.5, seed=1)
    from structprops.invariants import fractional_chromatic_number

    with pytest.raises(GraphSizeError):
        fractional_chromatic_number(big_chrom)
    big_strength = erdos_renyi(STRENGTH_SIZE_LIMIT + 1, 0.5, seed=1)
    with pytest.raises(GraphSizeError):
        strength(big_strength)


def test_compute_all_masks_oversized_with_warning():
    big = erdos_renyi(STRENGTH_SIZE_LIMIT + 2, 0.5, seed=3)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        vec = compute_all(big)
    assert not vec.applicable("strength")
    assert vec.applicable("node_count")
    assert any("strength" in str(w.message) for w in caught)


def test_single_node_degenerate_values():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        vec = compute_all(Graph.from_edges([], 1))
    assert vec.values["diameter"] == 0
    assert vec.values["wiener_index"] == 0
    assert not vec.applicable("girth")
    assert not vec.applicable("strength")


# --- the defining property: isomorphism invariance

def test_isomorphism_invariance():
    rng = np.random.default_rng(42)
    registry = default_registry()
    for trial in range(12):
        n = int(rng.integers(4, 11))
        g = erdos_renyi(n, float(rng.uniform(0.2, 0.8)), seed=int(rng.integers(2**31)))
        h = relabel(g, [int(x) for x in rng.permutation(n)])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            a = compute_all(g, registry)
            b = compute_all(h, registry)
        for name in a.values:
            assert a.applicable(name) == b.applicable(name), name
            if not a.applicable(name):
                continue
            tol = 1e-3 if name == "lovasz_number" else 1e-6
            assert a.values[name] == pytest.approx(b.values[name], abs=tol), name


def test_sandwich_bound():
    # alpha(G) <= theta(G) <= chi_f(complement(G))
    from structprops.invariants import fractional_chromatic_number

    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(4, 11))
        g = erdos_renyi(n, float(rng.uniform(0.2, 0.8)), seed=int(rng.integers(2**31)))
        theta = lovasz_number(g)
        assert independence_number(g) <= theta + 1e-3
        assert theta <= fractional_chromatic_number(complement(g)) + 1e-3


def test_hyper_wiener_dominates_wiener():
    rng = np.random.default_rng(5)
    for _ in range(10):
        g = erdos_renyi(int(rng.integers(4, 12)), 0.35, seed=int(rng.integers(2**31)))
        w, hw = wiener_index(g), hyper_wiener_index(g)
        if w is None:
            assert hw is None
            continue
        assert hw >= w
        if diameter(g) >= 2:
            assert hw > w


# --- normalization

def test_normalizer_two_point_example():
    # values {4, 8}: mean 6, std 2 -> z-scores {-1, +1}
    gs = [complete(4), complete(8)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        vecs = [compute_all(g) for g in gs]
        stats = fit_normalizer(vecs)
    assert stats.means["node_count"] == pytest.approx(6.0)
    assert stats.stds["node_count"] == pytest.approx(2.0)
    z = [apply_normalizer(v, stats) for v in vecs]
    assert z[0].values["node_count"] == pytest.approx(-1.0)
    assert z[1].values["node_count"] == pytest.approx(1.0)


def test_normalizer_population_std_and_round_trip(tmp_path):
    from structprops.invariants import load_stats, save_stats

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        vecs = [compute_all(erdos_renyi(8, 0.4, seed=s)) for s in range(12)]
        stats = fit_normalizer(vecs)
    raw = [v.values["edge_count"] for v in vecs]
    assert stats.means["edge_count"] == pytest.approx(np.mean(raw))
    assert stats.stds["edge_count"] == pytest.approx(np.std(raw))
    p = tmp_path / "stats.json"
    save_stats(stats, str(p))
    back = load_stats(str(p))
    assert back.means == stats.means and back.stds == stats.stds
    assert back.names == stats.names


def test_property_matrix_masks_to_nan():
    gs = [Graph.from_edges([(0, 1), (2, 3)], 4), path(4)]
    names = [d.name for d in default_registry()]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        m = property_matrix([compute_all(g) for g in gs], names)
    j = names.index("diameter")
    assert math.isnan(m[0, j])  # disconnected -> masked
    assert m[1, j] == 3
