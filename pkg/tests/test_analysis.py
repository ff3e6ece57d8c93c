"""WL kernel and similarity analysis: refinement against an independent
string-label oracle, PSD/embedding guarantees, block statistics, writers."""

import json
import warnings
from collections import Counter

import numpy as np
import pytest

from structprops import Graph, NumericError, ShapeError, generate
from structprops.analysis import (
    block_statistics,
    domain_similarity_report,
    kernel_embedding,
    kernel_matrix,
    similarity_matrix,
    wl_kernel,
    write_block_summary_json,
    write_similarity_csv,
    write_similarity_heatmap,
)
from structprops.augment import FamilySpec, build_synthetic_corpus
from structprops.generators import child_rng
from structprops.graphs import Corpus, neighbor_lists


def _wl_string_histograms(g: Graph, h: int) -> list[Counter]:
    """Reference WL refinement with uncompressed string labels."""
    adj = neighbor_lists(g)
    labels = [str(len(neigh)) for neigh in adj]
    rounds = [Counter(labels)]
    for _ in range(h):
        labels = [
            labels[v] + "|" + ",".join(sorted(labels[u] for u in adj[v]))
            for v in range(g.n)
        ]
        rounds.append(Counter(labels))
    return rounds


def _wl_kernel_oracle(g1: Graph, g2: Graph, h: int) -> float:
    h1 = _wl_string_histograms(g1, h)
    h2 = _wl_string_histograms(g2, h)
    total = 0
    for a, b in zip(h1, h2):
        total += sum(count * b[label] for label, count in a.items())
    return float(total)


def _triangle(offset=0):
    return Graph.from_edges([(0, 1), (1, 2), (0, 2)], 3, id=f"t{offset}")


def test_wl_kernel_two_triangles_h0():
    # degree histograms: three 2s each side -> 3 * 3 = 9
    assert wl_kernel(_triangle(0), _triangle(1), h=0) == 9.0


def test_wl_kernel_matches_string_oracle():
    rng = child_rng(90, 0)
    for trial in range(30):
        n1 = int(rng.integers(2, 9))
        n2 = int(rng.integers(2, 9))
        g1 = generate("erdos-renyi", seed=trial, n=n1, p=float(rng.choice([0.3, 0.6])))
        g2 = generate("erdos-renyi", seed=1000 + trial, n=n2,
                      p=float(rng.choice([0.3, 0.6])))
        for h in (0, 1, 2, 3):
            assert wl_kernel(g1, g2, h) == _wl_kernel_oracle(g1, g2, h)


def test_wl_kernel_isomorphism_pins_self_similarity():
    # identical graphs: kernel equals sum over rounds of squared label counts
    g = generate("watts-strogatz", seed=3, n=12, k=4, beta=0.2)
    assert wl_kernel(g, g, 3) == _wl_kernel_oracle(g, g, 3)
    assert wl_kernel(g, g, 3) >= wl_kernel(g, g, 0)


def test_wl_negative_rounds_rejected():
    with pytest.raises(ValueError):
        wl_kernel(_triangle(), _triangle(), h=-1)


def test_kernel_matrix_agrees_with_pairwise_calls():
    graphs = [
        generate("erdos-renyi", seed=s, n=6 + s % 3, p=0.5, id=f"g{s}")
        for s in range(6)
    ]
    k = kernel_matrix(graphs, h=2)
    assert np.array_equal(k, k.T)
    for i in range(6):
        for j in range(6):
            assert k[i, j] == wl_kernel(graphs[i], graphs[j], h=2)


def test_kernel_matrix_is_psd():
    graphs = [
        generate("barabasi-albert", seed=s, n=8 + s, m_attach=2, id=f"b{s}")
        for s in range(8)
    ]
    k = kernel_matrix(graphs, h=3)
    eigenvalues = np.linalg.eigvalsh(k)
    assert eigenvalues.min() >= -1e-8 * max(1.0, eigenvalues.max())
    with pytest.raises(ValueError):
        kernel_matrix([], h=1)


def test_kernel_embedding_reconstructs():
    graphs = [
        generate("erdos-renyi", seed=s, n=7 + s % 4, p=0.4, id=f"e{s}")
        for s in range(10)
    ]
    k = kernel_matrix(graphs, h=2)
    z = kernel_embedding(k)
    err = np.max(np.abs(z @ z.T - k))
    assert err <= 1e-6 * max(1.0, float(np.abs(k).max()))
    # truncation keeps the dominant prefix and reduces width
    z_trunc = kernel_embedding(k, energy=0.9)
    assert z_trunc.shape[1] <= z.shape[1]
    assert z_trunc.shape[0] == len(graphs)
    with pytest.raises(ValueError):
        kernel_embedding(k, energy=0.0)
    with pytest.raises(ValueError):
        kernel_embedding(k, energy=1.5)


def test_kernel_embedding_input_validation():
    with pytest.raises(ShapeError):
        kernel_embedding(np.zeros((2, 3)))
    asym = np.array([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ShapeError):
        kernel_embedding(asym)


def test_kernel_embedding_negativity_policy():
    # far from PSD: refuse to fabricate geometry
    with pytest.raises(NumericError):
        kernel_embedding(np.diag([1.0, -1.0]))
    # rounding-level negativity: warn and clip
    k = np.diag([1.0, -1e-6])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        z = kernel_embedding(k)
    assert any("clipping" in str(w.message) for w in caught)
    assert np.max(np.abs(z @ z.T - np.diag([1.0, 0.0]))) <= 1e-9


def test_similarity_matrix_row_pearson_properties():
    rng = child_rng(91, 0)
    rows = rng.normal(size=(6, 10))
    rows[3] = rows[1] * 2.0 + 5.0  # same profile, different scale/offset
    rows[4] = 7.0  # constant: undefined correlation
    sim = similarity_matrix(rows)
    assert sim.shape == (6, 6)
    finite = np.isfinite(sim)
    assert np.array_equal(sim, sim.T) or np.allclose(sim[finite], sim.T[finite])
    assert np.all(np.abs(sim[finite]) <= 1.0)
    for i in (0, 1, 2, 3, 5):
        assert sim[i, i] == pytest.approx(1.0)
    assert sim[1, 3] == pytest.approx(1.0)  # Pearson ignores affine rescaling
    assert np.all(~np.isfinite(sim[4, :])) and np.all(~np.isfinite(sim[:, 4]))
    anti = np.vstack([rows[0], -(rows[0] - rows[0].mean()) + 3.0])
    assert similarity_matrix(anti)[0, 1] == pytest.approx(-1.0)


def test_similarity_matrix_validation():
    with pytest.raises(ShapeError):
        similarity_matrix(np.ones(5))
    with pytest.raises(ShapeError):
        similarity_matrix(np.ones((1, 4)))
    with pytest.raises(NumericError):
        similarity_matrix(np.zeros((3, 3)))


def test_embedding_row_order_stability():
    graphs = [
        generate("erdos-renyi", seed=s, n=6 + s, p=0.5, id=f"o{s}") for s in range(8)
    ]
    perm = [3, 1, 7, 0, 5, 2, 6, 4]
    sim1 = similarity_matrix(kernel_embedding(kernel_matrix(graphs, h=2)))
    sim2 = similarity_matrix(
        kernel_embedding(kernel_matrix([graphs[i] for i in perm], h=2))
    )
    p = np.asarray(perm)
    assert np.max(np.abs(sim2 - sim1[np.ix_(p, p)])) <= 1e-8


def test_block_statistics_exact_on_handmade_matrix():
    # blocks: domain A = {0,1}, domain B = {2}
    sim = np.array([
        [1.0, 0.8, 0.2],
        [0.8, 1.0, 0.4],
        [0.2, 0.4, 1.0],
    ])
    partition = {"A": (0, 1), "B": (2,)}
    means, summary = block_statistics(sim, partition)
    assert means[0, 0] == pytest.approx(0.8)  # diagonal excludes self-pairs
    assert np.isnan(means[1, 1])  # single-member block has no off-diag pairs
    assert means[0, 1] == pytest.approx(0.3)
    assert summary["mean_in_domain"] == pytest.approx(0.8)
    assert summary["mean_cross_domain"] == pytest.approx(0.3)
    assert summary["separation_ratio"] == pytest.approx(0.3 / 0.8)


def test_block_statistics_partition_must_cover():
    sim = np.eye(4)
    with pytest.raises(ValueError):
        block_statistics(sim, {"A": (0, 1), "B": (3,)})
    with pytest.raises(ValueError):
        block_statistics(sim, {"A": (0, 1, 2, 3), "B": (3,)})


def test_block_statistics_single_domain_nan_cross():
    sim = np.full((3, 3), 0.5)
    np.fill_diagonal(sim, 1.0)
    means, summary = block_statistics(sim, {"only": (0, 1, 2)})
    assert summary["mean_in_domain"] == pytest.approx(0.5)
    assert np.isnan(summary["mean_cross_domain"])
    assert np.isnan(summary["separation_ratio"])


def _three_family_corpus(per_family=12):
    return build_synthetic_corpus([
        FamilySpec("erdos-renyi", per_family, (10, 20), seed=0,
                   params={"p": 0.2}, domain="er"),
        FamilySpec("barabasi-albert", per_family, (10, 20), seed=1,
                   params={"m_attach": 2}, domain="ba"),
        FamilySpec("watts-strogatz", per_family, (10, 20), seed=2,
                   params={"k": 4, "beta": 0.1}, domain="ws"),
    ])


def test_domain_similarity_report_pipeline():
    corpus = _three_family_corpus()
    report = domain_similarity_report(corpus, h=3, energy=0.99)
    assert report.ids == tuple(g.id for g in corpus)
    assert set(report.domains) == {"er", "ba", "ws"}
    assert report.similarity.shape == (len(corpus), len(corpus))
    assert report.block_means.shape == (3, 3)
    # summary consistent with its own blocks
    means, summary = block_statistics(report.similarity, report.partition)
    assert report.mean_in_domain == pytest.approx(summary["mean_in_domain"])
    assert report.mean_cross_domain == pytest.approx(summary["mean_cross_domain"])
    # the qualitative separation the analysis exists to show
    assert report.mean_in_domain > report.mean_cross_domain > 0.0


def test_writers(tmp_path):
    corpus = _three_family_corpus(per_family=5)
    report = domain_similarity_report(corpus, h=2)
    csv_path = tmp_path / "sim.csv"
    json_path = tmp_path / "summary.json"
    svg_path = tmp_path / "heatmap.svg"
    write_similarity_csv(str(csv_path), report)
    write_block_summary_json(str(json_path), report)
    write_similarity_heatmap(str(svg_path), report)

    lines = csv_path.read_text().strip().split("\n")
    assert lines[0] == "id," + ",".join(report.ids)
    assert len(lines) == len(report.ids) + 1
    first_row = lines[1].split(",")
    assert first_row[0] == report.ids[0]
    assert float(first_row[1]) == pytest.approx(report.similarity[0, 0])

    doc = json.loads(json_path.read_text())
    assert doc["domains"] == list(report.domains)
    assert doc["counts"] == {d: len(report.partition[d]) for d in report.domains}
    assert doc["mean_in_domain"] == pytest.approx(report.mean_in_domain)
    assert svg_path.stat().st_size > 0
    assert svg_path.read_bytes()[:5] == b"<?xml"
