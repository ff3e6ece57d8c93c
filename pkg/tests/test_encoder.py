"""Encoder unit tests: analytic gradients against central differences,
permutation equivariance, loss decomposition, and parameter plumbing."""

import numpy as np
import pytest

from structprops import NumericError, ShapeError
from structprops.encoder import (
    EncoderConfig,
    forward_encoder,
    forward_heads,
    init_params,
    param_shapes,
)
from structprops.generators import child_rng
from structprops.training import GraphTargets, graph_loss


def _random_target(rng, config, k_graph, p_node, p_pair, n) -> GraphTargets:
    b = rng.normal(size=(n, config.d_in))
    p_mask = rng.random(k_graph) < 0.8
    q_mask = rng.random((n, p_node)) < 0.8
    pair = rng.normal(size=(p_pair, n, n))
    pair = (pair + pair.transpose(0, 2, 1)) / 2.0
    pair_mask = rng.random((p_pair, n, n)) < 0.8
    return GraphTargets(
        graph_id="t",
        b=b,
        p=np.where(p_mask, rng.normal(size=k_graph), 0.0),
        p_mask=p_mask,
        q=np.where(q_mask, rng.normal(size=(n, p_node)), 0.0),
        q_mask=q_mask,
        pair=np.where(pair_mask, pair, 0.0),
        pair_mask=pair_mask,
    )


# one configuration per row: layers span 0-2, both activations, both head
# counts, and a zero-pair-property case
_GRAD_CONFIGS = [
    (EncoderConfig(d_in=3, d=4, layers=0, heads=1, ffn_mult=1), 2, 1, 1, 4),
    (EncoderConfig(d_in=4, d=4, layers=0, heads=2, activation="identity"), 3, 2, 0, 3),
    (EncoderConfig(d_in=3, d=6, layers=1, heads=1, ffn_mult=2), 2, 1, 2, 5),
    (EncoderConfig(d_in=5, d=4, layers=1, heads=2, activation="identity"), 4, 2, 1, 4),
    (EncoderConfig(d_in=4, d=8, layers=1, heads=4), 3, 1, 1, 6),
    (EncoderConfig(d_in=3, d=4, layers=2, heads=1, ffn_mult=1), 2, 2, 1, 3),
    (EncoderConfig(d_in=6, d=6, layers=2, heads=3), 3, 1, 0, 5),
    (EncoderConfig(d_in=4, d=8, layers=2, heads=2, activation="identity"), 2, 3, 2, 4),
    (EncoderConfig(d_in=5, d=6, layers=2, heads=2, ffn_mult=1), 5, 1, 1, 6),
    (EncoderConfig(d_in=3, d=4, layers=1, heads=4, ffn_mult=3), 2, 2, 3, 5),
]


@pytest.mark.parametrize("case", range(len(_GRAD_CONFIGS)))
def test_analytic_gradients_match_central_differences(case):
    config, k_graph, p_node, p_pair, n = _GRAD_CONFIGS[case]
    rng = child_rng(1234, case)
    target = _random_target(rng, config, k_graph, p_node, p_pair, n)
    params = init_params(config, k_graph, p_node, p_pair, seed=case)
    weights = (1.0, 0.1, 0.1)

    grads = {name: np.zeros_like(v) for name, v in params.items()}
    graph_loss(params, config, target, weights, grads=grads)

    h = 1e-6
    worst = 0.0
    for name, value in params.items():
        flat = value.reshape(-1)
        if flat.size == 0:  # e.g. pair_head.bias with no pair properties
            continue
        numeric = np.zeros_like(flat)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            up = graph_loss(params, config, target, weights)[0]
            flat[i] = orig - h
            down = graph_loss(params, config, target, weights)[0]
            flat[i] = orig
            numeric[i] = (up - down) / (2.0 * h)
        analytic = grads[name].reshape(-1)
        denom = np.maximum(1e-6, np.maximum(np.abs(analytic), np.abs(numeric)))
        worst = max(worst, float(np.max(np.abs(analytic - numeric) / denom)))
    assert worst <= 1e-4, f"config {case}: max relative gradient error {worst:.2e}"


def test_permutation_equivariance():
    config = EncoderConfig(d_in=5, d=8, layers=2, heads=2)
    params = init_params(config, 3, 2, 2, seed=7)
    rng = child_rng(55, 0)
    for _ in range(5):
        n = int(rng.integers(3, 12))
        b = rng.normal(size=(n, config.d_in))
        perm = rng.permutation(n)
        z = forward_encoder(params, config, b)
        z_perm = forward_encoder(params, config, b[perm])
        assert np.max(np.abs(z_perm - z[perm])) <= 1e-9

        p_hat, q_hat, pair_hat = forward_heads(params, config, z, 2)
        p_hat2, q_hat2, pair_hat2 = forward_heads(params, config, z[perm], 2)
        assert np.max(np.abs(p_hat2 - p_hat)) <= 1e-9  # graph head: invariant
        assert np.max(np.abs(q_hat2 - q_hat[perm])) <= 1e-9
        assert np.max(np.abs(pair_hat2 - pair_hat[:, perm][:, :, perm])) <= 1e-9


def test_loss_decomposition():
    config = EncoderConfig(d_in=4, d=4, layers=1, heads=2)
    rng = child_rng(56, 0)
    target = _random_target(rng, config, 3, 2, 2, 5)
    params = init_params(config, 3, 2, 2, seed=1)
    weights = (1.0, 0.25, 0.5)
    total, (lg, ln_, lp) = graph_loss(params, config, target, weights)
    assert abs(total - (1.0 * lg + 0.25 * ln_ + 0.5 * lp)) <= 1e-12
    assert min(lg, ln_, lp) >= 0.0


def test_zero_layers_is_affine():
    config = EncoderConfig(d_in=4, d=8, layers=0, heads=2)
    params = init_params(config, 2, 1, 1, seed=3)
    b = child_rng(57, 0).normal(size=(6, 4))
    z = forward_encoder(params, config, b)
    assert np.allclose(z, b @ params["input.weight"] + params["input.bias"], atol=1e-14)


def test_identity_activation_heads_are_explicit():
    config = EncoderConfig(d_in=4, d=4, layers=0, heads=1, activation="identity")
    params = init_params(config, 2, 1, 1, seed=5)
    z = child_rng(58, 0).normal(size=(5, 4))
    p_hat, q_hat, pair_hat = forward_heads(params, config, z, 1)
    pooled = z.mean(axis=0)
    manual_p = (pooled @ params["graph_head.w1"] + params["graph_head.b1"]) \
        @ params["graph_head.w2"] + params["graph_head.b2"]
    assert np.allclose(p_hat, manual_p, atol=1e-12)
    raw = (z @ params["pair_head.w0"]) @ z.T
    manual_pair = (raw + raw.T) / 2.0 + params["pair_head.bias"][0]
    assert np.allclose(pair_hat[0], manual_pair, atol=1e-12)
    assert np.allclose(pair_hat[0], pair_hat[0].T, atol=0)  # symmetrized


def test_param_shapes_and_init():
    config = EncoderConfig(d_in=3, d=8, layers=2, heads=2, ffn_mult=2)
    shapes = param_shapes(config, 4, 2, 3)
    params = init_params(config, 4, 2, 3, seed=11)
    assert set(params) == set(shapes)
    for name, shape in shapes.items():
        assert params[name].shape == shape
        if name.endswith(".gain"):
            assert np.all(params[name] == 1.0)
        elif params[name].ndim == 1:
            assert np.all(params[name] == 0.0)
        else:
            bound = 1.0 / np.sqrt(shape[0])
            assert np.max(np.abs(params[name])) <= bound
    again = init_params(config, 4, 2, 3, seed=11)
    assert all(np.array_equal(params[k], again[k]) for k in params)
    other = init_params(config, 4, 2, 3, seed=12)
    assert any(not np.array_equal(params[k], other[k]) for k in params)


def test_config_and_input_validation():
    with pytest.raises(ShapeError):
        EncoderConfig(d=6, heads=4)
    with pytest.raises(ValueError):
        EncoderConfig(activation="relu6")
    config = EncoderConfig(d_in=4, d=4, layers=0, heads=1)
    params = init_params(config, 1, 1, 0, seed=0)
    with pytest.raises(ShapeError):
        forward_encoder(params, config, np.zeros((3, 5)))


def test_fully_masked_graph_targets_zero_gradient():
    config = EncoderConfig(d_in=3, d=4, layers=1, heads=1)
    rng = child_rng(59, 0)
    target = _random_target(rng, config, 2, 1, 1, 4)
    target.p_mask[:] = False
    params = init_params(config, 2, 1, 1, seed=2)
    grads = {name: np.zeros_like(v) for name, v in params.items()}
    total, (lg, _, _) = graph_loss(params, config, target, (1.0, 0.0, 0.0), grads=grads)
    assert lg == 0.0 and total == 0.0
    assert all(np.all(g == 0.0) for g in grads.values())


def test_non_finite_gradients_raise():
    config = EncoderConfig(d_in=3, d=4, layers=1, heads=1)
    rng = child_rng(60, 0)
    target = _random_target(rng, config, 2, 1, 1, 4)
    params = init_params(config, 2, 1, 1, seed=2)
    params["input.weight"][0, 0] = np.nan
    grads = {name: np.zeros_like(v) for name, v in params.items()}
    with pytest.raises(NumericError):
        graph_loss(params, config, target, (1.0, 0.1, 0.1), grads=grads)
