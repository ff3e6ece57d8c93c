"""Permutation-equivariant attention encoder with hand-written backprop.

The network maps per-node positional encodings (n, d_in) to structural
representations Z (n, d) through an input projection and a stack of
post-norm transformer layers (multi-head self-attention + feed-forward).
Nothing in the computation depends on node order beyond the input rows,
so permuting the input rows permutes Z identically.

Three regression heads read Z: a graph head (mean-pool then two-layer
perceptron), a node head (per-row two-layer perceptron), and a pair head
(one bilinear form per pair property, symmetrized).  Forward passes can
record caches from which `backward_*` return analytic gradients for
every parameter; finite-difference agreement is enforced in tests.

Parameters live in a flat name -> float64 array dict so optimizers and
serialization can treat them uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ShapeError
from .generators import child_rng

__all__ = [
    "EncoderConfig",
    "init_params",
    "forward_encoder",
    "forward_heads",
    "backward",
    "param_shapes",
]

_GELU_C = math.sqrt(2.0 / math.pi)
_GELU_A = 0.044715


@dataclass(frozen=True)
class EncoderConfig:
    """Architecture hyperparameters (widths, depth, activation)."""

    d_in: int = 16
    d: int = 32
    layers: int = 2
    heads: int = 4
    ffn_mult: int = 2
    activation: str = "gelu"  # "identity" gives a closed-form-checkable linear net
    ln_eps: float = 1e-5

    def __post_init__(self):
        if self.d % self.heads != 0:
            raise ShapeError(f"width {self.d} not divisible by {self.heads} heads")
        if self.activation not in ("gelu", "identity"):
            raise ValueError(f"unknown activation {self.activation!r}")
        for name in ("d_in", "d", "heads", "ffn_mult"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.layers < 0:
            raise ValueError("layers must be >= 0")


def _act(config: EncoderConfig, x: np.ndarray) -> np.ndarray:
    if config.activation == "identity":
        return x
    inner = _GELU_C * (x + _GELU_A * x**3)
    return 0.5 * x * (1.0 + np.tanh(inner))


def _act_grad(config: EncoderConfig, x: np.ndarray) -> np.ndarray:
    if config.activation == "identity":
        return np.ones_like(x)
    inner = _GELU_C * (x + _GELU_A * x**3)
    t = np.tanh(inner)
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * _GELU_C * (1.0 + 3.0 * _GELU_A * x * x)


def param_shapes(
    config: EncoderConfig, k_graph: int, p_node: int, p_pair: int
) -> dict[str, tuple[int, ...]]:
    """Shape of every parameter tensor, in canonical order."""
    d_in, d = config.d_in, config.d
    hidden = config.ffn_mult * d
    shapes: dict[str, tuple[int, ...]] = {
        "input.weight": (d_in, d),
        "input.bias": (d,),
    }
    for layer in range(config.layers):
        p = f"layer{layer}."
        for name in ("wq", "wk", "wv", "wo"):
            shapes[p + f"attn.{name}"] = (d, d)
        for name in ("bq", "bk", "bv", "bo"):
            shapes[p + f"attn.{name}"] = (d,)
        shapes[p + "ln1.gain"] = (d,)
        shapes[p + "ln1.bias"] = (d,)
        shapes[p + "ffn.w1"] = (d, hidden)
        shapes[p + "ffn.b1"] = (hidden,)
        shapes[p + "ffn.w2"] = (hidden, d)
        shapes[p + "ffn.b2"] = (d,)
        shapes[p + "ln2.gain"] = (d,)
        shapes[p + "ln2.bias"] = (d,)
    shapes.update(
        {
            "graph_head.w1": (d, d),
            "graph_head.b1": (d,),
            "graph_head.w2": (d, k_graph),
            "graph_head.b2": (k_graph,),
            "node_head.w1": (d, d),
            "node_head.b1": (d,),
            "node_head.w2": (d, p_node),
            "node_head.b2": (p_node,),
        }
    )
    for t in range(p_pair):
        shapes[f"pair_head.w{t}"] = (d, d)
    shapes["pair_head.bias"] = (p_pair,)
    return shapes


def init_params(
    config: EncoderConfig, k_graph: int, p_node: int, p_pair: int, seed: int = 0
) -> dict[str, np.ndarray]:
    """Fan-in-scaled symmetric uniform weights, zero biases, unit LN gains."""
    params: dict[str, np.ndarray] = {}
    for index, (name, shape) in enumerate(param_shapes(config, k_graph, p_node, p_pair).items()):
        if name.endswith(".gain"):
            params[name] = np.ones(shape)
        elif len(shape) == 1:
            params[name] = np.zeros(shape)
        else:
            rng = child_rng(seed, index)
            bound = 1.0 / math.sqrt(shape[0])
            params[name] = rng.uniform(-bound, bound, size=shape)
    return params


def _layer_norm(x: np.ndarray, gain: np.ndarray, bias: np.ndarray, eps: float):
    mu = x.mean(axis=1, keepdims=True)
    centered = x - mu
    inv_std = 1.0 / np.sqrt((centered * centered).mean(axis=1, keepdims=True) + eps)
    x_hat = centered * inv_std
    return x_hat * gain + bias, (x_hat, inv_std)


def _layer_norm_backward(dy, cache, gain):
    x_hat, inv_std = cache
    d = x_hat.shape[1]
    dgain = (dy * x_hat).sum(axis=0)
    dbias = dy.sum(axis=0)
    dx_hat = dy * gain
    dx = (
        dx_hat
        - dx_hat.mean(axis=1, keepdims=True)
        - x_hat * (dx_hat * x_hat).sum(axis=1, keepdims=True) / d
    ) * inv_std
    return dx, dgain, dbias


def _split_heads(x: np.ndarray, heads: int) -> np.ndarray:
    n, d = x.shape
    return x.reshape(n, heads, d // heads).transpose(1, 0, 2)


def _merge_heads(x: np.ndarray) -> np.ndarray:
    heads, n, dh = x.shape
    return x.transpose(1, 0, 2).reshape(n, heads * dh)


def forward_encoder(
    params: dict[str, np.ndarray], config: EncoderConfig, b: np.ndarray, cache: list | None = None
) -> np.ndarray:
    """Z = encoder(B).  Pass ``cache=[]`` to record state for backward."""
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[1] != config.d_in:
        raise ShapeError(
            f"encoder input must be (n, {config.d_in}), got {b.shape}"
        )
    x = b @ params["input.weight"] + params["input.bias"]
    if cache is not None:
        cache.append({"b": b})
    scale = 1.0 / math.sqrt(config.d // config.heads)
    for layer in range(config.layers):
        p = f"layer{layer}."
        q = x @ params[p + "attn.wq"] + params[p + "attn.bq"]
        k = x @ params[p + "attn.wk"] + params[p + "attn.bk"]
        v = x @ params[p + "attn.wv"] + params[p + "attn.bv"]
        qh, kh, vh = (_split_heads(m, config.heads) for m in (q, k, v))
        logits = qh @ kh.transpose(0, 2, 1) * scale
        logits -= logits.max(axis=2, keepdims=True)
        weights = np.exp(logits)
        weights /= weights.sum(axis=2, keepdims=True)
        context = _merge_heads(weights @ vh)
        attn = context @ params[p + "attn.wo"] + params[p + "attn.bo"]
        normed1, ln1_cache = _layer_norm(
            x + attn, params[p + "ln1.gain"], params[p + "ln1.bias"], config.ln_eps
        )
        pre_act = normed1 @ params[p + "ffn.w1"] + params[p + "ffn.b1"]
        activated = _act(config, pre_act)
        ffn = activated @ params[p + "ffn.w2"] + params[p + "ffn.b2"]
        normed2, ln2_cache = _layer_norm(
            normed1 + ffn, params[p + "ln2.gain"], params[p + "ln2.bias"], config.ln_eps
        )
        if cache is not None:
            cache.append(
                {
                    "x": x, "qh": qh, "kh": kh, "vh": vh, "weights": weights,
                    "context": context, "ln1": ln1_cache, "normed1": normed1,
                    "pre_act": pre_act, "activated": activated, "ln2": ln2_cache,
                }
            )
        x = normed2
    return x


def forward_heads(
    params: dict[str, np.ndarray],
    config: EncoderConfig,
    z: np.ndarray,
    p_pair: int,
    cache: dict | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(p_hat, q_hat, pair_hat): graph vector, (n, P_node), (P_pair, n, n)."""
    n = z.shape[0]
    pooled = z.mean(axis=0)
    g_pre = pooled @ params["graph_head.w1"] + params["graph_head.b1"]
    g_act = _act(config, g_pre)
    p_hat = g_act @ params["graph_head.w2"] + params["graph_head.b2"]

    n_pre = z @ params["node_head.w1"] + params["node_head.b1"]
    n_act = _act(config, n_pre)
    q_hat = n_act @ params["node_head.w2"] + params["node_head.b2"]

    pair_hat = np.empty((p_pair, n, n))
    zw = []
    for t in range(p_pair):
        s = z @ params[f"pair_head.w{t}"]
        zw.append(s)
        raw = s @ z.T
        pair_hat[t] = (raw + raw.T) / 2.0 + params["pair_head.bias"][t]
    if cache is not None:
        cache.update(
            {"z": z, "pooled": pooled, "g_pre": g_pre, "g_act": g_act,
             "n_pre": n_pre, "n_act": n_act, "zw": zw}
        )
    return p_hat, q_hat, pair_hat


def _backward_heads(params, config, cache, dp_hat, dq_hat, dpair_hat, grads):
    z = cache["z"]
    n = z.shape[0]
    dz = np.zeros_like(z)

    grads["graph_head.w2"] += np.outer(cache["g_act"], dp_hat)
    grads["graph_head.b2"] += dp_hat
    dg_act = dp_hat @ params["graph_head.w2"].T
    dg_pre = dg_act * _act_grad(config, cache["g_pre"])
    grads["graph_head.w1"] += np.outer(cache["pooled"], dg_pre)
    grads["graph_head.b1"] += dg_pre
    dz += (dg_pre @ params["graph_head.w1"].T) / n

    grads["node_head.w2"] += cache["n_act"].T @ dq_hat
    grads["node_head.b2"] += dq_hat.sum(axis=0)
    dn_act = dq_hat @ params["node_head.w2"].T
    dn_pre = dn_act * _act_grad(config, cache["n_pre"])
    grads["node_head.w1"] += z.T @ dn_pre
    grads["node_head.b1"] += dn_pre.sum(axis=0)
    dz += dn_pre @ params["node_head.w1"].T

    for t in range(dpair_hat.shape[0]):
        ds = (dpair_hat[t] + dpair_hat[t].T) / 2.0
        grads["pair_head.bias"][t] += dpair_hat[t].sum()
        grads[f"pair_head.w{t}"] += z.T @ (ds @ z)
        # raw_t = (Z W_t) Z^T, so dZ collects ds·Z·W_t^T + ds^T·(Z W_t)
        dz += ds @ z @ params[f"pair_head.w{t}"].T + ds.T @ cache["zw"][t]
    return dz


def backward(
    params: dict[str, np.ndarray],
    config: EncoderConfig,
    encoder_cache: list,
    head_cache: dict,
    dp_hat: np.ndarray,
    dq_hat: np.ndarray,
    dpair_hat: np.ndarray,
    grads: dict[str, np.ndarray],
) -> None:
    """Accumulate analytic gradients for one graph into ``grads``."""
    dx = _backward_heads(params, config, head_cache, dp_hat, dq_hat, dpair_hat, grads)
    scale = 1.0 / math.sqrt(config.d // config.heads)
    for layer in range(config.layers - 1, -1, -1):
        p = f"layer{layer}."
        c = encoder_cache[layer + 1]
        dres2, dgain2, dbias2 = _layer_norm_backward(dx, c["ln2"], params[p + "ln2.gain"])
        grads[p + "ln2.gain"] += dgain2
        grads[p + "ln2.bias"] += dbias2
        dffn = dres2
        grads[p + "ffn.w2"] += c["activated"].T @ dffn
        grads[p + "ffn.b2"] += dffn.sum(axis=0)
        dact = dffn @ params[p + "ffn.w2"].T
        dpre = dact * _act_grad(config, c["pre_act"])
        grads[p + "ffn.w1"] += c["normed1"].T @ dpre
        grads[p + "ffn.b1"] += dpre.sum(axis=0)
        dnormed1 = dres2 + dpre @ params[p + "ffn.w1"].T
        dres1, dgain1, dbias1 = _layer_norm_backward(
            dnormed1, c["ln1"], params[p + "ln1.gain"]
        )
        grads[p + "ln1.gain"] += dgain1
        grads[p + "ln1.bias"] += dbias1

        dattn = dres1
        grads[p + "attn.wo"] += c["context"].T @ dattn
        grads[p + "attn.bo"] += dattn.sum(axis=0)
        dcontext = _split_heads(dattn @ params[p + "attn.wo"].T, config.heads)
        dweights = dcontext @ c["vh"].transpose(0, 2, 1)
        dvh = c["weights"].transpose(0, 2, 1) @ dcontext
        w = c["weights"]
        dlogits = w * (dweights - (dweights * w).sum(axis=2, keepdims=True))
        dqh = dlogits @ c["kh"] * scale
        dkh = dlogits.transpose(0, 2, 1) @ c["qh"] * scale
        dq, dk, dv = (_merge_heads(m) for m in (dqh, dkh, dvh))
        x = c["x"]
        grads[p + "attn.wq"] += x.T @ dq
        grads[p + "attn.bq"] += dq.sum(axis=0)
        grads[p + "attn.wk"] += x.T @ dk
        grads[p + "attn.bk"] += dk.sum(axis=0)
        grads[p + "attn.wv"] += x.T @ dv
        grads[p + "attn.bv"] += dv.sum(axis=0)
        dx = (
            dres1
            + dq @ params[p + "attn.wq"].T
            + dk @ params[p + "attn.wk"].T
            + dv @ params[p + "attn.wv"].T
        )
    b = encoder_cache[0]["b"]
    grads["input.weight"] += b.T @ dx
    grads["input.bias"] += dx.sum(axis=0)
    for name, grad in grads.items():
        if not np.all(np.isfinite(grad)):
            raise NumericError(f"non-finite gradient for parameter {name!r}")
