"""Training the structural encoder by invariant regression.

The objective per graph is

    w_graph * sum_k (p_hat_k - p_k)^2          (z-scored graph invariants)
  + w_node  * mean over valid node entries of squared error
  + w_pair  * mean over valid pair entries of squared error

with masked entries contributing exactly zero.  Graph targets are
z-scored by a normalizer fit on the training split only; node and pair
targets get the same treatment per property.  Everything downstream of
the seed is deterministic: fixed shuffles, fixed accumulation order,
single-threaded optimizer updates, and JSON serialization that
round-trips float64 bit-exactly.
"""

from __future__ import annotations

import collections
import copy
import json
import warnings
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .encoder import EncoderConfig, backward, forward_encoder, forward_heads, init_params
from .errors import NumericError, ShapeError, TrainingDivergedError
from .generators import child_rng
from .graphs import Graph, Corpus, adjacency_matrix
from .invariants import (
    NormalizationStats,
    PropertyDescriptor,
    apply_normalizer,
    compute_all,
    default_registry,
    fit_normalizer,
)
from .localprops import (
    compute_node_properties,
    compute_pair_properties,
    node_property_registry,
    pair_property_registry,
)
from .spectral import positional_encoding

__all__ = [
    "TrainConfig",
    "GraphTargets",
    "EncoderModel",
    "MetricRow",
    "DiscriminationResult",
    "training_registry",
    "train",
    "graph_loss",
    "embed",
    "fuse",
    "save_model",
    "load_model",
    "write_metric_log",
    "discrimination_experiment",
]

# Properties whose per-graph cost is dominated by an iterative solver.
# Target preparation for a few thousand graphs would spend most of its
# wall time inside these two, so the training default leaves them out;
# pass an explicit registry to regress them anyway.
_SOLVER_BACKED = frozenset({"lovasz_number", "fractional_chromatic_number"})


def training_registry() -> list[PropertyDescriptor]:
    """Default regression targets: every registered invariant that can be
    computed in combinatorial time on corpus-sized graphs."""
    return [d for d in default_registry() if d.name not in _SOLVER_BACKED]


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 1e-3
    optimizer: str = "adam"  # "adam" | "sgd"
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    w_graph: float = 1.0
    w_node: float = 0.1
    w_pair: float = 0.1
    seed: int = 0
    val_fraction: float = 0.1
    # Ship the uniform average of the last `average_tail` epoch-end
    # parameter snapshots instead of the endpoint (0 disables).  The
    # averaged map is markedly smoother, which sharpens the perturbation
    # -> prediction-distance trend without hurting held-out R².
    average_tail: int = 50

    def __post_init__(self):
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("epochs must be >= 0 and batch_size >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if min(self.w_graph, self.w_node, self.w_pair) < 0:
            raise ValueError("loss weights must be nonnegative")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ValueError("val_fraction must be in [0, 1)")
        if self.average_tail < 0:
            raise ValueError("average_tail must be >= 0")


@dataclass(frozen=True)
class GraphTargets:
    """Per-graph training example: encoder input plus z-scored targets."""

    graph_id: str
    b: np.ndarray  # (n, d_in)
    p: np.ndarray  # (K,) zero-filled where masked
    p_mask: np.ndarray  # (K,) bool
    q: np.ndarray  # (n, P_node)
    q_mask: np.ndarray
    pair: np.ndarray  # (P_pair, n, n)
    pair_mask: np.ndarray


@dataclass
class EncoderModel:
    """Trained encoder: parameters, head layout, and target scalers."""

    config: EncoderConfig
    params: dict[str, np.ndarray]
    graph_properties: tuple[str, ...]
    node_properties: tuple[str, ...]
    pair_properties: tuple[str, ...]
    stats: NormalizationStats
    node_stats: dict[str, tuple[float, float]]
    pair_stats: dict[str, tuple[float, float]]
    metadata: dict = field(default_factory=dict)

    def encode_input(self, g: Graph) -> np.ndarray:
        return positional_encoding(g, mode="truncated", width=self.config.d_in).b

    def forward(self, g: Graph) -> np.ndarray:
        return forward_encoder(self.params, self.config, self.encode_input(g))

    def predict(self, g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(p_hat, q_hat, pair_hat) in z-score space."""
        z = self.forward(g)
        return forward_heads(self.params, self.config, z, len(self.pair_properties))


@dataclass(frozen=True)
class MetricRow:
    epoch: int
    split: str
    loss: float
    r2: Mapping[str, float]


@dataclass(frozen=True)
class DiscriminationResult:
    """(graph, k, sqrt(Delta), prediction distance) rows plus Spearman.

    ``spearman`` is the mean of within-graph rank correlations along each
    graph's flip ladder: the perturbation bound relates Delta to the
    prediction shift with constants that depend on the graph, so ranks are
    only comparable inside one ladder.  ``spearman_pooled`` ranks all rows
    jointly and is reported for reference.
    """

    rows: tuple[tuple[str, int, float, float], ...]
    spearman: float
    spearman_pooled: float
    per_graph: Mapping[str, float]


# ---------------------------------------------------------------------------
# target construction

def _fit_scalar_stats(
    samples: Mapping[str, list[float]], what: str
) -> dict[str, tuple[float, float]]:
    out: dict[str, tuple[float, float]] = {}
    for name, xs in samples.items():
        if len(xs) < 2:
            warnings.warn(f"dropping {what} property {name}: too few samples", stacklevel=3)
            continue
        mean = float(np.mean(xs))
        std = float(np.std(xs))
        if std <= 1e-12 * max(1.0, abs(mean)):
            warnings.warn(f"dropping {what} property {name}: zero variance", stacklevel=3)
            continue
        out[name] = (mean, std)
    return out


def _fit_local_stats(graphs: Sequence[Graph]):
    node_samples: dict[str, list[float]] = {name: [] for name, _ in node_property_registry()}
    pair_samples: dict[str, list[float]] = {name: [] for name, _ in pair_property_registry()}
    for g in graphs:
        for name, vec in compute_node_properties(g).items():
            if vec is not None:
                node_samples[name].extend(float(x) for x in vec.values)
        for name, mat in compute_pair_properties(g).items():
            pair_samples[name].extend(float(x) for x in mat.values[mat.mask])
    return (
        _fit_scalar_stats(node_samples, "node"),
        _fit_scalar_stats(pair_samples, "pair"),
    )


def _build_targets(
    g: Graph,
    normalized_vector,
    stats: NormalizationStats,
    node_stats: Mapping[str, tuple[float, float]],
    pair_stats: Mapping[str, tuple[float, float]],
    d_in: int,
) -> GraphTargets | None:
    names = stats.names
    p = np.zeros(len(names))
    p_mask = np.zeros(len(names), dtype=bool)
    for j, name in enumerate(names):
        if normalized_vector.applicable(name):
            p[j] = normalized_vector.values[name]
            p_mask[j] = True

    node_names = tuple(node_stats)
    node_vectors = compute_node_properties(g)
    q = np.zeros((g.n, len(node_names)))
    q_mask = np.zeros((g.n, len(node_names)), dtype=bool)
    for j, name in enumerate(node_names):
        vec = node_vectors[name]
        if vec is not None:
            mean, std = node_stats[name]
            q[:, j] = (vec.values - mean) / std
            q_mask[:, j] = True

    pair_names = tuple(pair_stats)
    pair_mats = compute_pair_properties(g)
    pair = np.zeros((len(pair_names), g.n, g.n))
    pair_mask = np.zeros((len(pair_names), g.n, g.n), dtype=bool)
    for t, name in enumerate(pair_names):
        mat = pair_mats[name]
        mean, std = pair_stats[name]
        pair[t] = np.where(mat.mask, (mat.values - mean) / std, 0.0)
        pair_mask[t] = mat.mask

    if not (p_mask.any() or q_mask.any() or pair_mask.any()):
        warnings.warn(f"graph {g.id!r}: every target masked, skipping", stacklevel=3)
        return None
    return GraphTargets(
        graph_id=g.id,
        b=positional_encoding(g, mode="truncated", width=d_in).b,
        p=p, p_mask=p_mask, q=q, q_mask=q_mask, pair=pair, pair_mask=pair_mask,
    )


# ---------------------------------------------------------------------------
# loss

def graph_loss(
    params: dict[str, np.ndarray],
    config: EncoderConfig,
    target: GraphTargets,
    weights: tuple[float, float, float],
    grads: dict[str, np.ndarray] | None = None,
    predictions: list | None = None,
) -> tuple[float, tuple[float, float, float]]:
    """Masked weighted loss for one graph; optionally accumulates gradients.

    Returns (total, (graph_term, node_term, pair_term)) where total is
    the weighted sum of the three raw terms.
    """
    w_graph, w_node, w_pair = weights
    enc_cache: list | None = [] if grads is not None else None
    head_cache: dict | None = {} if grads is not None else None
    z = forward_encoder(params, config, target.b, cache=enc_cache)
    p_hat, q_hat, pair_hat = forward_heads(
        params, config, z, target.pair.shape[0], cache=head_cache
    )

    p_err = np.where(target.p_mask, p_hat - target.p, 0.0)
    loss_graph = float(p_err @ p_err)
    n_count = max(1, int(target.q_mask.sum()))
    q_err = np.where(target.q_mask, q_hat - target.q, 0.0)
    loss_node = float((q_err * q_err).sum() / n_count)
    pair_count = max(1, int(target.pair_mask.sum()))
    pair_err = np.where(target.pair_mask, pair_hat - target.pair, 0.0)
    loss_pair = float((pair_err * pair_err).sum() / pair_count)
    total = w_graph * loss_graph + w_node * loss_node + w_pair * loss_pair

    if predictions is not None:
        predictions.append(p_hat)
    if grads is not None:
        backward(
            params, config, enc_cache, head_cache,
            2.0 * w_graph * p_err,
            2.0 * w_node * q_err / n_count,
            2.0 * w_pair * pair_err / pair_count,
            grads,
        )
    return total, (loss_graph, loss_node, loss_pair)


def _split_loss(params, config, targets, weights, predictions=None):
    if not targets:
        return float("nan")
    return float(
        np.mean([graph_loss(params, config, t, weights, predictions=predictions)[0]
                 for t in targets])
    )


def _r2_by_property(
    names: Sequence[str], targets: Sequence[GraphTargets], preds: Sequence[np.ndarray]
) -> dict[str, float]:
    out: dict[str, float] = {}
    for j, name in enumerate(names):
        y = np.array([t.p[j] for t in targets if t.p_mask[j]])
        f = np.array([p[j] for t, p in zip(targets, preds) if t.p_mask[j]])
        if y.size < 2:
            continue
        denom = float(((y - y.mean()) ** 2).sum())
        if denom < 1e-12:
            continue
        out[name] = 1.0 - float(((f - y) ** 2).sum()) / denom
    return out


# ---------------------------------------------------------------------------
# optimizers

class _Adam:
    def __init__(self, params, lr, beta1, beta2, eps):
        self.lr, self.b1, self.b2, self.eps = lr, beta1, beta2, eps
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0

    def step(self, params, grads):
        self.t += 1
        correct1 = 1.0 - self.b1**self.t
        correct2 = 1.0 - self.b2**self.t
        for name in params:
            g = grads[name]
            self.m[name] = self.b1 * self.m[name] + (1.0 - self.b1) * g
            self.v[name] = self.b2 * self.v[name] + (1.0 - self.b2) * g * g
            m_hat = self.m[name] / correct1
            v_hat = self.v[name] / correct2
            params[name] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


class _Sgd:
    def __init__(self, params, lr):
        self.lr = lr

    def step(self, params, grads):
        for name in params:
            params[name] -= self.lr * grads[name]


# ---------------------------------------------------------------------------
# training loop

def _compute_vectors(graphs: Sequence[Graph], registry) -> list:
    skipped: dict[str, int] = {}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        vectors = [compute_all(g, registry) for g in graphs]
    for w in caught:
        text = str(w.message)
        key = text.split(":")[-1].strip() if "skipping" in text else text
        skipped[key] = skipped.get(key, 0) + 1
    for key, count in sorted(skipped.items()):
        warnings.warn(f"target computation: {count} graph(s): {key}", stacklevel=3)
    return vectors


def train(
    corpus: Corpus | Sequence[Graph],
    config: TrainConfig = TrainConfig(),
    registry: Sequence[PropertyDescriptor] | None = None,
    encoder_config: EncoderConfig = EncoderConfig(),
) -> tuple[EncoderModel, list[MetricRow]]:
    """Fit encoder and heads on a corpus; returns the model and metric log.

    Deterministic for a fixed config: the split, the shuffles, and the
    accumulation order all come from the seed.  Raises
    ``TrainingDivergedError`` carrying the last finite checkpoint if the
    loss leaves the reals.
    """
    graphs = list(corpus)
    if len(graphs) < 10:
        raise ValueError(f"training needs >= 10 graphs, got {len(graphs)}")
    if registry is None:
        registry = training_registry()

    order = child_rng(config.seed, 0).permutation(len(graphs))
    n_val = int(round(config.val_fraction * len(graphs)))
    if config.val_fraction > 0:
        n_val = max(1, n_val)
    val_idx = [int(i) for i in order[:n_val]]
    train_idx = [int(i) for i in order[n_val:]]

    vectors = _compute_vectors(graphs, registry)
    stats = fit_normalizer([vectors[i] for i in train_idx])
    node_stats, pair_stats = _fit_local_stats([graphs[i] for i in train_idx])

    def targets_for(indices: Iterable[int]) -> list[GraphTargets]:
        out = []
        for i in indices:
            t = _build_targets(
                graphs[i], apply_normalizer(vectors[i], stats), stats,
                node_stats, pair_stats, encoder_config.d_in,
            )
            if t is not None:
                out.append(t)
        return out

    train_targets = targets_for(train_idx)
    val_targets = targets_for(val_idx)
    if not train_targets:
        raise ValueError("no usable training graphs after masking")

    k_graph = len(stats.names)
    params = init_params(
        encoder_config, k_graph, len(node_stats), len(pair_stats), seed=config.seed
    )
    weights = (config.w_graph, config.w_node, config.w_pair)
    if config.optimizer == "adam":
        optimizer = _Adam(params, config.learning_rate, config.beta1, config.beta2,
                          config.adam_eps)
    else:
        optimizer = _Sgd(params, config.learning_rate)

    log: list[MetricRow] = []

    def evaluate(epoch: int, split: str, targets: list[GraphTargets]) -> float:
        preds: list[np.ndarray] = []
        loss = _split_loss(params, encoder_config, targets, weights, predictions=preds)
        log.append(MetricRow(epoch, split, loss, _r2_by_property(stats.names, targets, preds)))
        return loss

    evaluate(0, "train", train_targets)
    evaluate(0, "val", val_targets)

    checkpoint = copy.deepcopy(params)
    tail: collections.deque[dict[str, np.ndarray]] = collections.deque(
        maxlen=config.average_tail or 1
    )
    for epoch in range(1, config.epochs + 1):
        shuffle = child_rng(config.seed, epoch).permutation(len(train_targets))
        epoch_losses: list[float] = []
        epoch_preds: list[np.ndarray] = []
        epoch_order: list[int] = []
        for start in range(0, len(shuffle), config.batch_size):
            batch = [int(i) for i in shuffle[start:start + config.batch_size]]
            grads = {name: np.zeros_like(value) for name, value in params.items()}
            batch_loss = 0.0
            for i in batch:
                try:
                    loss, _ = graph_loss(
                        params, encoder_config, train_targets[i], weights,
                        grads=grads, predictions=epoch_preds,
                    )
                except NumericError as exc:
                    # non-finite forward/backward is divergence presenting early
                    raise TrainingDivergedError(
                        f"training diverged in epoch {epoch}: {exc}",
                        checkpoint=checkpoint,
                    ) from exc
                epoch_order.append(i)
                batch_loss += loss
            for name in grads:
                grads[name] /= len(batch)
            optimizer.step(params, grads)
            epoch_losses.append(batch_loss / len(batch))

        train_loss = float(np.mean(epoch_losses))
        if not np.isfinite(train_loss):
            raise TrainingDivergedError(
                f"training loss became non-finite in epoch {epoch}",
                checkpoint=checkpoint,
            )
        ordered = sorted(zip(epoch_order, epoch_preds), key=lambda pair: pair[0])
        log.append(MetricRow(
            epoch, "train", train_loss,
            _r2_by_property(
                stats.names,
                [train_targets[i] for i, _ in ordered],
                [p for _, p in ordered],
            ),
        ))
        evaluate(epoch, "val", val_targets)
        checkpoint = copy.deepcopy(params)
        tail.append(checkpoint)

    if config.average_tail > 0 and tail:
        # Shipped parameters are the uniform tail average; log what the
        # averaged model actually scores so the final rows describe it.
        params = {
            name: np.mean(np.stack([snap[name] for snap in tail]), axis=0)
            for name in params
        }
        evaluate(config.epochs, "train_final", train_targets)
        evaluate(config.epochs, "val_final", val_targets)

    def last_loss(*splits: str) -> float:
        for split in splits:
            for row in reversed(log):
                if row.split == split:
                    return row.loss
        return float("nan")

    final_train = last_loss("train_final", "train")
    final_val = last_loss("val_final", "val")
    model = EncoderModel(
        config=encoder_config,
        params=params,
        graph_properties=stats.names,
        node_properties=tuple(node_stats),
        pair_properties=tuple(pair_stats),
        stats=stats,
        node_stats=node_stats,
        pair_stats=pair_stats,
        metadata={
            "train_config": asdict(config),
            "epochs_run": config.epochs,
            "train_graphs": len(train_targets),
            "val_graphs": len(val_targets),
            "final_train_loss": final_train,
            "final_val_loss": final_val,
        },
    )
    return model, log


# ---------------------------------------------------------------------------
# inference helpers

def embed(model: EncoderModel, g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """(graph embedding = mean-pooled Z, node embeddings Z)."""
    z = model.forward(g)
    return z.mean(axis=0), z


def fuse(z: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Row-wise concatenation [e_i | z_i] of external features and embeddings."""
    z = np.asarray(z, dtype=float)
    e = np.asarray(e, dtype=float)
    if z.ndim != 2 or e.ndim != 2:
        raise ShapeError(f"fuse expects 2-d matrices, got {e.shape} and {z.shape}")
    if z.shape[0] != e.shape[0]:
        raise ShapeError(f"row mismatch: {e.shape[0]} external vs {z.shape[0]} embedding rows")
    return np.hstack([e, z])


def discrimination_experiment(
    model: EncoderModel,
    graphs: Sequence[Graph],
    ladder: Sequence[int] = tuple(range(1, 11)),
    seed: int = 0,
    include_control: bool = True,
) -> DiscriminationResult:
    """Edge-flip perturbation trend: sqrt(Delta) against prediction shift.

    Delta = ||D - D'||_F^2 + ||A - A'||_F^2 with identity alignment.  Each
    graph gets one nested ladder: a single permutation of its vertex pairs,
    with the k-flip graph toggling the first k pairs, so every prefix is a
    uniform k-subset and consecutive rungs differ by one flip.  The headline
    statistic is the mean within-ladder Spearman over graphs.
    """
    from scipy.stats import spearmanr

    rows: list[tuple[str, int, float, float]] = []
    per_graph: dict[str, float] = {}
    for index, g in enumerate(graphs):
        a = adjacency_matrix(g)
        base_pred = model.predict(g)[0]
        pairs = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
        perm = child_rng(seed, index).permutation(len(pairs))
        ks = sorted({int(k) for k in ladder if 1 <= k <= len(pairs)})
        if include_control:
            ks = [0, *ks]
        flipped = a.copy()
        done = 0
        ladder_rows: list[tuple[str, int, float, float]] = []
        for k in ks:
            for c in perm[done:k]:
                u, v = pairs[int(c)]
                flipped[u, v] = flipped[v, u] = 1.0 - flipped[u, v]
            done = max(done, k)
            g2 = Graph.from_edges(
                [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if flipped[u, v]],
                g.n, id=f"{g.id}+flip{k}", domain=g.domain,
            )
            degree_diff = a.sum(axis=1) - flipped.sum(axis=1)
            delta = float((degree_diff @ degree_diff) + ((a - flipped) ** 2).sum())
            pred = model.predict(g2)[0]
            row = (g.id, k, float(np.sqrt(delta)),
                   float(np.linalg.norm(pred - base_pred)))
            rows.append(row)
            if k >= 1:
                ladder_rows.append(row)
        if len(ladder_rows) >= 2:
            corr = spearmanr([r[2] for r in ladder_rows],
                             [r[3] for r in ladder_rows]).statistic
            if np.isfinite(corr):
                per_graph[g.id] = float(corr)
    scored = [(d, dist) for _, k, d, dist in rows if k >= 1]
    pooled = spearmanr([s[0] for s in scored], [s[1] for s in scored]).statistic
    if not per_graph:
        raise ValueError("no graph produced a usable flip ladder")
    return DiscriminationResult(
        rows=tuple(rows),
        spearman=float(np.mean(list(per_graph.values()))),
        spearman_pooled=float(pooled),
        per_graph=per_graph,
    )


# ---------------------------------------------------------------------------
# serialization

def save_model(model: EncoderModel, path: str) -> None:
    """Single JSON document; identical models serialize byte-identically."""
    doc = {
        "format": "structural-encoder/1",
        "encoder": asdict(model.config),
        "graph_properties": list(model.graph_properties),
        "node_properties": list(model.node_properties),
        "pair_properties": list(model.pair_properties),
        "normalization": {
            "names": list(model.stats.names),
            "means": dict(model.stats.means),
            "stds": dict(model.stats.stds),
            "dropped": dict(model.stats.dropped),
            "fingerprint": model.stats.fingerprint,
        },
        "node_stats": {k: list(v) for k, v in model.node_stats.items()},
        "pair_stats": {k: list(v) for k, v in model.pair_stats.items()},
        "metadata": model.metadata,
        "params": {name: value.tolist() for name, value in model.params.items()},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_model(path: str) -> EncoderModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "structural-encoder/1":
        raise ValueError(f"unrecognized model format in {path!r}")
    norm = doc["normalization"]
    stats = NormalizationStats(
        names=tuple(norm["names"]),
        means=norm["means"],
        stds=norm["stds"],
        dropped=norm["dropped"],
        fingerprint=norm["fingerprint"],
    )
    return EncoderModel(
        config=EncoderConfig(**doc["encoder"]),
        params={name: np.array(value, dtype=float)
                for name, value in doc["params"].items()},
        graph_properties=tuple(doc["graph_properties"]),
        node_properties=tuple(doc["node_properties"]),
        pair_properties=tuple(doc["pair_properties"]),
        stats=stats,
        node_stats={k: (float(v[0]), float(v[1])) for k, v in doc["node_stats"].items()},
        pair_stats={k: (float(v[0]), float(v[1])) for k, v in doc["pair_stats"].items()},
        metadata=doc["metadata"],
    )


def write_metric_log(path: str, log: Sequence[MetricRow], names: Sequence[str]) -> None:
    """CSV: epoch, split, loss, one R^2 column per graph property."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(["epoch", "split", "loss", *(f"r2_{n}" for n in names)]) + "\n")
        for row in log:
            cells = [str(row.epoch), row.split, repr(row.loss)]
            cells += [repr(row.r2[n]) if n in row.r2 else "" for n in names]
            fh.write(",".join(cells) + "\n")
