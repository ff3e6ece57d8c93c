"""Command-line interface: one executable over the whole pipeline.

Exit codes: 0 success, 1 validation or usage error, 2 numeric or
convergence failure.  Every run that writes outputs also writes a
``<output>.manifest.json`` with the resolved configuration and tool
version, and no subcommand ever mutates its inputs.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
import warnings

import numpy as np

from . import __version__
from .analysis import (
    domain_similarity_report,
    write_block_summary_json,
    write_similarity_csv,
    write_similarity_heatmap,
)
from .augment import FamilySpec, MixupSpec, augment_corpus, build_synthetic_corpus
from .errors import (
    ConvergenceError,
    GraphSizeError,
    GraphValidationError,
    CorpusParseError,
    NumericError,
    ShapeError,
    StructPropsError,
    TrainingDivergedError,
)
from .generators import generate
from .graphs import Corpus, Graph, load_corpus, save_corpus
from .invariants import compute_all, default_registry
from .oracles import oracle_compute, oracle_names, ORACLE_SIZE_LIMITS
from .spectral import positional_encoding, write_encodings
from .training import (
    TrainConfig,
    discrimination_experiment,
    embed,
    fuse,
    load_model,
    save_model,
    train,
    write_metric_log,
)

_USAGE_ERRORS = (
    GraphValidationError,
    CorpusParseError,
    GraphSizeError,
    ShapeError,
    ValueError,
    KeyError,
    FileNotFoundError,
    IsADirectoryError,
)
_NUMERIC_ERRORS = (NumericError, ConvergenceError, TrainingDivergedError)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; the contract reserves 2 for
    # numeric failures, so route usage errors to exit code 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write_manifest(out_path: str, command: str, options: dict) -> None:
    skip = {"fn", "command", "action", "what"}
    doc = {
        "tool": "props",
        "version": __version__,
        "command": command,
        "config": {k: v for k, v in sorted(options.items()) if k not in skip},
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _pool_map(fn, items, threads: int | None):
    if threads is not None and threads < 1:
        raise ValueError("--threads must be >= 1")
    if threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    workers = threads or os.cpu_count() or 1
    if workers == 1:
        return [fn(x) for x in items]
    with multiprocessing.Pool(workers) as pool:
        return pool.map(fn, items)  # order-preserving


def _registry_subset(names: str | None):
    registry = default_registry()
    if names is None:
        return registry
    wanted = [s.strip() for s in names.split(",") if s.strip()]
    known = {d.name for d in registry}
    unknown = [w for w in wanted if w not in known]
    if unknown:
        raise ValueError(f"unknown properties: {', '.join(unknown)}")
    return [d for d in registry if d.name in wanted]


def _compute_row(args):
    g, names = args
    registry = [d for d in default_registry() if d.name in names]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return compute_all(g, registry)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_compute(args) -> int:
    corpus = load_corpus(args.input, format=args.format)
    registry = _registry_subset(args.properties)
    names = [d.name for d in registry]
    vectors = _pool_map(_compute_row, [(g, names) for g in corpus], args.threads)
    from .invariants import write_properties_csv

    write_properties_csv(args.out, [g.id for g in corpus], vectors, names)
    _write_manifest(args.out, "compute", vars(args))
    print(f"wrote {len(vectors)} property rows to {args.out}")
    return 0


def _cmd_oracle(args) -> int:
    if args.input is not None:
        graphs = list(load_corpus(args.input, format=args.format))
    else:
        rng = np.random.default_rng(args.seed)
        graphs = []
        for i in range(args.samples):
            n = int(rng.integers(3, args.max_n + 1))
            p = float(rng.choice([0.2, 0.5, 0.8]))
            graphs.append(generate("erdos-renyi", n=n, p=p, seed=int(rng.integers(2**31)),
                                   id=f"sample-{i}", domain="oracle"))
    names = [d.name for d in _registry_subset(args.properties) if d.name in oracle_names()]
    checked = 0
    for g in graphs:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vector = compute_all(g, [d for d in default_registry() if d.name in names])
        for name in names:
            limit = ORACLE_SIZE_LIMITS.get(name)
            if limit is not None and g.n > limit:
                continue
            if not vector.applicable(name):
                continue
            fast = vector.values[name]
            slow = oracle_compute(name, g)
            tol = 1e-3 if name == "lovasz_number" else 1e-6
            same = (fast == slow) if isinstance(slow, int) else abs(float(fast) - float(slow)) <= tol
            checked += 1
            if not same:
                record = {"id": g.id, "n": g.n, "edges": sorted(map(list, g.edges))}
                print(f"MISMATCH {name}: fast={fast} oracle={slow} on {json.dumps(record)}")
                return 2
    print(f"all properties matched ({checked} comparisons over {len(graphs)} graphs)")
    return 0


def _cmd_encode(args) -> int:
    corpus = load_corpus(args.input, format=args.format)
    items = [
        (g.id, positional_encoding(g, mode=args.mode, width=args.width)) for g in corpus
    ]
    write_encodings(args.out, items)
    _write_manifest(args.out, "encode", vars(args))
    print(f"wrote {len(items)} encodings to {args.out}")
    return 0


def _parse_family(text: str) -> FamilySpec:
    """model:count:nmin-nmax[:key=value,...] e.g. erdos-renyi:100:8-24:p=0.3"""
    parts = text.split(":")
    if len(parts) < 3:
        raise ValueError(f"family spec needs model:count:nmin-nmax, got {text!r}")
    model, count, span = parts[0], int(parts[1]), parts[2]
    lo, _, hi = span.partition("-")
    params = {}
    if len(parts) > 3 and parts[3]:
        for piece in parts[3].split(","):
            key, _, value = piece.partition("=")
            params[key.strip()] = float(value) if "." in value else int(value)
    return FamilySpec(model, count, (int(lo), int(hi or lo)), params=params)


def _cmd_augment(args) -> int:
    if args.action == "synth":
        if args.family:
            specs = [_parse_family(f) for f in args.family]
            specs = [
                FamilySpec(s.model, s.count, s.n_range, seed=args.seed + i,
                           params=s.params, domain=s.domain)
                for i, s in enumerate(specs)
            ]
            corpus = build_synthetic_corpus(specs)
        else:
            from .augment import default_training_corpus

            corpus = default_training_corpus(
                count=args.count, n_range=(args.n_min, args.n_max), seed=args.seed
            )
        save_corpus(corpus, args.out)
        _write_manifest(args.out, "augment synth", vars(args))
        print(f"wrote {len(corpus)} graphs to {args.out}")
        return 0

    corpus = load_corpus(args.input, format=args.format)
    spec = MixupSpec(args.lam, resolution=args.resolution, seed=args.seed)
    extended = augment_corpus(corpus, args.pairs, spec, seed=args.seed)
    save_corpus(extended, args.out)
    _write_manifest(args.out, "augment mixup", vars(args))
    print(f"wrote {len(extended)} graphs ({args.pairs} mixups) to {args.out}")
    return 0


def _cmd_train(args) -> int:
    corpus = load_corpus(args.corpus, format=args.format)
    config = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        optimizer=args.optimizer,
        seed=args.seed,
        val_fraction=args.val_fraction,
        average_tail=args.average_tail,
    )
    from .encoder import EncoderConfig

    encoder_config = EncoderConfig(
        d_in=args.d_in, d=args.d, layers=args.layers, heads=args.heads
    )
    registry = _registry_subset(args.properties) if args.properties else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model, log = train(corpus, config, registry=registry, encoder_config=encoder_config)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    save_model(model, args.out)
    metrics_path = args.metrics or args.out + ".metrics.csv"
    write_metric_log(metrics_path, log, model.graph_properties)
    _write_manifest(args.out, "train", vars(args))
    final = next(r.loss for r in reversed(log) if r.split in ("train_final", "train"))
    print(f"trained {config.epochs} epochs; final train loss {final:.6f}; "
          f"model -> {args.out}; metrics -> {metrics_path}")
    return 0


def _cmd_embed(args) -> int:
    model = load_model(args.model)
    corpus = load_corpus(args.input, format=args.format)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("id," + ",".join(f"z{j}" for j in range(model.config.d)) + "\n")
        node_rows = []
        for g in corpus:
            graph_vec, z = embed(model, g)
            fh.write(g.id + "," + ",".join(repr(float(x)) for x in graph_vec) + "\n")
            if args.per_node:
                for v in range(g.n):
                    node_rows.append(
                        f"{g.id},{v}," + ",".join(repr(float(x)) for x in z[v])
                    )
    if args.per_node:
        with open(args.per_node, "w", encoding="utf-8") as fh:
            fh.write("id,node," + ",".join(f"z{j}" for j in range(model.config.d)) + "\n")
            fh.write("\n".join(node_rows) + ("\n" if node_rows else ""))
    _write_manifest(args.out, "embed", vars(args))
    print(f"wrote {len(corpus)} graph embeddings to {args.out}")
    return 0


def _cmd_analyze(args) -> int:
    if args.input is not None:
        corpus = load_corpus(args.input, format=args.format)
    else:
        corpus = build_synthetic_corpus([
            FamilySpec("erdos-renyi", args.per_family, (10, 30), seed=args.seed,
                       params={"p": 0.2}),
            FamilySpec("barabasi-albert", args.per_family, (10, 30), seed=args.seed + 1,
                       params={"m_attach": 2}),
            FamilySpec("watts-strogatz", args.per_family, (10, 30), seed=args.seed + 2,
                       params={"k": 4, "beta": 0.1}),
        ])
    report = domain_similarity_report(corpus, h=args.h, energy=args.energy)
    write_block_summary_json(args.out, report)
    write_similarity_heatmap(args.heatmap, report)
    if args.matrix:
        write_similarity_csv(args.matrix, report)
    _write_manifest(args.out, "analyze wl", vars(args))
    print(f"in-domain mean {report.mean_in_domain:.4f}, "
          f"cross-domain mean {report.mean_cross_domain:.4f}, "
          f"separation ratio {report.separation_ratio:.4f}")
    print(f"summary -> {args.out}; heatmap -> {args.heatmap}")
    return 0


def _read_matrix_csv(path: str) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header:
            raise ValueError(f"{path}: empty file")
        ids, rows = [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            ids.append(cells[0])
            rows.append([float(x) if x else float("nan") for x in cells[1:]])
    return ids, np.array(rows, dtype=float)


def _cmd_fuse(args) -> int:
    emb_ids, z = _read_matrix_csv(args.embeddings)
    feat_ids, e = _read_matrix_csv(args.features)
    if emb_ids != feat_ids:
        raise ValueError("embeddings and features must list the same ids in the same order")
    fused = fuse(z, e)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("id," + ",".join(f"x{j}" for j in range(fused.shape[1])) + "\n")
        for gid, row in zip(emb_ids, fused):
            fh.write(gid + "," + ",".join(repr(float(x)) for x in row) + "\n")
    _write_manifest(args.out, "fuse", vars(args))
    print(f"wrote {len(emb_ids)} fused rows ({fused.shape[1]} columns) to {args.out}")
    return 0


def _cmd_generate(args) -> int:
    params = {}
    if args.p is not None:
        params["p"] = args.p
    if args.m_attach is not None:
        params["m_attach"] = args.m_attach
    if args.k is not None:
        params["k"] = args.k
    if args.beta is not None:
        params["beta"] = args.beta
    graphs = [
        generate(args.model, n=args.n, seed=args.seed + i,
                 id=f"{args.model}-{i:04d}", domain=args.domain, **params)
        for i in range(args.count)
    ]
    save_corpus(Corpus.from_graphs(graphs), args.out)
    _write_manifest(args.out, "generate", vars(args))
    print(f"wrote {args.count} {args.model} graphs to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# parser

def _build_parser() -> _Parser:
    parser = _Parser(prog="props", description=__doc__)
    parser.add_argument("--version", action="version", version=f"props {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_io(p, input_required=True):
        p.add_argument("--input", required=input_required, help="input corpus path")
        p.add_argument("--format", default="jsonl", choices=["jsonl", "edge-list-dir"],
                       help="corpus format")

    p = sub.add_parser("compute", help="graph invariants to CSV")
    add_io(p)
    p.add_argument("--out", required=True)
    p.add_argument("--properties", help="comma-separated property subset")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes for per-graph fan-out (default: cores)")
    p.set_defaults(fn=_cmd_compute)

    p = sub.add_parser("oracle", help="verify fast invariants against brute-force oracles")
    add_io(p, input_required=False)
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--samples", type=int, default=100,
                   help="random graphs to draw when no --input is given")
    p.add_argument("--properties", help="comma-separated property subset")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("encode", help="spectral positional encodings to a text dump")
    add_io(p)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", default="full", choices=["full", "truncated"])
    p.add_argument("--width", type=int, default=None, help="columns kept in truncated mode")
    p.set_defaults(fn=_cmd_encode)

    p = sub.add_parser("augment", help="mixup augmentation or synthetic corpus generation")
    action = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    pm = action.add_parser("mixup", help="extend a corpus with cross-domain mixups")
    add_io(pm)
    pm.add_argument("--out", required=True)
    pm.add_argument("--pairs", type=int, required=True)
    pm.add_argument("--lam", type=float, default=0.5)
    pm.add_argument("--resolution", default="threshold", choices=["threshold", "bernoulli"])
    pm.add_argument("--seed", type=int, default=0)
    pm.set_defaults(fn=_cmd_augment)
    ps = action.add_parser("synth", help="build a synthetic multi-domain corpus")
    ps.add_argument("--out", required=True)
    ps.add_argument("--count", type=int, default=2000, help="total graphs over the default families")
    ps.add_argument("--n-min", type=int, default=8)
    ps.add_argument("--n-max", type=int, default=24)
    ps.add_argument("--family", action="append",
                    help="model:count:nmin-nmax[:key=val,...]; repeatable, overrides defaults")
    ps.add_argument("--seed", type=int, default=0)
    ps.set_defaults(fn=_cmd_augment)

    p = sub.add_parser("train", help="train the structural encoder")
    p.add_argument("--corpus", required=True)
    p.add_argument("--format", default="jsonl", choices=["jsonl", "edge-list-dir"])
    p.add_argument("--out", required=True, help="model JSON path")
    p.add_argument("--metrics", help="metric log CSV (default: <out>.metrics.csv)")
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--average-tail", type=int, default=50,
                   help="ship the uniform average of the last N epoch snapshots (0: endpoint)")
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--optimizer", default="adam", choices=["adam", "sgd"])
    p.add_argument("--val-fraction", type=float, default=0.1)
    p.add_argument("--properties", help="comma-separated regression target subset")
    p.add_argument("--d-in", type=int, default=16)
    p.add_argument("--d", type=int, default=32)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--heads", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_train)

    p = sub.add_parser("embed", help="structural embeddings from a trained model")
    p.add_argument("--model", required=True)
    add_io(p)
    p.add_argument("--out", required=True, help="graph embedding CSV")
    p.add_argument("--per-node", help="optional per-node embedding CSV")
    p.set_defaults(fn=_cmd_embed)

    p = sub.add_parser("analyze", help="corpus analyses")
    what = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    pw = what.add_parser("wl", help="WL-kernel domain similarity report")
    pw.add_argument("--input", help="corpus path (default: synthetic three-family corpus)")
    pw.add_argument("--format", default="jsonl", choices=["jsonl", "edge-list-dir"])
    pw.add_argument("--out", default="wl_summary.json", help="block summary JSON")
    pw.add_argument("--heatmap", default="wl_heatmap.svg", help="similarity heatmap SVG")
    pw.add_argument("--matrix", help="optional full similarity CSV")
    pw.add_argument("--h", type=int, default=3, help="WL iteration count")
    pw.add_argument("--energy", type=float, default=0.99,
                    help="trace-energy fraction kept in the kernel embedding")
    pw.add_argument("--per-family", type=int, default=50)
    pw.add_argument("--seed", type=int, default=0)
    pw.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("fuse", help="concatenate external features with embeddings")
    p.add_argument("--embeddings", required=True, help="embedding CSV (id + columns)")
    p.add_argument("--features", required=True, help="external feature CSV (id + columns)")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_fuse)

    p = sub.add_parser("generate", help="seeded random graphs to JSONL")
    p.add_argument("--model", required=True,
                   choices=["erdos-renyi", "barabasi-albert", "watts-strogatz"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--p", type=float, help="edge probability (erdos-renyi)")
    p.add_argument("--m-attach", type=int, help="attachments per node (barabasi-albert)")
    p.add_argument("--k", type=int, help="ring neighbors (watts-strogatz)")
    p.add_argument("--beta", type=float, help="rewiring probability (watts-strogatz)")
    p.add_argument("--domain", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _NUMERIC_ERRORS as exc:
        print(f"props: numeric error: {exc}", file=sys.stderr)
        return 2
    except _USAGE_ERRORS as exc:
        print(f"props: error: {exc}", file=sys.stderr)
        return 1
    except StructPropsError as exc:
        print(f"props: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
