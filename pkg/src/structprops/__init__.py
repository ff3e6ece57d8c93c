"""Structural graph property toolkit.

Graphs in, structure out: exact invariants with brute-force cross-checks,
reversible spectral positional encodings, a hand-backpropagated attention
encoder trained to regress the invariants, mixup-style corpus augmentation,
and WL-kernel domain similarity analysis.  The ``props`` command line wraps
the same pipeline.
"""

__version__ = "0.1.0"

from .errors import (
    ConvergenceError,
    CorpusParseError,
    GraphSizeError,
    GraphValidationError,
    NumericError,
    ShapeError,
    StructPropsError,
    TrainingDivergedError,
)
from .graphs import (
    Corpus,
    Graph,
    adjacency_matrix,
    complement,
    load_corpus,
    relabel,
    save_corpus,
)
from .generators import child_rng, generate
from .invariants import (
    NormalizationStats,
    PropertyDescriptor,
    PropertyVector,
    apply_normalizer,
    compute_all,
    default_registry,
    fit_normalizer,
    property_matrix,
    write_properties_csv,
)
from .oracles import ORACLE_SIZE_LIMITS, oracle_compute, oracle_names
from .localprops import (
    betweenness_centrality,
    closeness_centrality,
    compute_node_properties,
    compute_pair_properties,
    node_property_registry,
    pair_property_registry,
)
from .spectral import (
    PositionalEncoding,
    SpectralDecomposition,
    laplacian,
    positional_encoding,
    read_encodings,
    reconstruct_adjacency,
    write_encodings,
)
from .encoder import EncoderConfig, backward, forward_encoder, forward_heads, init_params
from .training import (
    DiscriminationResult,
    EncoderModel,
    MetricRow,
    TrainConfig,
    discrimination_experiment,
    embed,
    fuse,
    load_model,
    save_model,
    train,
    training_registry,
    write_metric_log,
)
from .augment import (
    FamilySpec,
    MixupSpec,
    augment_corpus,
    build_synthetic_corpus,
    default_training_corpus,
    mixup,
)
from .analysis import (
    SimilarityReport,
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
from .estimators import (
    PropertyExtractor,
    SpectralEncodingTransformer,
    StructuralEncoder,
    WLSubtreeKernel,
)

__all__ = [
    "__version__",
    # errors
    "StructPropsError",
    "GraphValidationError",
    "CorpusParseError",
    "GraphSizeError",
    "ShapeError",
    "NumericError",
    "ConvergenceError",
    "TrainingDivergedError",
    # graphs
    "Graph",
    "Corpus",
    "adjacency_matrix",
    "relabel",
    "complement",
    "load_corpus",
    "save_corpus",
    "generate",
    "child_rng",
    # invariants
    "PropertyDescriptor",
    "PropertyVector",
    "NormalizationStats",
    "default_registry",
    "compute_all",
    "fit_normalizer",
    "apply_normalizer",
    "property_matrix",
    "write_properties_csv",
    "oracle_compute",
    "oracle_names",
    "ORACLE_SIZE_LIMITS",
    # node and pair properties
    "node_property_registry",
    "pair_property_registry",
    "compute_node_properties",
    "compute_pair_properties",
    "closeness_centrality",
    "betweenness_centrality",
    # spectral encodings
    "laplacian",
    "SpectralDecomposition",
    "PositionalEncoding",
    "positional_encoding",
    "reconstruct_adjacency",
    "write_encodings",
    "read_encodings",
    # encoder and training
    "EncoderConfig",
    "init_params",
    "forward_encoder",
    "forward_heads",
    "backward",
    "TrainConfig",
    "EncoderModel",
    "MetricRow",
    "DiscriminationResult",
    "training_registry",
    "train",
    "embed",
    "fuse",
    "save_model",
    "load_model",
    "write_metric_log",
    "discrimination_experiment",
    # augmentation
    "MixupSpec",
    "FamilySpec",
    "mixup",
    "augment_corpus",
    "build_synthetic_corpus",
    "default_training_corpus",
    # analysis
    "wl_kernel",
    "kernel_matrix",
    "kernel_embedding",
    "similarity_matrix",
    "block_statistics",
    "SimilarityReport",
    "domain_similarity_report",
    "write_similarity_csv",
    "write_block_summary_json",
    "write_similarity_heatmap",
    # sklearn-style wrappers
    "PropertyExtractor",
    "SpectralEncodingTransformer",
    "StructuralEncoder",
    "WLSubtreeKernel",
]
