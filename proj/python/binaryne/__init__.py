"""Binary network embedding with bit-packed Hamming-distance search."""

from ._core import (
    AttributeMatrix,
    CodeMatrix,
    Graph,
    LabelMap,
    ModelParams,
    PairCounts,
    ParseError,
    TrainConfig,
    WalkConfig,
    binarize,
    collect_pair_counts,
    feature_codes,
    hamming,
    load_attributes,
    load_checkpoint,
    load_codes,
    load_edge_list,
    load_labels,
    run_benchmark,
    save_checkpoint,
    save_codes,
    top_k,
    train,
)

__all__ = [
    "AttributeMatrix",
    "CodeMatrix",
    "Graph",
    "LabelMap",
    "ModelParams",
    "PairCounts",
    "ParseError",
    "TrainConfig",
    "WalkConfig",
    "binarize",
    "collect_pair_counts",
    "feature_codes",
    "hamming",
    "load_attributes",
    "load_checkpoint",
    "load_codes",
    "load_edge_list",
    "load_labels",
    "run_benchmark",
    "save_checkpoint",
    "save_codes",
    "top_k",
    "train",
]

__version__ = "0.1.0"
