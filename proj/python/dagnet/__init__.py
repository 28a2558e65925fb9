"""Feed-forward networks on layered DAGs with skip connections.

Thin Python surface over the C++ core: build a topology, train it with the
norm-adaptive momentum rule, inspect the convergence trajectory, and score
compression models.
"""

from ._core import (
    Activation,
    CompressionModel,
    ConvergenceVerdict,
    DagTopology,
    DagnetError,
    Dataset,
    ForwardTrace,
    GradientSet,
    IterationRecord,
    TrainOptions,
    TrainResult,
    VerdictThresholds,
    WeightSet,
    backward,
    batch_error,
    batch_gradients,
    crossencoder_topology,
    decode,
    encode,
    estimate_C,
    finite_difference_gradients,
    forward,
    gradient_norm_sq,
    init_random,
    max_eta,
    max_relative_error,
    momentum_coefficient,
    nrmse,
    psnr,
    reconstruction_error,
    split,
    ssim,
    synthetic_faces,
    teacher_targets,
    topology_from_text,
    topology_hash,
    topology_to_text,
    train,
    verify_theorem,
)

__version__ = "1.0.0"

__all__ = [
    "Activation",
    "CompressionModel",
    "ConvergenceVerdict",
    "DagTopology",
    "DagnetError",
    "Dataset",
    "ForwardTrace",
    "GradientSet",
    "IterationRecord",
    "TrainOptions",
    "TrainResult",
    "VerdictThresholds",
    "WeightSet",
    "backward",
    "batch_error",
    "batch_gradients",
    "crossencoder_topology",
    "decode",
    "encode",
    "estimate_C",
    "finite_difference_gradients",
    "forward",
    "gradient_norm_sq",
    "init_random",
    "max_eta",
    "max_relative_error",
    "momentum_coefficient",
    "nrmse",
    "psnr",
    "reconstruction_error",
    "split",
    "ssim",
    "synthetic_faces",
    "teacher_targets",
    "topology_from_text",
    "topology_hash",
    "topology_to_text",
    "train",
    "verify_theorem",
]
