"""Circulant binary embedding: FFT-based binary codes for high-dimensional vectors."""

from ._cbe import (
    DimensionError,
    FormatError,
    IoError,
    Model,
    NumericError,
    ParameterError,
    UnboundedError,
    __version__,
    circulant_multiply,
    dft,
    hamming,
    load_model,
    model_from_bytes,
    recall,
    sample_params,
    simulate_variance,
    train,
)

__all__ = [
    "DimensionError",
    "FormatError",
    "IoError",
    "Model",
    "NumericError",
    "ParameterError",
    "UnboundedError",
    "__version__",
    "circulant_multiply",
    "dft",
    "hamming",
    "load_model",
    "model_from_bytes",
    "recall",
    "sample_params",
    "simulate_variance",
    "train",
]
