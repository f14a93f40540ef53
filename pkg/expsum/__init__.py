"""Evaluation and norms of the divisor exponential sum."""

from expsum.sampling import (
    SumSampling,
    derivative_bound,
    eval_S_direct,
    l1_norm,
    l2_norm_sq,
    sample_S_fft,
    write_samples_csv,
)

__all__ = [
    "SumSampling",
    "derivative_bound",
    "eval_S_direct",
    "l1_norm",
    "l2_norm_sq",
    "sample_S_fft",
    "write_samples_csv",
]
