"""Adversarial discrimination of quantum, classical-quantum, and
measure-and-prepare channels: divergences, one-shot Neyman-Pearson tests,
convex channel-divergence minimization, and Stein-exponent experiments."""

from .errors import (
    CapExceededError,
    ConvergenceError,
    DomainError,
    QadvError,
    ValidationError,
)
from .qobjects import (
    Channel,
    CQChannel,
    DensityMatrix,
    ProbDist,
    channel_apply,
    channel_from_kraus,
    cq_channel,
    density_from_matrix,
)

__all__ = [
    "CapExceededError",
    "Channel",
    "ConvergenceError",
    "CQChannel",
    "DensityMatrix",
    "DomainError",
    "ProbDist",
    "QadvError",
    "ValidationError",
    "channel_apply",
    "channel_from_kraus",
    "cq_channel",
    "density_from_matrix",
]
