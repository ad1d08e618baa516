"""Predator-prey swarm simulator with a PPO trainer and a boids baseline."""

from ._core import (
    AgentLookupError,
    ConfigError,
    ContractViolation,
    DimensionError,
    FormatError,
    NumericalError,
    World,
    __version__,
    compute_gae,
    config_digest,
    default_config,
    discounted_return,
    evaluate,
    feature_layout,
    observation_dim,
    train,
)

__all__ = [
    "AgentLookupError",
    "ConfigError",
    "ContractViolation",
    "DimensionError",
    "FormatError",
    "NumericalError",
    "World",
    "__version__",
    "compute_gae",
    "config_digest",
    "default_config",
    "discounted_return",
    "evaluate",
    "feature_layout",
    "observation_dim",
    "train",
]
