"""Kac's random walk on the sphere, its couplings, and Monte Carlo checks."""

__version__ = "0.1.0"

from .errors import ConfigError, DegenerateInputError, InvariantViolation, UsageError
from .partition import (
    PairSchedule,
    PartitionSequence,
    build_partitions,
    connectivity_probability,
    is_fully_merged,
)
from .rng import RngStream
from .walk import (
    NORM_TOL,
    SphereState,
    UpdateTriple,
    kac_step,
    renormalize,
    run_walk,
    run_walk_batch,
    sample_uniform_sphere,
    sample_update,
)
