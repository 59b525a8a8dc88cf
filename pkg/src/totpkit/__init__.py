"""Counting problems with prefix-extension oracles: counting, enumeration, closure constructions."""

from .core import (
    CallCounter,
    CountingProblem,
    FullCube,
    IntegrityError,
    OracleScaleError,
    UsageError,
    WitnessSetProblem,
    brute_force_count,
    canonical_tree,
    count,
    tree_to_problem,
    tree_tot,
    tree_total,
    validate_oracle,
)
from .enumeration import (
    OVERFLOW,
    Comparison,
    closest_witness,
    compare_with_fp,
    count_bounded,
    enumerate_witnesses,
    exists_in_interval,
    next_witness_geq,
    prev_witness_leq,
)

__version__ = "0.1.0"

__all__ = [
    "CallCounter",
    "CountingProblem",
    "FullCube",
    "IntegrityError",
    "OracleScaleError",
    "UsageError",
    "WitnessSetProblem",
    "brute_force_count",
    "canonical_tree",
    "count",
    "tree_to_problem",
    "tree_tot",
    "tree_total",
    "validate_oracle",
    "OVERFLOW",
    "Comparison",
    "closest_witness",
    "compare_with_fp",
    "count_bounded",
    "enumerate_witnesses",
    "exists_in_interval",
    "next_witness_geq",
    "prev_witness_leq",
]
