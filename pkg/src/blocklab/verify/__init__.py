"""Independent oracles, invariant checkers, and run reports."""

from .oracles import brute_block_at_stage, oracle_block_finite

__all__ = [
    "brute_block_at_stage",
    "oracle_block_finite",
]
