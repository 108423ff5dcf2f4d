"""blocklab: stage-wise linear-order copy construction with an enumerable non-block relation.

The package builds, one stage at a time, a computable copy M of a given
linear-order presentation L while enumerating (monotonically) pairs of
M-elements that lie in distinct blocks.  It ships two independent
implementations of the same construction (a tree-driven engine and a
straight-line replay interpreter), generators with ground truth for a
family of order types, endpoint surgery, self-embedding extractors, and
a verification suite of invariant checkers and brute-force oracles.
"""

__version__ = "0.1.0"
