"""Position keys: exact coordinates for elements of a presented order.

An element sits at ``(block_key, intra_key)``: the block key is a dyadic
rational locating the element's block within the condensation, and the
intra key is an integer locating it inside its block.  Comparison is
lexicographic, which makes the comparator total, strict on distinct
keys, and permanent (keys never move once assigned).
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple


class PositionKey(NamedTuple):
    block: Fraction
    intra: int

    def __repr__(self) -> str:  # compact, stable
        return f"PositionKey({self.block}, {self.intra})"


def key_lt(a: PositionKey, b: PositionKey) -> bool:
    return a < b


def midpoint(a: Fraction, b: Fraction) -> Fraction:
    """Dyadic midpoint; stays exact."""
    return (a + b) / 2
