"""The stage-s block around an element.

``block_at_stage(p, n, s, hist)`` is the maximal contiguous run of the
stage-s order around ``n`` that excludes

  (i)   any element with a smaller id than ``n``,
  (ii)  any element enumerated at or after ``last_on(n)``, and
  (iii) any element other than ``n`` that was on at any stage in
        ``[last_on(n), s]``,

where ``last_on(n)`` is the last stage strictly before ``s`` at which
``n`` was on, or stage 1 if it never was.  The run always contains
``n`` itself.  The on-history must already include stage ``s``.
"""

from __future__ import annotations

from typing import List

from .history import OnHistory
from .presentation import OrderPresentation, enumerate_to


def block_at_stage(p: OrderPresentation, n: int, s: int, hist: OnHistory) -> List[int]:
    if n > s:
        raise ValueError(f"element {n} not enumerated by stage {s}")
    view = enumerate_to(p, s)
    ordered = view.ordered
    pos = ordered.index(n)
    return _block_from_view(ordered, pos, n, s, hist)


def _block_from_view(ordered: List[int], pos: int, n: int, s: int, hist: OnHistory) -> List[int]:
    """Shared rule evaluator over an already-sorted stage view."""
    last_on = hist.last_on_before(n, s)

    def admissible(m: int) -> bool:
        if m < n:
            return False  # (i)
        if m >= last_on:
            return False  # (ii): ids are enumeration stages
        if hist.on_within(m, last_on, s):
            return False  # (iii)
        return True

    lo = pos
    while lo > 0 and admissible(ordered[lo - 1]):
        lo -= 1
    hi = pos
    while hi + 1 < len(ordered) and admissible(ordered[hi + 1]):
        hi += 1
    return ordered[lo : hi + 1]
