"""Brute-force oracles, deliberately written as direct rule transcriptions.

These stay independent of the engine's incremental data structures:
each call re-derives its answer from scratch.
"""

from __future__ import annotations

from typing import Dict, List

from ..order.history import OnHistory
from ..order.presentation import OrderPresentation, StageView, enumerate_to


def brute_block_at_stage(p: OrderPresentation, n: int, s: int, hist: OnHistory) -> List[int]:
    """Straight-line evaluation of the three block exclusion rules.

    Marks every element of the stage view admissible or not, then takes
    the contiguous admissible run around ``n``.
    """
    if n > s:
        raise ValueError(f"element {n} not enumerated by stage {s}")
    ordered = enumerate_to(p, s).ordered
    last_on = hist.last_on_before(n, s)
    flags = []
    for m in ordered:
        if m == n:
            flags.append(True)
            continue
        ok = True
        if m < n:
            ok = False
        if m >= last_on:
            ok = False
        if any(hist.on_at(m, t) for t in range(last_on, s + 1)):
            ok = False
        flags.append(ok)
    pos = ordered.index(n)
    lo = pos
    while lo > 0 and flags[lo - 1]:
        lo -= 1
    hi = pos
    while hi + 1 < len(ordered) and flags[hi + 1]:
        hi += 1
    return ordered[lo : hi + 1]


def oracle_block_finite(view: StageView, truth) -> List[List[int]]:
    """Finite condensation of a stage view: elements grouped by true block.

    Returns the blocks as lists of ids, in the order of the view.
    """
    groups: Dict[object, List[int]] = {}
    order: List[object] = []
    for eid in view.ordered:
        k = truth.block_key(eid)
        if k not in groups:
            groups[k] = []
            order.append(k)
        groups[k].append(eid)
    return [groups[k] for k in order]
