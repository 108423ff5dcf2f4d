"""Record of which elements were `on` at which stages.

``block_at_stage`` and the construction both consult this record; the
construction feeds it one stage at a time, tests may script it.
"""

from __future__ import annotations

import bisect
from typing import Dict, Iterable, List


class OnHistory:
    def __init__(self):
        self._stages: Dict[int, List[int]] = {}  # element -> sorted on-stages
        self.last_recorded = 0

    def record(self, stage: int, on_set: Iterable[int]) -> None:
        if stage <= self.last_recorded:
            raise ValueError(f"stage {stage} already recorded")
        for n in on_set:
            self._stages.setdefault(n, []).append(stage)
        self.last_recorded = stage

    def on_at(self, n: int, stage: int) -> bool:
        st = self._stages.get(n)
        if not st:
            return False
        i = bisect.bisect_left(st, stage)
        return i < len(st) and st[i] == stage

    def last_on_before(self, n: int, stage: int) -> int:
        """Last stage strictly before ``stage`` at which n was on; 1 if never."""
        st = self._stages.get(n)
        if not st:
            return 1
        i = bisect.bisect_left(st, stage)
        return st[i - 1] if i > 0 else 1

    def on_within(self, n: int, lo: int, hi: int) -> bool:
        """Was n on at any stage in [lo, hi]?"""
        st = self._stages.get(n)
        if not st:
            return False
        i = bisect.bisect_left(st, lo)
        return i < len(st) and st[i] <= hi

    def last_on_upto(self, n: int, stage: int) -> int:
        """Last on-stage <= stage, or 0 if none."""
        st = self._stages.get(n)
        if not st:
            return 0
        i = bisect.bisect_right(st, stage)
        return st[i - 1] if i > 0 else 0
