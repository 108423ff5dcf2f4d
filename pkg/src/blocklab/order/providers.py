"""Stage approximations of least-block-element status (the `on` relation).

Two providers:

* ``IntrinsicFreshWitness`` keeps a counter per pair ``(y, n)`` with
  ``y < n``.  ``on(n, s)`` holds iff for every ``y < n`` the number of
  elements strictly between ``y`` and ``n`` in the stage-s order is at
  least ``counter(y, n) + 1``; on success every counter ``(., n)``
  increments.  True least-block-elements gather witnesses forever and
  stay on infinitely often; others run out.

* ``OracleScheduled`` answers from ground truth: exactly right at every
  stage divisible by ``sync_period``, and flipped with probability
  ``noise`` (seeded, deterministic, exact rational arithmetic) at other
  stages.

Queries must be issued with nondecreasing stages; answers are cached
per (n, stage) so re-queries are idempotent.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .._mix import mix64, TAG_NOISE
from .presentation import OrderPresentation


class OnProvider:
    """Base: deterministic, stateful, queried stage by stage."""

    def on(self, p: OrderPresentation, n: int, s: int) -> bool:
        raise NotImplementedError

    def on_set(self, p: OrderPresentation, s: int) -> List[int]:
        """All n <= s that are on at stage s, ascending."""
        return [n for n in range(1, s + 1) if self.on(p, n, s)]


class IntrinsicFreshWitness(OnProvider):
    def __init__(self):
        self._counters: Dict[int, List[int]] = {}  # n -> counter per y=1..n-1
        self._cache: Dict[Tuple[int, int], bool] = {}
        self._ordered_keys: List = []  # stage-view keys, kept sorted
        self._key_of: Dict[int, object] = {}
        self._synced_to = 0

    def _sync_view(self, p: OrderPresentation, s: int) -> None:
        while self._synced_to < s:
            eid = self._synced_to + 1
            k = p.key(eid)
            bisect.insort(self._ordered_keys, k)
            self._key_of[eid] = k
            self._synced_to = eid

    def _between(self, y: int, n: int) -> int:
        a = bisect.bisect_left(self._ordered_keys, self._key_of[y])
        b = bisect.bisect_left(self._ordered_keys, self._key_of[n])
        return abs(a - b) - 1

    def on(self, p: OrderPresentation, n: int, s: int) -> bool:
        if n > s:
            raise ValueError(f"element {n} not enumerated by stage {s}")
        key = (n, s)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        self._sync_view(p, s)
        counters = self._counters.setdefault(n, [0] * (n - 1))
        ok = all(self._between(y, n) >= counters[y - 1] + 1 for y in range(1, n))
        if ok:
            for i in range(n - 1):
                counters[i] += 1
        self._cache[key] = ok
        return ok


class OracleScheduled(OnProvider):
    def __init__(self, sync_period: int, noise: Fraction = Fraction(0), seed: int = 0):
        if sync_period < 1:
            raise ValueError("sync period must be >= 1")
        noise = Fraction(noise)
        if not (0 <= noise <= 1):
            raise ValueError("noise rate must lie in [0, 1]")
        self.sync_period = sync_period
        self.noise = noise
        self.seed = seed

    def on(self, p: OrderPresentation, n: int, s: int) -> bool:
        if n > s:
            raise ValueError(f"element {n} not enumerated by stage {s}")
        true_leader = p.truth.is_leader(n)
        if s % self.sync_period == 0 or self.noise == 0:
            return true_leader
        draw = mix64(self.seed, TAG_NOISE, n, s) % self.noise.denominator
        flip = draw < self.noise.numerator
        return true_leader != flip


def on(provider: OnProvider, p: OrderPresentation, n: int, s: int) -> bool:
    return provider.on(p, n, s)
