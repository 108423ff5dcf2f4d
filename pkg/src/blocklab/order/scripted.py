"""Scripted presentations: small hand-written or generated orders.

File format (text, line-based, UTF-8):

    insert <id> <leftAnchor> <rightAnchor>
    truth-block <id> <label>
    truth-lbe <id>
    # comment

Ids must appear in order 1, 2, 3, ...; anchors are existing element
ids, MIN, or MAX, and must be adjacent in the current order (the new
element goes strictly between them).  Truth records are optional; a
scripted presentation without them rejects ground-truth queries.
"""

from __future__ import annotations

import bisect
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .keys import PositionKey
from .presentation import (
    GroundTruth,
    OrderPresentation,
    PresentationExhausted,
    UnsupportedTruth,
)


class ScriptError(ValueError):
    pass


class _ScriptedScheduler:
    def __init__(self, inserts: Sequence[Tuple[int, str, str]]):
        self.emitted: List[Tuple[PositionKey, Fraction]] = []
        keys: Dict[int, Fraction] = {}
        ordered: List[Fraction] = []
        for eid, left, right in inserts:
            lo = None if left == "MIN" else keys.get(int(left))
            hi = None if right == "MAX" else keys.get(int(right))
            if left != "MIN" and lo is None:
                raise ScriptError(f"insert {eid}: unknown left anchor {left}")
            if right != "MAX" and hi is None:
                raise ScriptError(f"insert {eid}: unknown right anchor {right}")
            if lo is None and hi is None:
                key = Fraction(0) if not ordered else None
                if key is None:
                    raise ScriptError(f"insert {eid}: MIN MAX only valid for the first element")
            elif lo is None:
                if ordered.index(hi) != 0:
                    raise ScriptError(f"insert {eid}: {right} is not the current minimum")
                key = hi - 1
            elif hi is None:
                if ordered.index(lo) != len(ordered) - 1:
                    raise ScriptError(f"insert {eid}: {left} is not the current maximum")
                key = lo + 1
            else:
                i = ordered.index(lo)
                if i + 1 >= len(ordered) or ordered[i + 1] != hi:
                    raise ScriptError(f"insert {eid}: anchors {left},{right} are not adjacent")
                key = (lo + hi) / 2
            keys[eid] = key
            bisect.insort(ordered, key)
            # scripted orders carry no generator blocks; block key mirrors position
            self.emitted.append((PositionKey(key, 0), key))

    def extend_to(self, n: int) -> None:
        if n > len(self.emitted):
            raise PresentationExhausted(f"script has {len(self.emitted)} elements")

    def total_size(self) -> Optional[int]:
        return len(self.emitted)


class _ScriptedTruth(GroundTruth):
    """Truth from explicit records; block 'keys' are the script's labels."""

    def __init__(self, presentation, block_label: Dict[int, str], leaders: set):
        self._p = presentation
        self._block_label = block_label
        self._leaders = leaders

    def block_key(self, eid: int):
        try:
            return self._block_label[eid]
        except KeyError:
            raise UnsupportedTruth(f"no truth-block record for element {eid}")

    def is_leader(self, eid: int) -> bool:
        if not self._leaders and not self._block_label:
            raise UnsupportedTruth("script carries no truth records")
        return eid in self._leaders

    def leaders_upto(self, s: int):
        return [n for n in range(1, s + 1) if n in self._leaders]

    def condensation(self) -> str:
        raise UnsupportedTruth("scripted presentations have no condensation tag")

    def block_complete_at(self, block_key, cap: int = 0):
        raise UnsupportedTruth("scripted presentations have no completion records")


class _NoTruth(_ScriptedTruth):
    def __init__(self, presentation):
        super().__init__(presentation, {}, set())


def parse_script(text: str):
    inserts: List[Tuple[int, str, str]] = []
    block_label: Dict[int, str] = {}
    leaders = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "insert":
            if len(parts) != 4:
                raise ScriptError(f"line {lineno}: insert takes id, left, right")
            eid = int(parts[1])
            if eid != len(inserts) + 1:
                raise ScriptError(f"line {lineno}: ids must run 1, 2, 3, ...")
            inserts.append((eid, parts[2], parts[3]))
        elif parts[0] == "truth-block":
            if len(parts) != 3:
                raise ScriptError(f"line {lineno}: truth-block takes id, label")
            block_label[int(parts[1])] = parts[2]
        elif parts[0] == "truth-lbe":
            if len(parts) != 2:
                raise ScriptError(f"line {lineno}: truth-lbe takes id")
            leaders.add(int(parts[1]))
        else:
            raise ScriptError(f"line {lineno}: unknown directive {parts[0]!r}")
    return inserts, block_label, leaders


def scripted_presentation(text: str, name: str = "scripted") -> OrderPresentation:
    inserts, block_label, leaders = parse_script(text)
    if not inserts:
        raise ScriptError("script enumerates no elements")
    sched = _ScriptedScheduler(inserts)
    p = OrderPresentation.__new__(OrderPresentation)
    p.expr = None
    p.seed = 0
    p.name = name
    p._sched = sched
    p._keys = []
    p._block_of = []
    p._leader = []
    p._seen_blocks = {}
    p.size = sched.total_size()
    if block_label or leaders:
        p.truth = _ScriptedTruth(p, block_label, leaders)
    else:
        p.truth = _NoTruth(p)
    # materialize keys eagerly; scripted orders are small
    for i in range(p.size):
        key, _ = sched.emitted[i]
        p._keys.append(key)
    return p


def scripted_from_inserts(inserts: Sequence[Tuple[int, str, str]], name: str = "scripted") -> OrderPresentation:
    """Build a scripted presentation from already-parsed insert tuples."""
    lines = [f"insert {i} {l} {r}" for i, l, r in inserts]
    return scripted_presentation("\n".join(lines), name=name)
