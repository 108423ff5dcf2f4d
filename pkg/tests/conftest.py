import random

import pytest

from blocklab.order import OnHistory
from blocklab.order.scripted import scripted_presentation


# BLK1: a small scripted order plus a scripted on-history, used by the
# block and provider tests.  Keys by midpoint insertion; final order is
# 3 6 8 1 9 11 4 5 12 2 7 10.
BLK1_SCRIPT = """
# twelve elements, inserted around both ends and the middle
insert 1 MIN MAX
insert 2 1 MAX
insert 3 MIN 1
insert 4 1 2
insert 5 4 2
insert 6 3 1
insert 7 2 MAX
insert 8 6 1
insert 9 1 4
insert 10 7 MAX
insert 11 9 4
insert 12 5 2
"""

BLK1_ON_SETS = {
    1: {1},
    2: {1, 2},
    3: set(),
    4: {4},
    5: {1},
    6: {4, 6},
    7: set(),
    8: {2},
    9: {4},
    10: {1},
    11: set(),
    12: set(),
}


@pytest.fixture
def blk1():
    p = scripted_presentation(BLK1_SCRIPT, name="BLK1")
    hist = OnHistory()
    for s in range(1, 13):
        hist.record(s, sorted(BLK1_ON_SETS[s]))
    return p, hist


def random_scripted_scenario(rng: random.Random, size: int):
    """A random scripted order plus a random on-history over it."""
    inserts = [(1, "MIN", "MAX")]
    order = [1]
    for eid in range(2, size + 1):
        slot = rng.randrange(len(order) + 1)
        left = "MIN" if slot == 0 else str(order[slot - 1])
        right = "MAX" if slot == len(order) else str(order[slot])
        inserts.append((eid, left, right))
        order.insert(slot, eid)
    lines = [f"insert {i} {l} {r}" for i, l, r in inserts]
    p = scripted_presentation("\n".join(lines), name="random")
    hist = OnHistory()
    for s in range(1, size + 1):
        on = {n for n in range(1, s + 1) if rng.random() < 0.3}
        hist.record(s, sorted(on))
    return p, hist
