"""block_at_stage and the two on-providers."""

import random
from fractions import Fraction

import pytest

from blocklab.order import (
    Fin,
    IntrinsicFreshWitness,
    OnHistory,
    OracleScheduled,
    Staircase,
    block_at_stage,
    enumerate_to,
    make_presentation,
    on,
)
from blocklab.verify import brute_block_at_stage
from conftest import random_scripted_scenario


def test_block_never_on_is_singleton(blk1):
    p, hist = blk1
    # element 5 is never on; last_on = 1 excludes everything else
    assert block_at_stage(p, 5, 12, hist) == [5]


def test_block_first_stage():
    p = make_presentation(Fin(3), 0)
    hist = OnHistory()
    hist.record(1, [1])
    assert block_at_stage(p, 1, 1, hist) == [1]


def test_block_out_of_range(blk1):
    p, hist = blk1
    with pytest.raises(ValueError):
        block_at_stage(p, 13, 12, hist)


def test_blk1_hand_derived(blk1):
    p, hist = blk1
    # last on-stage of 4 before 12 is 9; ids >= 9 and ids < 4 are excluded,
    # and nothing between 4 and 5 was on within [9, 12]
    assert block_at_stage(p, 4, 12, hist) == [4, 5]
    assert brute_block_at_stage(p, 4, 12, hist) == [4, 5]


def test_blk1_all_pairs_match_brute(blk1):
    p, hist = blk1
    for s in range(1, 13):
        for n in range(1, s + 1):
            assert block_at_stage(p, n, s, hist) == brute_block_at_stage(p, n, s, hist)


def test_randomized_blocks_match_brute():
    rng = random.Random(20240811)
    for _ in range(60):
        size = rng.randrange(4, 28)
        p, hist = random_scripted_scenario(rng, size)
        for _ in range(8):
            s = rng.randrange(1, size + 1)
            n = rng.randrange(1, s + 1)
            assert block_at_stage(p, n, s, hist) == brute_block_at_stage(p, n, s, hist)


def test_block_contains_n_and_contiguous(blk1):
    p, hist = blk1
    for s in range(1, 13):
        view = enumerate_to(p, s).ordered
        for n in range(1, s + 1):
            blk = block_at_stage(p, n, s, hist)
            assert n in blk
            i = view.index(blk[0])
            assert view[i : i + len(blk)] == blk
            assert all(m >= n for m in blk)


# -- providers ---------------------------------------------------------------


def test_intrinsic_element_one_always_on():
    p = make_presentation(Staircase(), 7)
    prov = IntrinsicFreshWitness()
    for s in range(1, 30):
        for n in range(1, s + 1):
            on(prov, p, n, s)  # keep query order canonical
        assert prov.on(p, 1, s) is True


def test_intrinsic_blk1_on_stages(blk1):
    # counter replay by hand: n=3 needs a fresh witness against 1 and 2
    # each time; the order grows one between 1 and 3 at stages 6 and 8.
    p, _ = blk1
    prov = IntrinsicFreshWitness()
    stages = []
    for s in range(1, 13):
        for n in range(1, s + 1):
            r = on(prov, p, n, s)
            if n == 3 and r:
                stages.append(s)
    assert stages == [6, 8]


def test_intrinsic_idempotent_queries():
    p = make_presentation(Staircase(), 7)
    prov = IntrinsicFreshWitness()
    for s in range(1, 15):
        first = [prov.on(p, n, s) for n in range(1, s + 1)]
        again = [prov.on(p, n, s) for n in range(1, s + 1)]
        assert first == again


def test_intrinsic_non_leader_stops_coming_on():
    p = make_presentation(Staircase(), 7)
    prov = IntrinsicFreshWitness()
    horizon = 600
    last_on = {}
    for s in range(1, horizon + 1):
        for n in range(1, min(s, 12) + 1):
            if prov.on(p, n, s):
                last_on[n] = s
    for n in range(1, 13):
        if not p.truth.is_leader(n):
            bk = p.truth.block_key(n)
            done = p.truth.block_complete_at(bk)
            if done is not None and done < horizon // 2:
                assert last_on.get(n, 0) <= horizon - 50, f"non-leader {n} still on"


def test_oracle_sync_property():
    p = make_presentation(Staircase(), 3)
    prov = OracleScheduled(sync_period=10, noise=Fraction(1, 4), seed=5)
    p.extend_to(100)
    for s in range(10, 101, 10):
        got = {n for n in range(1, s + 1) if prov.on(p, n, s)}
        assert got == set(p.truth.leaders_upto(s))


def test_oracle_sync_trivial_leader():
    p = make_presentation(Staircase(), 1)
    prov = OracleScheduled(sync_period=50, noise=Fraction(1, 10), seed=0)
    p.extend_to(100)
    for n in p.truth.leaders_upto(100):
        assert prov.on(p, n, 100) is True


def test_oracle_noise_deterministic_and_seed_sensitive():
    p = make_presentation(Staircase(), 3)
    p.extend_to(60)
    a = OracleScheduled(7, Fraction(1, 3), seed=1)
    b = OracleScheduled(7, Fraction(1, 3), seed=1)
    c = OracleScheduled(7, Fraction(1, 3), seed=2)
    seq_a = [(n, s) for s in range(1, 61) for n in range(1, s + 1) if a.on(p, n, s)]
    seq_b = [(n, s) for s in range(1, 61) for n in range(1, s + 1) if b.on(p, n, s)]
    seq_c = [(n, s) for s in range(1, 61) for n in range(1, s + 1) if c.on(p, n, s)]
    assert seq_a == seq_b
    assert seq_a != seq_c


def test_oracle_zero_noise_is_truth():
    p = make_presentation(Staircase(), 3)
    prov = OracleScheduled(7, Fraction(0), seed=1)
    p.extend_to(40)
    for s in range(1, 41):
        got = {n for n in range(1, s + 1) if prov.on(p, n, s)}
        assert got == set(p.truth.leaders_upto(s))
