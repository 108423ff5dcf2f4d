"""Stage-wise presentations of linear orders, with ground truth.

A presentation enumerates one element per stage; the element enumerated
at stage ``s`` has id ``s``.  Each element receives a permanent
:class:`PositionKey`, so comparator answers never change once both
elements exist.

Schedule rule (all decisions go through :func:`blocklab._mix.mix64`, so
runs are bit-reproducible given ``(expr, seed)``):

* A *unit scheduler* drives one block family.  It keeps a FIFO queue of
  ``active`` (born, incomplete) blocks.  At its local stage ``t``:

  - if no block is active, a new block is born (error if the family is
    exhausted);
  - else if the family has more blocks and ``mix64(seed, TAG_BIRTH, t) % 3 == 0``,
    a new block is born;
  - else the front block of the queue is popped and emits its next
    element, rejoining the back of the queue unless complete.

  A birth emits the block's first element immediately and joins the
  back of the queue (not at all if already complete, i.e. size one).

* Dense families place the ``j``-th born block at the midpoint of the
  gap ``mix64(seed, TAG_GAP, j) % (#blocks + 1)`` among existing block
  keys inside the open unit interval.  Single-block families use key
  1/2.

* Intra-block emission: finite and omega blocks grow rightward with
  intra keys 0, 1, 2, ...; omega* blocks grow leftward 0, -1, -2, ...;
  zeta blocks alternate starting leftward: 0, -1, 1, -2, 2, ...

* ``Sum`` concatenates parts by offsetting block keys with cumulative
  part widths and serves the non-exhausted parts round-robin with a
  rotating pointer.  Part ``j`` runs with derived seed
  ``mix64(seed, TAG_PART, j) % 2**32``.

* ``Staircase`` block sizes follow the diagonal sequence 1, 1,2, 1,2,3,
  ... so that every finite size is born densely often.

* ``PrimeBlockReplacement`` gives birth ``i`` size ``p_i``; a toggle to
  non-member switches the block to zeta growth (reopening it if it had
  closed), and a toggle back to member is rejected if the block has
  outgrown ``p_i``.  Toggle stages are local to the prime family's
  scheduler.
"""

from __future__ import annotations

import bisect
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .._mix import mix64, TAG_BIRTH, TAG_GAP, TAG_DESC
from .keys import PositionKey
from . import types as T
from .types import (
    TypeExpr,
    Fin,
    Omega,
    OmegaStar,
    Zeta,
    Sum,
    EtaShuffle,
    Staircase,
    OmegaTimesEta,
    PrimeBlockReplacement,
    InvalidExpr,
    K_FIN,
    K_OMEGA,
    K_OMEGA_STAR,
    K_ZETA,
)

TAG_PART = 0x5EED
_SEED_MOD = 1 << 32
_TRUTH_EXTEND_CAP = 2_000_000


class PresentationExhausted(RuntimeError):
    """Enumeration requested beyond a finite presentation's size."""


class UnsupportedTruth(RuntimeError):
    """Ground-truth query on a presentation without truth records."""


def _child_seed(seed: int, j: int) -> int:
    return mix64(seed, TAG_PART, j) % _SEED_MOD


def _primes():
    """2, 3, 5, 7, 11, ..."""
    found: List[int] = []
    n = 2
    while True:
        if all(n % p for p in found):
            found.append(n)
            yield n
        n += 1


def staircase_size(j: int) -> int:
    """Diagonal size sequence: 1 | 1 2 | 1 2 3 | ... (j is 1-based)."""
    t = 0
    while (t + 1) * (t + 2) // 2 < j:
        t += 1
    return j - t * (t + 1) // 2


class _Block:
    """Runtime state of one block inside a unit scheduler."""

    __slots__ = (
        "key", "kind", "target", "emitted", "lo", "hi", "zeta_left",
        "first_local", "last_local", "birth_index", "closed", "final_kind",
    )

    def __init__(self, key: Fraction, kind: str, target: Optional[int], birth_index: int):
        self.key = key
        self.kind = kind
        self.target = target  # final size while kind is fin
        self.emitted = 0
        self.lo = 0
        self.hi = -1  # nothing emitted yet
        self.zeta_left = True
        self.first_local = 0
        self.last_local = 0
        self.birth_index = birth_index
        self.closed = False  # permanently complete
        self.final_kind = kind

    def next_intra(self) -> int:
        if self.emitted == 0:
            self.lo = self.hi = 0
            return 0
        if self.kind in (K_FIN, K_OMEGA):
            self.hi += 1
            return self.hi
        if self.kind == K_OMEGA_STAR:
            self.lo -= 1
            return self.lo
        # zeta: alternate, starting leftward
        if self.zeta_left:
            self.zeta_left = False
            self.lo -= 1
            return self.lo
        self.zeta_left = True
        self.hi += 1
        return self.hi

    def complete_now(self) -> bool:
        return self.kind == K_FIN and self.target is not None and self.emitted >= self.target


@dataclass
class BlockInfo:
    """Ground-truth record for one block (ids and stages are presentation-global)."""

    key: Fraction
    first_id: int
    final_kind: str
    final_size: Optional[int]
    last_emit: int
    complete_at: Optional[int]  # stage of last element, once permanently closed
    birth_index: int
    count: int = 0


class _UnitScheduler:
    """One block family over local keys in the open unit interval."""

    def __init__(self, expr: TypeExpr, seed: int):
        self.expr = expr
        self.seed = seed
        self.emitted: List[Tuple[PositionKey, Fraction]] = []
        self.blocks: Dict[Fraction, _Block] = {}
        self._keys_sorted: List[Fraction] = []
        self._active: deque = deque()
        self._births = 0
        self._local_stage = 0
        self._exhausted_source = False
        self._prime_iter = _primes() if isinstance(expr, PrimeBlockReplacement) else None
        self._prime_blocks: Dict[int, _Block] = {}  # position -> block
        self._prime_flags: Dict[int, bool] = {}  # current membership flag
        self._toggles = sorted(expr.toggle_script) if isinstance(expr, PrimeBlockReplacement) else []
        self._toggle_pos = 0
        # single-block families expose their one descriptor up front
        self._single_kind = T.atom_kind(expr)

    # -- birth machinery ----------------------------------------------------

    def _source_has_more(self) -> bool:
        if self._single_kind is not None:
            return self._births == 0
        return True  # dense families never run out of blocks

    def _new_key(self) -> Fraction:
        j = self._births + 1
        if self._single_kind is not None:
            return Fraction(1, 2)
        m = len(self._keys_sorted)
        g = mix64(self.seed, TAG_GAP, j) % (m + 1)
        lo = Fraction(0) if g == 0 else self._keys_sorted[g - 1]
        hi = Fraction(1) if g == m else self._keys_sorted[g]
        return (lo + hi) / 2

    def _descriptor(self, j: int) -> Tuple[str, Optional[int]]:
        expr = self.expr
        if self._single_kind is not None:
            k = expr.k if isinstance(expr, Fin) else None
            return self._single_kind, k
        if isinstance(expr, EtaShuffle):
            d = expr.descriptors[mix64(self.seed, TAG_DESC, j) % len(expr.descriptors)]
            return T.atom_kind(d), (d.k if isinstance(d, Fin) else None)
        if isinstance(expr, Staircase):
            return K_FIN, staircase_size(j)
        if isinstance(expr, OmegaTimesEta):
            return K_OMEGA, None
        if isinstance(expr, PrimeBlockReplacement):
            p = next(self._prime_iter)
            member = self._prime_flags.get(j, True)
            return (K_FIN if member else K_ZETA), p
        raise InvalidExpr(f"cannot schedule {expr!r}")

    def _birth(self) -> _Block:
        j = self._births + 1
        key = self._new_key()
        kind, size = self._descriptor(j)
        blk = _Block(key, kind, size, j)
        if isinstance(self.expr, PrimeBlockReplacement):
            # remember the prime target even while in zeta mode
            blk.target = size
            self._prime_blocks[j] = blk
            blk.final_kind = K_FIN if self.expr.final_member(j) else K_ZETA
        else:
            blk.final_kind = kind
        self._births += 1
        self.blocks[key] = blk
        bisect.insort(self._keys_sorted, key)
        return blk

    # -- prime toggles ------------------------------------------------------

    def _apply_toggles(self, local_stage: int) -> None:
        while self._toggle_pos < len(self._toggles) and self._toggles[self._toggle_pos][0] == local_stage:
            _, pos, member = self._toggles[self._toggle_pos]
            self._toggle_pos += 1
            self._prime_flags[pos] = member
            blk = self._prime_blocks.get(pos)
            if blk is None:
                continue  # unborn: flag applies at birth
            if member:
                if blk.emitted > blk.target:
                    raise InvalidExpr(
                        f"toggle to member at local stage {local_stage}: block {pos} "
                        f"already has {blk.emitted} > {blk.target} elements"
                    )
                blk.kind = K_FIN
                if blk.complete_now():
                    if blk in self._active:
                        self._active.remove(blk)
                    self._maybe_close(blk)
            else:
                blk.kind = K_ZETA
                blk.closed = False
                if blk not in self._active and blk.emitted > 0:
                    self._active.append(blk)

    def _maybe_close(self, blk: _Block) -> None:
        """Mark a fin block permanently closed if no future toggle reopens it."""
        if blk.kind != K_FIN or not blk.complete_now():
            return
        if isinstance(self.expr, PrimeBlockReplacement):
            for t in self._toggles[self._toggle_pos:]:
                if t[1] == blk.birth_index and not t[2]:
                    return  # will reopen
        blk.closed = True

    # -- main loop ----------------------------------------------------------

    def extend_to(self, n: int) -> None:
        while len(self.emitted) < n:
            self._step()

    def _step(self) -> None:
        self._local_stage += 1
        t = self._local_stage
        self._apply_toggles(t)
        if not self._active:
            if not self._source_has_more():
                raise PresentationExhausted(
                    f"presentation of {self.expr!r} has only {len(self.emitted)} elements"
                )
            blk = self._birth()
        elif self._source_has_more() and mix64(self.seed, TAG_BIRTH, t) % 3 == 0:
            blk = self._birth()
        else:
            blk = self._active.popleft()
        intra = blk.next_intra()
        blk.emitted += 1
        blk.last_local = t
        if blk.emitted == 1:
            blk.first_local = t
        self.emitted.append((PositionKey(blk.key, intra), blk.key))
        if blk.complete_now():
            self._maybe_close(blk)
        else:
            self._active.append(blk)

    # -- info ---------------------------------------------------------------

    def total_size(self) -> Optional[int]:
        if isinstance(self.expr, Fin):
            return self.expr.k
        return None


class _SumScheduler:
    """Concatenation of part schedulers, interleaved round-robin."""

    def __init__(self, parts: Sequence[object], widths: Sequence[int]):
        self.parts = list(parts)
        offsets = []
        acc = 0
        for w in widths:
            offsets.append(acc)
            acc += w
        self.offsets = offsets
        self.width = acc
        self.emitted: List[Tuple[PositionKey, Fraction]] = []
        # (part index, local id) for each global id
        self.origin: List[Tuple[int, int]] = []
        self._part_counts = [0] * len(self.parts)
        self._rr = 0
        self._live = list(range(len(self.parts)))

    def extend_to(self, n: int) -> None:
        while len(self.emitted) < n:
            self._step()

    def _step(self) -> None:
        while self._live:
            j = self._live[self._rr % len(self._live)]
            self._rr += 1
            local = self._part_counts[j] + 1
            try:
                self.parts[j].extend_to(local)
            except PresentationExhausted:
                self._live.remove(j)
                continue
            self._part_counts[j] = local
            key, bkey = self.parts[j].emitted[local - 1]
            off = self.offsets[j]
            self.emitted.append((PositionKey(key.block + off, key.intra), bkey + off))
            self.origin.append((j, local))
            return
        raise PresentationExhausted("all parts of the sum are exhausted")

    def total_size(self) -> Optional[int]:
        total = 0
        for p in self.parts:
            s = p.total_size()
            if s is None:
                return None
            total += s
        return total


def _expr_width(expr: TypeExpr) -> int:
    if isinstance(expr, Sum):
        return sum(_expr_width(p) for p in expr.parts)
    return 1


def _build_scheduler(expr: TypeExpr, seed: int):
    if isinstance(expr, Sum):
        parts = [
            _build_scheduler(p, _child_seed(seed, j)) for j, p in enumerate(expr.parts)
        ]
        return _SumScheduler(parts, [_expr_width(p) for p in expr.parts])
    return _UnitScheduler(expr, seed)


# ---------------------------------------------------------------------------


@dataclass
class StageView:
    """The finite order enumerated by a given stage."""

    stage: int
    ordered: List[int]  # element ids sorted by the comparator


class GroundTruth:
    """Generator-supplied oracle; consulted only by verification code."""

    def __init__(self, presentation: "OrderPresentation"):
        self._p = presentation

    def block_key(self, eid: int) -> Fraction:
        self._p.extend_to(eid)
        return self._p._block_of[eid - 1]

    def is_leader(self, eid: int) -> bool:
        """True when eid is the first-enumerated (hence smallest-id) element of its block."""
        self._p.extend_to(eid)
        return self._p._leader[eid - 1]

    def leaders_upto(self, s: int) -> List[int]:
        self._p.extend_to(s)
        return [i + 1 for i in range(s) if self._p._leader[i]]

    def condensation(self) -> str:
        return T.condensation_tag(self._p.expr)

    def block_complete_at(self, block_key: Fraction, cap: int = _TRUTH_EXTEND_CAP) -> Optional[int]:
        """Stage of the block's last element, or None for never-complete blocks."""
        info = self._p._block_info(block_key)
        if info is None:
            raise UnsupportedTruth(f"unknown block key {block_key}")
        if info.final_kind != K_FIN:
            return None
        while info.complete_at is None:
            if len(self._p._keys) >= cap:
                raise RuntimeError(f"block {block_key} not complete within {cap} stages")
            self._p.extend_to(len(self._p._keys) + 16)
            info = self._p._block_info(block_key)
        return info.complete_at

    def block_final_kind(self, block_key: Fraction) -> str:
        info = self._p._block_info(block_key)
        if info is None:
            raise UnsupportedTruth(f"unknown block key {block_key}")
        return info.final_kind

    def block_final_size(self, block_key: Fraction) -> Optional[int]:
        info = self._p._block_info(block_key)
        return info.final_size if info else None


class OrderPresentation:
    """A deterministic stage-wise enumeration of a linear order."""

    def __init__(self, expr: TypeExpr, seed: int, scheduler=None, name: str = ""):
        expr.validate()
        self.expr = expr
        self.seed = seed
        self.name = name or repr(expr)
        self._sched = scheduler if scheduler is not None else _build_scheduler(expr, seed)
        self._keys: List[PositionKey] = []
        self._block_of: List[Fraction] = []
        self._leader: List[bool] = []
        self._seen_blocks: Dict[Fraction, BlockInfo] = {}
        self.truth = GroundTruth(self)
        self.size = self._sched.total_size()

    # -- enumeration --------------------------------------------------------

    def extend_to(self, s: int) -> None:
        if s <= len(self._keys):
            return
        if self.size is not None and s > self.size:
            raise PresentationExhausted(
                f"{self.name} has {self.size} elements; stage {s} requested"
            )
        self._sched.extend_to(s)
        for i in range(len(self._keys), s):
            key, bkey = self._sched.emitted[i]
            self._keys.append(key)
            self._block_of.append(bkey)
            info = self._seen_blocks.get(bkey)
            if info is None:
                blk = self._find_block(bkey)
                info = BlockInfo(
                    key=bkey,
                    first_id=i + 1,
                    final_kind=blk.final_kind,
                    final_size=(blk.target if blk.final_kind == K_FIN else None),
                    last_emit=i + 1,
                    complete_at=None,
                    birth_index=blk.birth_index,
                )
                self._seen_blocks[bkey] = info
                self._leader.append(True)
            else:
                info.last_emit = i + 1
                self._leader.append(False)
            info.count += 1
            if info.final_size is not None and info.count == info.final_size:
                info.complete_at = i + 1

    def _find_block(self, bkey: Fraction) -> _Block:
        sched = self._sched
        while isinstance(sched, _SumScheduler):
            for j, off in enumerate(sched.offsets):
                w = _part_width(sched, j)
                if off < bkey < off + w:
                    bkey = bkey - off
                    sched = sched.parts[j]
                    break
            else:
                raise KeyError(bkey)
        return sched.blocks[bkey]

    def _block_info(self, bkey: Fraction) -> Optional[BlockInfo]:
        return self._seen_blocks.get(bkey)

    def key(self, eid: int) -> PositionKey:
        self.extend_to(eid)
        return self._keys[eid - 1]

    def lt(self, a: int, b: int) -> bool:
        self.extend_to(max(a, b))
        return self._keys[a - 1] < self._keys[b - 1]


def _part_width(sched: _SumScheduler, j: int) -> int:
    nxt = sched.offsets[j + 1] if j + 1 < len(sched.offsets) else sched.width
    return nxt - sched.offsets[j]


# ---------------------------------------------------------------------------
# Operation-level functions.


def make_presentation(expr: TypeExpr, seed: int, name: str = "") -> OrderPresentation:
    expr.validate()
    p = OrderPresentation(expr, seed, name=name)
    if isinstance(expr, PrimeBlockReplacement) and expr.toggle_script:
        # surface overshoot errors eagerly by simulating through the script
        p.extend_to(expr.toggle_script[-1][0])
    return p


def enumerate_to(p: OrderPresentation, s: int) -> StageView:
    if s < 1:
        raise ValueError("stage must be >= 1")
    p.extend_to(s)
    ids = sorted(range(1, s + 1), key=lambda i: p._keys[i - 1])
    return StageView(stage=s, ordered=ids)


def compare(p: OrderPresentation, a: int, b: int) -> str:
    if a == b:
        raise ValueError("compare needs two distinct elements")
    return "lt" if p.lt(a, b) else "gt"


def truth_query(p: OrderPresentation, kind: str, arg=None):
    truth = p.truth
    if truth is None:
        raise UnsupportedTruth("presentation carries no truth records")
    if kind == "blockKey":
        return truth.block_key(arg)
    if kind == "isLBE":
        return truth.is_leader(arg)
    if kind == "condensation":
        return truth.condensation()
    if kind == "blockComplete":
        return truth.block_complete_at(arg)
    raise ValueError(f"unknown truth query {kind!r}")


# ---------------------------------------------------------------------------
# Built-in orders for the CLI and the test harness.


def _parse_atom(spec: str) -> TypeExpr:
    if spec.startswith("fin:"):
        return Fin(int(spec[4:]))
    if spec == "omega":
        return Omega()
    if spec == "omega-star":
        return OmegaStar()
    if spec == "zeta":
        return Zeta()
    if spec.startswith("shuffle:"):
        sizes = [int(x) for x in spec[8:].split(",") if x]
        return EtaShuffle(tuple(Fin(k) for k in sizes))
    raise ValueError(f"unknown order component {spec!r}")


def builtin_presentation(name: str, seed: int) -> OrderPresentation:
    """Resolve a CLI order spec (``builtin:`` prefix optional)."""
    if name.startswith("builtin:"):
        name = name[len("builtin:"):]
    if name == "staircase":
        return make_presentation(Staircase(), seed, name="staircase")
    if name == "primes":
        return make_presentation(PrimeBlockReplacement(()), seed, name="primes")
    if name == "omega-times-eta":
        return make_presentation(OmegaTimesEta(), seed, name="omega-times-eta")
    if name == "prepended-staircase":
        from ..surgery.prepend import prepend_decidable

        base = make_presentation(Staircase(), seed, name="staircase")
        return prepend_decidable(base, OmegaTimesEta())
    if name.startswith("sum:"):
        parts = tuple(_parse_atom(x) for x in name[4:].split("+"))
        return make_presentation(Sum(parts), seed, name=name)
    return make_presentation(_parse_atom(name), seed, name=name)


BUILTIN_ORDERS = (
    "staircase",
    "primes",
    "omega-times-eta",
    "prepended-staircase",
    "fin:<k>",
    "omega",
    "omega-star",
    "zeta",
    "shuffle:<k1,k2,...>",
    "sum:<a>+<b>+...",
)
