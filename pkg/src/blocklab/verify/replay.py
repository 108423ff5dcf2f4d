"""Straight-line interpreter for the copy construction.

This is the reference implementation used to cross-check the
tree-driven engine: flat dictionaries keyed by full branch paths, full
rescans every stage, no incremental caches.  It is deliberately naive
and only meant for desk-scale fixtures (tens of stages).

Semantics (shared with the engine; the operational pins):

* The guess tree has three slots per level n.  Slot choices:
  sub-1 ``(0,)`` when n is on (left) else ``(1,)``; sub-2 ``(0,)``
  skip, ``(1, stamp, p, q)`` for a selected pair (stamp = max(p, q),
  the stage the pair first existed), ``(2,)`` when no pair is on;
  sub-3 ``(0,)`` skip, ``(1, k)`` for candidate position k, ``(2,)``
  when no candidate qualifies.  A node's identity is its full choice
  path, so re-created nodes are fresh incarnations.

* Defining any slot choice c blanket-prunes every live node whose path
  agrees up to the slot and exceeds c there.  The skip choice ``(0,)``
  therefore wipes the pair machinery, while the no-selection choice
  ``(2,)`` wipes nothing and a later real selection wipes the work done
  under ``(2,)``.

* Sub-2 for level n concerns the M-element n.  Its admissible interval
  lies strictly between the blocks of the referents of the clusters
  (labeled by earlier nodes on today's path) flanking it in M.  The
  selected pair is the two smallest-id on elements inside the interval
  (written in L order); this equals the leftmost on pair in the list
  ordered by (first-existence stage, id pair).

* The selected preimage is the minimum, by (largest id in the window,
  id tuple), over windows of exactly the fallow-cluster size that are
  contiguous today strictly inside (p, q).  A window that was ever
  broken can never be contiguous again, so today's windows are exactly
  the never-broken candidates.

* Candidates at sub-3 are all i with id at most the least id of the
  preimage lying in [p, q]; the list starts in id order and moves
  disturbed entries (new element between i and the preimage) to the
  right end, id order among simultaneous movers.  A position whose
  referent changed is injured; surviving referents' clusters are cut
  back to their current blocks before selection.

* Fresh M-elements always take the next unused id.  A brand-new
  cluster is placed as far left as possible inside its admissible
  M-interval without landing strictly inside any live labeled cluster.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Set, Tuple

from ..faults import ConstructionFault, SoundnessFault
from ..order.blocks import block_at_stage
from ..order.history import OnHistory
from ..order.presentation import OrderPresentation
from ..order.providers import OnProvider
from ..construction import events as E


class _Node:
    __slots__ = ("id", "level", "sub", "ref", "labeled", "bij", "snapshot", "ilist", "between")

    def __init__(self, nid: int, level: int, sub: int):
        self.id = nid
        self.level = level
        self.sub = sub
        self.ref: Optional[int] = None
        self.labeled: Set[int] = set()
        self.bij: Dict[int, int] = {}
        self.snapshot = None  # (fallow tuple, preimage tuple)
        self.ilist: Optional[List[int]] = None
        self.between: Dict[int, int] = {}


class ReplayInterpreter:
    def __init__(
        self,
        presentation: OrderPresentation,
        provider: OnProvider,
        sink: E.EventSink,
        nonblock_bound: int = 64,
        f_bound: int = 16,
        emit_hashes: bool = True,
    ):
        self.p = presentation
        self.provider = provider
        self.sink = sink
        self.nb_bound = nonblock_bound
        self.f_bound = f_bound
        self.emit_hashes = emit_hashes

        self.stage = 0
        self.hist = OnHistory()
        self.nodes: Dict[tuple, _Node] = {}
        self.morder: List[int] = []
        self.labels: Dict[int, Set[tuple]] = {}
        self.logged: Dict[Tuple[int, int], int] = {}
        self.next_mid = 1
        self.next_node_id = 1
        self._blocks: Dict[int, List[int]] = {}
        self._view: List[int] = []
        self._on: Set[int] = set()

    # -- helpers -------------------------------------------------------------

    def _emit(self, rec: dict) -> None:
        self.sink.emit(rec)

    def _fault(self, code: str, detail: str = "", soundness: bool = False) -> None:
        self._emit(E.ev_fault(self.stage, code, detail))
        cls = SoundnessFault if soundness else ConstructionFault
        raise cls(self.stage, code, detail)

    def _block(self, n: int) -> List[int]:
        blk = self._blocks.get(n)
        if blk is None:
            blk = block_at_stage(self.p, n, self.stage, self.hist)
            self._blocks[n] = blk
        return blk

    def _mpos(self, mid: int) -> int:
        return self.morder.index(mid)

    def _kill(self, nk: tuple, why: str) -> None:
        nd = self.nodes.pop(nk)
        for m in sorted(nd.labeled, key=self._mpos):
            self.labels[m].discard(nk)
            self._emit(E.ev_label_remove(self.stage, nd.id, m))
        self._emit(E.ev_prune(self.stage, nd.id, why))

    def _kill_matching(self, doomed: List[tuple], why: str) -> None:
        for nk in sorted(doomed):
            self._kill(nk, why)

    def _blanket_prune(self, prefix: List[tuple], choice: tuple) -> None:
        depth = len(prefix)
        pfx = tuple(prefix)
        doomed = [
            nk
            for nk in self.nodes
            if len(nk) > depth and nk[:depth] == pfx and nk[depth] > choice
        ]
        self._kill_matching(doomed, "right")

    def _injure_below(self, pk: tuple, why: str) -> None:
        doomed = [nk for nk in self.nodes if len(nk) > len(pk) and nk[: len(pk)] == pk]
        self._kill_matching(doomed, why)

    def _kill_position(self, pk: tuple, why: str) -> None:
        doomed = [nk for nk in self.nodes if nk[: len(pk)] == pk]
        self._kill_matching(doomed, why)

    def _create(self, nk: tuple, level: int, sub: int, choice_str: str) -> _Node:
        nd = _Node(self.next_node_id, level, sub)
        self.next_node_id += 1
        self.nodes[nk] = nd
        parent = 0
        for cut in range(len(nk) - 1, 0, -1):
            anc = self.nodes.get(nk[:cut])
            if anc is not None:
                parent = anc.id
                break
        self._emit(E.ev_node_create(self.stage, nd.id, level, sub, choice_str, parent))
        return nd

    def _add_label(self, nk: tuple, mid: int) -> None:
        nd = self.nodes[nk]
        nd.labeled.add(mid)
        self.labels[mid].add(nk)
        self._emit(E.ev_label_add(self.stage, nd.id, mid))

    def _remove_label(self, nk: tuple, mid: int) -> None:
        nd = self.nodes[nk]
        nd.labeled.discard(mid)
        self.labels[mid].discard(nk)
        self._emit(E.ev_label_remove(self.stage, nd.id, mid))

    def _insert_m(self, pos: int) -> int:
        """New M-element at list position pos; returns its id."""
        mid = self.next_mid
        self.next_mid += 1
        left = self.morder[pos - 1] if pos > 0 else 0
        right = self.morder[pos] if pos < len(self.morder) else 0
        self.morder.insert(pos, mid)
        self.labels[mid] = set()
        self._emit(E.ev_m_insert(self.stage, mid, left, right))
        return mid

    def _splits_cluster(self, pos: int) -> bool:
        """Would inserting at list position pos land inside a live cluster?"""
        if pos <= 0 or pos >= len(self.morder):
            return False
        a = self.morder[pos - 1]
        b = self.morder[pos]
        return bool(self.labels[a] & self.labels[b])

    # -- cluster arithmetic ----------------------------------------------------

    def _cluster_sorted(self, nk: tuple) -> List[int]:
        return sorted(self.nodes[nk].labeled, key=self._mpos)

    def _sync_image(self, nk: tuple, n: int) -> None:
        """Make nk's cluster bijective with the block around n (anchor rule)."""
        nd = self.nodes[nk]
        block = self._block(n)
        b_l = block.index(n)
        b_r = len(block) - 1 - b_l
        cluster = self._cluster_sorted(nk)
        if not cluster:
            pos = self._new_cluster_position(n)
            anchor = self._insert_m(pos)
            self._add_label(nk, anchor)
            cluster = [anchor]
        anchor = min(cluster)
        a_idx = cluster.index(anchor)
        c_l = a_idx
        c_r = len(cluster) - 1 - a_idx
        # left side: shrink outermost-first, then grow outward
        for _ in range(c_l - b_l):
            victim = cluster.pop(0)
            self._remove_label(nk, victim)
        for _ in range(b_l - c_l):
            pos = self._mpos(cluster[0])
            if self._splits_cluster(pos):
                self._fault("grow-split", f"left growth of node {nd.id} splits a cluster")
            mid = self._insert_m(pos)
            self._add_label(nk, mid)
            cluster.insert(0, mid)
        # right side
        for _ in range(c_r - b_r):
            victim = cluster.pop()
            self._remove_label(nk, victim)
        for _ in range(b_r - c_r):
            pos = self._mpos(cluster[-1]) + 1
            if self._splits_cluster(pos):
                self._fault("grow-split", f"right growth of node {nd.id} splits a cluster")
            mid = self._insert_m(pos)
            self._add_label(nk, mid)
            cluster.append(mid)
        nd.bij = dict(zip(block, cluster))
        if nd.bij[n] != anchor:
            self._fault("anchor-misaligned", f"node {nd.id}")

    def _new_cluster_position(self, n: int) -> int:
        """Leftmost admissible M list position for a brand-new cluster."""
        lo = -1  # may insert at position lo+1 .. hi
        hi = len(self.morder)
        for nk in self.on_path_label_nodes:
            nd = self.nodes[nk]
            r = nd.ref
            if r is None or not nd.labeled:
                continue
            cluster = self._cluster_sorted(nk)
            if self.p.lt(r, n):
                lo = max(lo, self._mpos(cluster[-1]))
            else:
                hi = min(hi, self._mpos(cluster[0]))
        if lo >= hi:
            self._fault("placement-contradiction", f"element {n}")
        pos = lo + 1
        while pos <= hi and self._splits_cluster(pos):
            pos += 1
        if pos > hi:
            self._fault("placement-contradiction", f"element {n}: no admissible slot")
        return pos

    def _compute_fallow(self, nM: int, pk: tuple) -> List[int]:
        """Contiguous cluster around nM from labels strictly left of pk."""
        members: Set[int] = {nM}
        for lk in self.labels[nM]:
            if lk < pk and pk[: len(lk)] != lk:
                members |= self.nodes[lk].labeled
        fallow = sorted(members, key=self._mpos)
        base = self._mpos(fallow[0])
        for off, mid in enumerate(fallow):
            if self._mpos(mid) != base + off:
                self._fault("fallow-gap", f"fallow around {nM} not contiguous")
        return fallow

    def _select_preimage(self, p_el: int, q_el: int, k: int) -> Optional[List[int]]:
        kp = self.p.key(p_el)
        kq = self.p.key(q_el)
        seg = [e for e in self._view if kp < self.p.key(e) < kq]
        best = None
        for i in range(len(seg) - k + 1):
            win = seg[i : i + k]
            cand = (max(win), tuple(win))
            if best is None or cand < best:
                best = cand
        return list(best[1]) if best else None

    # -- the stage loop --------------------------------------------------------

    def run_stage(self) -> None:
        self.stage += 1
        s = self.stage
        self.p.extend_to(s)
        self._emit(E.ev_stage_begin(s))
        on_list = self.provider.on_set(self.p, s)
        self.hist.record(s, on_list)
        self._on = set(on_list)
        self._emit(E.ev_on_set(s, on_list))
        self._blocks = {}
        self._view = sorted(range(1, s + 1), key=lambda i: self.p.key(i))

        prefix: List[tuple] = []
        self.on_path_label_nodes: List[tuple] = []
        self._path_set: Set[tuple] = set()
        referenced: Set[int] = set()
        path_len = 0

        for n in range(1, s + 1):
            # --- sublevel one ---
            c1 = (0,) if n in self._on else (1,)
            self._blanket_prune(prefix, c1)
            prefix.append(c1)
            if n in self._on and n not in referenced:
                pk = tuple(prefix)
                nd = self.nodes.get(pk)
                if nd is None:
                    nd = self._create(pk, n, 1, "L")
                nd.ref = n
                self._sync_image(pk, n)
                self._emit(E.ev_path_s1(s, nd.id, n, len(self._block(n))))
                path_len += 1
                self.on_path_label_nodes.append(pk)
                self._path_set.add(pk)
                referenced.add(n)

            # --- sublevel two ---
            nM = n if n <= len(self.morder) else None
            covered = nM is not None and bool(self.labels[nM] & self._path_set)
            if nM is None or covered:
                self._blanket_prune(prefix, (0,))
                prefix.append((0,))
                self._blanket_prune(prefix, (0,))
                prefix.append((0,))
                continue

            pair = self._find_pair(nM)
            if pair is None:
                prefix.append((2,))
                prefix.append((2,))
                continue
            p_el, q_el = pair
            stamp = max(p_el, q_el)
            c2 = (1, stamp, p_el, q_el)
            self._blanket_prune(prefix, c2)
            prefix.append(c2)
            pk2 = tuple(prefix)
            nd2 = self.nodes.get(pk2)
            if nd2 is None:
                nd2 = self._create(pk2, n, 2, f"pq:{stamp}:{p_el}:{q_el}")
            fallow = self._compute_fallow(nM, pk2)
            preimage = self._select_preimage(p_el, q_el, len(fallow))
            self._emit(E.ev_path_s2(s, nd2.id, [p_el, q_el], fallow, preimage))
            path_len += 1
            if preimage is None:
                prefix.append((2,))
                continue

            snap = (tuple(fallow), tuple(preimage))
            if nd2.snapshot != snap:
                self._injure_below(pk2, "preimage")
                nd2.snapshot = snap
                nd2.ilist = None
                nd2.between = {}

            self._refresh_ilist(nd2, pk2, preimage, p_el, q_el)
            self._cutbacks(nd2, pk2)
            k_sel = self._select_candidate(nd2, preimage)
            if k_sel is None:
                prefix.append((2,))
                continue
            c3 = (1, k_sel)
            self._blanket_prune(prefix, c3)
            prefix.append(c3)
            pk3 = tuple(prefix)
            nd3 = self.nodes.get(pk3)
            i_sel = nd2.ilist[k_sel]
            if nd3 is None:
                nd3 = self._create(pk3, n, 3, f"cand:{k_sel}")
            nd3.ref = i_sel
            self._emit(E.ev_path_s3(s, nd3.id, i_sel, k_sel))
            path_len += 1
            self._absorb(pk3, i_sel, nM, fallow, preimage)
            self.on_path_label_nodes.append(pk3)
            self._path_set.add(pk3)
            referenced.add(i_sel)

        self._finalize(s, path_len)

    # -- sublevel two/three helpers -------------------------------------------

    def _find_pair(self, nM: int) -> Optional[Tuple[int, int]]:
        mpos = self._mpos(nM)
        left_node = right_node = None
        for i in range(mpos - 1, -1, -1):
            hits = self.labels[self.morder[i]] & self._path_set
            if hits:
                if len(hits) > 1:
                    self._fault("onpath-overlap", f"element {self.morder[i]}")
                left_node = next(iter(hits))
                break
        for i in range(mpos + 1, len(self.morder)):
            hits = self.labels[self.morder[i]] & self._path_set
            if hits:
                if len(hits) > 1:
                    self._fault("onpath-overlap", f"element {self.morder[i]}")
                right_node = next(iter(hits))
                break
        lo_key = hi_key = None
        if left_node is not None:
            blk = self._block(self.nodes[left_node].ref)
            lo_key = self.p.key(blk[-1])
        if right_node is not None:
            blk = self._block(self.nodes[right_node].ref)
            hi_key = self.p.key(blk[0])
        inside = []
        for e in sorted(self._on):
            ke = self.p.key(e)
            if lo_key is not None and not (lo_key < ke):
                continue
            if hi_key is not None and not (ke < hi_key):
                continue
            inside.append(e)
            if len(inside) == 2:
                break
        if len(inside) < 2:
            return None
        a, b = inside
        return (a, b) if self.p.lt(a, b) else (b, a)

    def _refresh_ilist(self, nd2: _Node, pk2: tuple, preimage: List[int], p_el: int, q_el: int) -> None:
        kp, kq = self.p.key(p_el), self.p.key(q_el)
        min_pre = min(preimage)

        def between_count(i: int) -> int:
            ki = self.p.key(i)
            k0 = self.p.key(preimage[0])
            k1 = self.p.key(preimage[-1])
            if ki < k0:
                lo, hi = ki, k0
            elif ki > k1:
                lo, hi = k1, ki
            else:
                return 0
            return sum(1 for e in self._view if lo < self.p.key(e) < hi)

        if nd2.ilist is None:
            cand = [i for i in range(1, min_pre + 1) if kp <= self.p.key(i) <= kq]
            nd2.ilist = cand
            nd2.between = {i: between_count(i) for i in cand}
            return
        old = nd2.ilist
        disturbed = []
        stay = []
        for i in old:
            c = between_count(i)
            if c > nd2.between[i]:
                disturbed.append(i)
            else:
                stay.append(i)
            nd2.between[i] = c
        new = stay + sorted(disturbed)
        for k, i in enumerate(new):
            if old[k] != i:
                self._kill_position(pk2 + ((1, k),), "referent")
        nd2.ilist = new

    def _cutbacks(self, nd2: _Node, pk2: tuple) -> None:
        for k, i in enumerate(nd2.ilist):
            nk = pk2 + ((1, k),)
            nd = self.nodes.get(nk)
            if nd is None or nd.ref is None:
                continue
            if nd.ref != i:
                self._fault("referent-mismatch", f"position {k}")
            blk = set(self._block(i))
            gone = [a for a in nd.bij if a not in blk]
            victims = sorted((nd.bij[a] for a in gone), key=self._mpos)
            for m in victims:
                self._remove_label(nk, m)
            for a in gone:
                del nd.bij[a]

    def _select_candidate(self, nd2: _Node, preimage: List[int]) -> Optional[int]:
        pre = set(preimage)
        for k, i in enumerate(nd2.ilist):
            if i not in self._on:
                continue
            blk = set(self._block(i))
            if not pre <= blk:
                continue
            ok = True
            for j in range(k):
                if not set(self._block(nd2.ilist[j])) <= blk:
                    ok = False
                    break
            if ok:
                return k
        return None

    def _absorb(self, pk3: tuple, i: int, nM: int, fallow: List[int], preimage: List[int]) -> None:
        nd3 = self.nodes[pk3]
        members: Set[int] = {nM}
        for lk in self.labels[nM]:
            members |= self.nodes[lk].labeled
        cluster = sorted(members, key=self._mpos)
        block = self._block(i)
        b_l = block.index(preimage[0])
        b_r = len(block) - 1 - block.index(preimage[-1])
        c_l = cluster.index(fallow[0])
        c_r = len(cluster) - 1 - cluster.index(fallow[-1])
        if c_l > b_l or c_r > b_r:
            self._fault(
                "absorb-overflow",
                f"node {nd3.id}: cluster {c_l}/{c_r} exceeds block {b_l}/{b_r}",
            )
        for m in cluster:
            if pk3 not in self.labels[m]:
                self._add_label(pk3, m)
        for _ in range(b_l - c_l):
            pos = self._mpos(cluster[0])
            if self._splits_cluster(pos):
                self._fault("grow-split", f"absorb left growth at node {nd3.id}")
            mid = self._insert_m(pos)
            self._add_label(pk3, mid)
            cluster.insert(0, mid)
        for _ in range(b_r - c_r):
            pos = self._mpos(cluster[-1]) + 1
            if self._splits_cluster(pos):
                self._fault("grow-split", f"absorb right growth at node {nd3.id}")
            mid = self._insert_m(pos)
            self._add_label(pk3, mid)
            cluster.append(mid)
        nd3.bij = dict(zip(block, cluster))
        for a, m in zip(preimage, fallow):
            if nd3.bij[a] != m:
                self._fault("absorb-misaligned", f"node {nd3.id}")

    # -- finalize ---------------------------------------------------------------

    def _finalize(self, s: int, path_len: int) -> None:
        new_pairs = []
        mids = self.morder
        for x in range(len(mids)):
            for y in range(x + 1, len(mids)):
                a, b = mids[x], mids[y]
                if a > b:
                    a, b = b, a
                shared = bool(self.labels[a] & self.labels[b])
                pair = (a, b)
                if shared:
                    if pair in self.logged:
                        self._fault(
                            "nonblock-unsound", f"logged pair {pair} shares a label", soundness=True
                        )
                    continue
                if pair not in self.logged:
                    self.logged[pair] = s
                    new_pairs.append(pair)
        for a, b in sorted(new_pairs):
            if a <= self.nb_bound and b <= self.nb_bound:
                self._emit(E.ev_nonblock(s, a, b))

        f: Dict[int, int] = {}
        fnode: Dict[int, int] = {}
        for nk in self.on_path_label_nodes:
            nd = self.nodes[nk]
            for a in sorted(nd.bij):
                if a not in f:
                    f[a] = nd.bij[a]
                    fnode[a] = nd.id
        if len(set(f.values())) != len(f):
            self._fault("f-not-injective", "")
        dom = sorted(f, key=lambda a: self.p.key(a))
        images = [self._mpos(f[a]) for a in dom]
        if images != sorted(images):
            self._fault("f-not-monotone", "")

        f_entries = [[a, f[a], fnode[a]] for a in sorted(f) if a <= self.f_bound]
        inv = {m: a for a, m in f.items()}
        finv_entries = [[m, inv[m]] for m in sorted(inv) if m <= self.f_bound]
        self._emit(E.ev_f_snapshot(s, f_entries, finv_entries))

        hashes = None
        if self.emit_hashes:
            label_pairs = sorted(
                (m, self.nodes[nk].id) for m, lks in self.labels.items() for nk in lks
            )
            hashes = {
                "m": E.digest(self.morder),
                "labels": E.digest(label_pairs),
                "f": E.digest(sorted(f.items())),
            }
        self._emit(
            E.ev_stage_end(s, len(self.morder), len(f), len(new_pairs), path_len, hashes)
        )

    def run(self, stages: int) -> None:
        for _ in range(stages):
            self.run_stage()
